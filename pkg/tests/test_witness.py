import itertools
import random
from fractions import Fraction

import pytest

from radocert.codec import system_digest
from radocert.linalg import IntMatrix
from radocert.modules import SystemInstance, explicit_module, free_module, self_module
from radocert.oracle import exhaustive_pr, verify_certificate
from radocert.rings import CATALOG, CyclicRing, Integers, Product
from radocert.witness import (DegenerateSystem, NotPartitionRegular, PartitionRegular, RationalAngle,
                              ZeroDistance, certificate_checks, circle_colour, circle_distance, circle_plan,
                              colour, colour_classes, column_sum, decide, find_constant_solution,
                              h_generators, interval_colour, required_d)

Z = Integers()
DUAL2 = CATALOG["Z2[x]/(x^2)"]
X = (0, 1)


def z4_over_z():
    return explicit_module(Z, [4], [IntMatrix.identity(1)])


def test_column_sum_examples():
    assert column_sum(SystemInstance.build(Z, [[1, 1]], [1])) == (2,)
    assert column_sum(SystemInstance.build(Z, [[1, 1], [1, -1]], [1, 1])) == (2, 0)
    assert column_sum(SystemInstance.build(DUAL2, [[X, X]], [X])) == ((0, 0),)


def test_find_constant_solution_examples():
    assert find_constant_solution(SystemInstance.build(Z, [[1, 1]], [2])) == (1,)
    assert find_constant_solution(SystemInstance.build(Z, [[1, 1]], [1])) is None
    assert find_constant_solution(SystemInstance.build(Z, [[1, 1], [1, -1]], [3, 1])) is None
    assert find_constant_solution(SystemInstance.build(Z, [[1, 1], [1, -1]], [4, 0])) == (2,)


def brute_constant_over_z(system):
    s = [sum(row) for row in system.A]
    b = [t[0] for t in system.b]
    j = next((j for j, x in enumerate(s) if x), None)
    if j is None:
        return (0,) if not any(b) else None
    if b[j] % s[j]:
        return None
    r = b[j] // s[j]
    return (r,) if all(x * r == y for x, y in zip(s, b)) else None


def test_find_constant_solution_matches_division_oracle_over_z():
    rng = random.Random(3)
    for _ in range(500):
        m, n = rng.randint(1, 3), rng.randint(1, 4)
        A = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
        b = [rng.randint(-10, 10) for _ in range(m)]
        s = SystemInstance.build(Z, A, b)
        assert find_constant_solution(s) == brute_constant_over_z(s)


def finite_modules():
    yield "Z4/Z", z4_over_z()
    yield "Z2/Z4", explicit_module(CyclicRing(4), [2], [IntMatrix.identity(1)])
    yield "F4^1 as Z2^2", explicit_module(CATALOG["F4"], [2, 2],
                                          [IntMatrix.identity(2), IntMatrix.from_rows([[0, 1], [1, 1]])])
    yield "Z2[x]/(x^2)^2", free_module(DUAL2, 2)
    for name in ("Z2", "Z3", "Z4", "Z6", "Z2xZ2", "F4", "Z2[x]/(x^2)", "Z4[x]/(x^2)"):
        yield name, self_module(CATALOG[name])


def random_system(rng, module, m, n):
    ring = module.ring
    relems = list(ring.elements()) if ring.is_finite else list(range(-3, 4))
    melems = module.elements()
    A = [[rng.choice(relems) for _ in range(n)] for _ in range(m)]
    while True:
        b = [rng.choice(melems) for _ in range(m)]
        if any(any(t) for t in b):
            return SystemInstance(ring, module, A, b)


@pytest.mark.parametrize("name,module", list(finite_modules()), ids=lambda v: v if isinstance(v, str) else "")
def test_constant_solution_matches_brute_force(name, module):
    rng = random.Random(name)
    for _ in range(60):
        s = random_system(rng, module, rng.randint(1, 2), rng.randint(1, 3))
        sums = column_sum(s)
        brute = [r for r in module.elements() if all(module.act(sj, r) == bj for sj, bj in zip(sums, s.b))]
        found = find_constant_solution(s)
        assert (found is None) == (not brute)
        if found is not None:
            assert found in brute


def test_h_generators_examples():
    assert h_generators(SystemInstance.build(Z, [[1, 1]], [1])) == IntMatrix.from_rows([[2]])
    assert h_generators(SystemInstance.build(Z, [[1, 1], [1, -1]], [1, 1])) == IntMatrix.from_rows([[2, 0]])
    assert h_generators(SystemInstance.build(DUAL2, [[X, X]], [X])) == IntMatrix.zeros(2, 2)


def test_decide_parity():
    s = SystemInstance.build(Z, [[1, 1]], [1])
    v = decide(s)
    assert isinstance(v, NotPartitionRegular)
    cert = v.certificate
    assert cert.u == (1,) and cert.d == 2 and cert.n == 2
    assert cert.system_digest == system_digest(s)
    # the colouring is parity
    for t in range(-10, 10):
        assert colour(cert, (t,)) == (t % 2, t % 2)
    assert colour(cert, (3,)) == (1, 1)
    assert colour(cert, (0,)) == (0, 0)


def test_decide_partition_regular():
    assert decide(SystemInstance.build(Z, [[1, 1]], [2])) == PartitionRegular((1,))


def test_decide_rejects_zero_b():
    with pytest.raises(DegenerateSystem):
        decide(SystemInstance.build(Z, [[1, 1]], [0]))


def test_decide_dual_numbers():
    s = SystemInstance.build(DUAL2, [[X, X]], [X])
    v = decide(s)
    assert isinstance(v, NotPartitionRegular)
    classes = colour_classes(s, v.certificate)
    as_ring = sorted(sorted(DUAL2.from_coords(t) for t in c) for c in classes)
    assert as_ring == [[(0, 0), (0, 1)], [(1, 0), (1, 1)]]
    assert all(ok for _, ok in certificate_checks(s, v.certificate))
    assert not h_generators(s).tolist()[0][0] and v.certificate.d == 2


def test_colour_z4_module():
    s = SystemInstance.build(Z, [[2, 2]], [(2,)], z4_over_z())
    cert = decide(s).certificate
    assert cert.u == (1,) and cert.d == 4
    assert colour(cert, (1,)) == (2, 2)
    assert sorted(map(sorted, colour_classes(s, cert))) == [[(0,), (2,)], [(1,), (3,)]]


def test_colour_count_bounded():
    s = SystemInstance.build(CATALOG["Z6"], [[1, 2, 3]], [1])
    v = decide(s)
    if isinstance(v, NotPartitionRegular):
        assert len(colour_classes(s, v.certificate)) <= v.certificate.d ** v.certificate.n


@pytest.mark.parametrize("name,module", [(n, m) for n, m in finite_modules() if m.size <= 8],
                         ids=lambda v: v if isinstance(v, str) else "")
def test_decide_agrees_with_exhaustive_search(name, module):
    rng = random.Random("agree" + name)
    for _ in range(40):
        s = random_system(rng, module, rng.randint(1, 2), 2)
        v = decide(s)
        is_pr, _ = exhaustive_pr(s)
        assert is_pr == isinstance(v, PartitionRegular)
        if isinstance(v, NotPartitionRegular):
            assert verify_certificate(s, v.certificate, "exhaustive").passed


def monochromatic_solutions(system, cert):
    elems = system.module.elements()
    for x in itertools.product(elems, repeat=system.n):
        if len({colour(cert, t) for t in x}) == 1:
            yield x


@pytest.mark.parametrize("name,module", list(finite_modules()), ids=lambda v: v if isinstance(v, str) else "")
def test_soundness_identity(name, module):
    """u . (A x) == sum_i u_i . x_i, and for monochromatic x that sum is 0 mod d."""
    rng = random.Random("sound" + name)
    for _ in range(20):
        s = random_system(rng, module, rng.randint(1, 2), 2)
        v = decide(s)
        if not isinstance(v, NotPartitionRegular):
            continue
        cert = v.certificate
        ub = sum(a * c for a, c in zip(cert.u, [c for t in s.b for c in t])) % cert.d
        assert ub != 0
        for x in monochromatic_solutions(s, cert):
            ax = [c for t in s.evaluate(x) for c in t]
            lhs = sum(a * c for a, c in zip(cert.u, ax)) % cert.d
            termwise = sum(sum(a * c for a, c in zip(ui, xi)) for ui, xi in zip(cert.column_covectors, x)) % cert.d
            assert lhs == termwise == 0
            assert s.evaluate(x) != s.b


@pytest.mark.parametrize("ring,module,A,b,radius", [
    (CATALOG["Z[i]"], None, [[(1, 0), (1, 1)]], [(1, 0)], 6),
    (CATALOG["Z[x]/(x^2)"], None, [[(0, 1), (0, 1)]], [(0, 1)], 6),
    (Z, free_module(Z, 2), [[1, 2]], [(1, 0)], 6),
    (Product((Z, CyclicRing(2))), None, [[(1, 1), (1, 1)]], [(2, 1)], 8),
    (Z, explicit_module(Z, [0, 3], [IntMatrix.identity(2)]), [[1, 2], [1, -1]], [(3, 2), (0, 2)], 8),
])
def test_infinite_module_certificates(ring, module, A, b, radius):
    s = SystemInstance.build(ring, A, b, module)
    v = decide(s)
    assert isinstance(v, NotPartitionRegular)
    report = verify_certificate(s, v.certificate, radius)
    assert report.passed and report.solutions_examined > 0


def test_interval_colour_examples():
    assert interval_colour(RationalAngle(0, 1), 4) == 0
    assert interval_colour(RationalAngle(1, 2), 4) == 2
    assert interval_colour(RationalAngle(3, 8), 4) == 1
    assert interval_colour(RationalAngle(7, 8), 1) == 0


def test_rational_angle_validation():
    with pytest.raises(ValueError):
        RationalAngle(2, 4)
    with pytest.raises(ValueError):
        RationalAngle(5, 4)
    assert RationalAngle.of(-1, 4) == RationalAngle(3, 4)
    assert RationalAngle.of(Fraction(9, 4)) == RationalAngle(1, 4)


def test_required_d_examples():
    assert required_d(2, RationalAngle(1, 4)) == 9
    assert required_d(1, RationalAngle(1, 2)) == 3
    with pytest.raises(ZeroDistance):
        required_d(1, RationalAngle(0, 1))


def test_required_d_is_minimal_by_search():
    for n in range(1, 6):
        for den in range(2, 20):
            for num in range(1, den):
                if Fraction(num, den).denominator != den:
                    continue
                delta = RationalAngle(num, den)
                dist = min(Fraction(num, den), 1 - Fraction(num, den))
                first = next(d for d in itertools.count(1) if Fraction(n, d) < dist)
                assert required_d(n, delta) == first


@pytest.mark.parametrize("name,module", list(finite_modules()), ids=lambda v: v if isinstance(v, str) else "")
def test_circle_bucket_colouring_blocks(name, module):
    rng = random.Random("circle" + name)
    for _ in range(10):
        s = random_system(rng, module, 1, 2)
        v = decide(s)
        if not isinstance(v, NotPartitionRegular):
            continue
        cert = v.certificate
        buckets = int(circle_plan(s, cert)["buckets"])
        for x in itertools.product(module.elements(), repeat=s.n):
            if len({circle_colour(cert, t, buckets) for t in x}) == 1:
                assert s.evaluate(x) != s.b


def test_circle_distance_symmetric():
    p, q = RationalAngle(1, 8), RationalAngle(7, 8)
    assert circle_distance(p, q) == circle_distance(q, p) == Fraction(1, 4)
