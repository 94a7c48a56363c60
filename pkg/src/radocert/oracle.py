"""Brute-force checks, kept independent of the decision path.

Nothing here uses the Smith normal form: solutions are found by plain
enumeration (finite modules) or by fraction-free elimination with bounded
back-substitution (box search), and colourings of a finite module are
enumerated as set partitions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, Sequence

from . import codec
from .modules import InfiniteModule, SystemInstance, self_module
from .rings import Ring
from .witness import (WitnessCertificate, certificate_checks, colour, column_covectors, find_constant_solution)

DEFAULT_BOX = 25
DEFAULT_CAP = 8


class DigestMismatch(ValueError):
    pass


class ModuleTooLarge(ValueError):
    pass


class TheoremViolation(AssertionError):
    """Exhaustive search and the constant-solution test disagree.

    ``bundle`` is a self-contained, replayable JSON document.
    """

    def __init__(self, bundle: dict):
        super().__init__("partition regularity disagrees with the constant-solution test")
        self.bundle = bundle


# solution enumeration


def _echelon(rows: list[list[int]], order: Sequence[int]):
    """Fraction-free row echelon form, pivoting through columns in ``order``.

    The last entry of each row is the right-hand side. Returns the reduced
    rows and their pivot columns; None if the system is inconsistent.
    """
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in order:
        cand = [i for i in range(r, len(rows)) if rows[i][col]]
        if not cand:
            continue
        p = min(cand, key=lambda i: abs(rows[i][col]))
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r]
        for i in range(r + 1, len(rows)):
            a = rows[i][col]
            if a:
                rows[i] = [piv[col] * x - a * y for x, y in zip(rows[i], piv)]
                g = 0
                for x in rows[i]:
                    g = gcd(g, x)
                if g > 1:
                    rows[i] = [x // g for x in rows[i]]
        pivots.append(col)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    return rows[:r], pivots


def bounded_solutions(rows: Sequence[Sequence[int]], rhs: Sequence[int],
                      bounds: Sequence[tuple[int, int] | None]) -> Iterator[tuple[int, ...]]:
    """All integer ``y`` with ``rows @ y == rhs`` and ``lo <= y[v] <= hi`` per bound.

    Unbounded variables (bound None) must end up as pivots; they are tried
    first so that they always do.
    """
    nv = len(bounds)
    aug = [list(r) + [c] for r, c in zip(rows, rhs)]
    order = [v for v in range(nv) if bounds[v] is None] + [v for v in range(nv) if bounds[v] is not None]
    ech = _echelon(aug, order)
    if ech is None:
        return
    erows, pivots = ech
    free = [v for v in range(nv) if v not in pivots]
    if any(bounds[v] is None for v in free):
        raise ValueError("an unbounded variable is not determined by the equations")
    plan = []
    for row, p in reversed(list(zip(erows, pivots))):
        plan.append((p, row[p], row[-1], [(j, row[j]) for j in range(nv) if j != p and row[j]], bounds[p]))
    y = [0] * nv
    for vals in itertools.product(*(range(bounds[v][0], bounds[v][1] + 1) for v in free)):
        for v, x in zip(free, vals):
            y[v] = x
        for p, coef, c, terms, bnd in plan:
            num = c
            for j, a in terms:
                num -= a * y[j]
            if num % coef:
                break
            x = num // coef
            if bnd is not None and not bnd[0] <= x <= bnd[1]:
                break
            y[p] = x
        else:
            yield tuple(y)


def iter_solutions_in_box(system: SystemInstance, radius: int) -> Iterator[tuple]:
    """Solutions ``x`` in ``M^n`` with every infinite-order coordinate in ``[-radius, radius]``.

    Finite-order coordinates range over their full residue set, so on a
    finite module this is exhaustive.
    """
    mod = system.module
    k, n, m = mod.rank, system.n, system.m
    orders = mod.orders
    nx = n * k
    bounds: list = [(-radius, radius) if o == 0 else (0, o - 1) for _ in range(n) for o in orders]
    # one equation per coordinate of M^m; finite-order coordinates get a slack multiple of the order
    rows, rhs = [], []
    slack = [(j, l) for j in range(m) for l in range(k) if orders[l]]
    for j in range(m):
        mats = [mod.action_matrix(a) for a in system.A[j]]
        for l in range(k):
            row = [0] * (nx + len(slack))
            for i, mat in enumerate(mats):
                for c in range(k):
                    row[i * k + c] = mat[l, c]
            if orders[l]:
                row[nx + slack.index((j, l))] = -orders[l]
            rows.append(row)
            rhs.append(system.b[j][l])
    bounds += [None] * len(slack)
    for y in bounded_solutions(rows, rhs, bounds):
        yield tuple(tuple(y[i * k:(i + 1) * k]) for i in range(n))


def solutions_in_box(system: SystemInstance, radius: int) -> list[tuple]:
    """Box solutions, sorted lexicographically. Over Z these are plain integer vectors."""
    sols = sorted(iter_solutions_in_box(system, radius))
    if system.module.rank == 1 and system.module.orders == (0,):
        return [tuple(c[0] for c in x) for x in sols]
    return sols


def solutions_finite(system: SystemInstance) -> list[tuple]:
    """All ``x`` in ``M^n`` solving the system, by enumerating ``M^n``."""
    mod = system.module
    if not mod.is_finite:
        raise InfiniteModule("exhaustive solution search needs a finite module")
    elems = mod.elements()
    # tables[j][i][e] = A[j][i] * elems[e]
    tables = [[[mod.act(a, t) for t in elems] for a in row] for row in system.A]
    out = []
    for idx in itertools.product(range(len(elems)), repeat=system.n):
        ok = True
        for j, row_tab in enumerate(tables):
            acc = mod.zero
            for i, e in enumerate(idx):
                acc = mod.add(acc, row_tab[i][e])
            if acc != system.b[j]:
                ok = False
                break
        if ok:
            out.append(tuple(elems[e] for e in idx))
    return out


# certificate verification


@dataclass
class CheckReport:
    algebraic_checks: list[tuple[str, bool]]
    search_budget: str
    solutions_examined: int
    monochromatic_found: tuple | None = None
    verdict: str = field(init=False)

    def __post_init__(self):
        ok = all(passed for _, passed in self.algebraic_checks) and self.monochromatic_found is None
        self.verdict = "pass" if ok else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def failed_checks(self) -> list[str]:
        return [name for name, ok in self.algebraic_checks if not ok]

    def to_doc(self, system: SystemInstance) -> dict:
        mono = self.monochromatic_found
        return {
            "verdict": self.verdict,
            "algebraic_checks": [{"name": n, "passed": ok} for n, ok in self.algebraic_checks],
            "search_budget": self.search_budget,
            "solutions_examined": str(self.solutions_examined),
            "monochromatic_found": None if mono is None else
            [codec.module_element_to_doc(system.module, t) for t in mono],
        }


def verify_certificate(system: SystemInstance, cert: WitnessCertificate,
                       budget: int | str = "exhaustive") -> CheckReport:
    """Check a certificate algebraically, then search for a monochromatic solution.

    ``budget`` is a box radius for infinite modules or ``"exhaustive"``.
    """
    if cert.system_digest != codec.system_digest(system):
        raise DigestMismatch("certificate was issued for a different system")
    checks = certificate_checks(system, cert)
    shape_ok = checks[0][1]
    if shape_ok:
        checks.append(("column_covectors_recomputed",
                       column_covectors(system, cert.u, cert.d) == tuple(
                           tuple(x % cert.d for x in c) for c in cert.column_covectors)))
    if budget == "exhaustive":
        if not system.module.is_finite:
            raise InfiniteModule("exhaustive verification needs a finite module; use a box radius")
        label, sols = "exhaustive", solutions_finite(system)
    else:
        label, sols = f"box radius {int(budget)}", iter_solutions_in_box(system, int(budget))
    if not shape_ok:
        return CheckReport(checks, label, 0)

    cache: dict = {}

    def col(t):
        c = cache.get(t)
        if c is None:
            c = cache[t] = colour(cert, t)
        return c

    examined, mono = 0, None
    for x in sols:
        examined += 1
        first = col(x[0])
        if all(col(t) == first for t in x[1:]):
            mono = x
            break
    return CheckReport(checks, label, examined, mono)


# colourings of finite modules


def enumerate_partitions(q: int) -> Iterator[tuple[int, ...]]:
    """Set partitions of ``range(q)`` as restricted growth strings, in lexicographic order."""
    if q < 1:
        raise ValueError("need at least one element")
    a = [0] * q
    mx = [0] * q  # mx[i] = max(a[:i+1])
    while True:
        yield tuple(a)
        i = q - 1
        while i > 0 and a[i] > mx[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        mx[i] = max(mx[i - 1], a[i])
        for j in range(i + 1, q):
            a[j] = 0
            mx[j] = mx[i]


def bell(q: int) -> int:
    """Bell number via the Bell triangle."""
    row = [1]
    for _ in range(q):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def exhaustive_pr(system: SystemInstance, cap: int = DEFAULT_CAP) -> tuple[bool, tuple[int, ...] | None]:
    """Partition regularity by trying every colouring of a finite module.

    Colour names do not matter, so colourings are identified with set
    partitions of the module's elements (in ``module.elements()`` order).
    Returns ``(True, None)`` or ``(False, first_blocking_partition)``.
    """
    mod = system.module
    if not mod.is_finite:
        raise InfiniteModule("exhaustive search needs a finite module")
    if mod.size > cap:
        raise ModuleTooLarge(f"module has {mod.size} elements, cap is {cap}")
    elems = mod.elements()
    index = {t: i for i, t in enumerate(elems)}
    sols = sorted({tuple(sorted({index[t] for t in x})) for x in solutions_finite(system)})
    for part in enumerate_partitions(len(elems)):
        if not any(len({part[e] for e in s}) == 1 for s in sols):
            return False, part
    return True, None


def partition_blocks(part: Sequence[int], elems: Sequence) -> list[list]:
    blocks: list[list] = [[] for _ in range(max(part) + 1)]
    for p, e in zip(part, elems):
        blocks[p].append(e)
    return blocks


def blocking_is_valid(system: SystemInstance, part: Sequence[int]) -> bool:
    """Re-check a blocking partition: no class contains all entries of a solution."""
    elems = system.module.elements()
    for block in partition_blocks(part, elems):
        for x in itertools.product(block, repeat=system.n):
            if system.evaluate(x) == system.b:
                return False
    return True


# catalog sweeps


def all_systems(ring: Ring, m: int, n: int) -> Iterator[SystemInstance]:
    """Every system over ``ring`` acting on itself with shape m x n and b != 0."""
    mod = self_module(ring)
    elems = list(ring.elements())
    for entries in itertools.product(elems, repeat=m * n):
        A = [entries[j * n:(j + 1) * n] for j in range(m)]
        for b in itertools.product(mod.elements(), repeat=m):
            if any(any(t) for t in b):
                yield SystemInstance(ring, mod, A, b)


def sampled_systems(ring: Ring, m: int, n: int, count: int, seed: int = 0) -> Iterator[SystemInstance]:
    """``count`` uniformly random systems (b != 0), reproducible from ``seed``.

    System ``i`` is drawn from its own Philox stream keyed by ``seed`` with
    counter ``i``, so the result does not depend on evaluation order.
    """
    import numpy as np

    mod = self_module(ring)
    elems = list(ring.elements())
    melems = mod.elements()
    for i in range(count):
        rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, i, m, n]))
        while True:
            picks = rng.integers(0, len(elems), size=m * n)
            bpicks = rng.integers(0, len(melems), size=m)
            b = [melems[p] for p in bpicks]
            if any(any(t) for t in b):
                break
        A = [[elems[picks[j * n + c]] for c in range(n)] for j in range(m)]
        yield SystemInstance(ring, mod, A, b)


def integer_systems(count: int, seed: int = 0, max_m: int = 3, max_n: int = 4,
                    entry: int = 5, rhs: int = 10) -> Iterator[SystemInstance]:
    """Random systems over Z: shapes up to max_m x max_n, entries in [-entry, entry], b != 0."""
    import numpy as np

    from .rings import Integers

    ring = Integers()
    mod = self_module(ring)
    for i in range(count):
        rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, i, 0, 1 << 63]))
        m = int(rng.integers(1, max_m + 1))
        n = int(rng.integers(1, max_n + 1))
        A = rng.integers(-entry, entry + 1, size=(m, n)).tolist()
        while True:
            b = rng.integers(-rhs, rhs + 1, size=m).tolist()
            if any(b):
                break
        yield SystemInstance(ring, mod, A, [(x,) for x in b])


def counterexample_bundle(system: SystemInstance, exhaustive: tuple, constant) -> dict:
    pr, part = exhaustive
    doc = {"system": codec.system_to_doc(system), "exhaustive_partition_regular": pr}
    if part is not None:
        doc["blocking_partition"] = [str(p) for p in part]
    doc["constant_solution"] = None if constant is None else codec.module_element_to_doc(system.module, constant)
    return doc


def cross_validate(systems: Iterable[SystemInstance], cap: int = DEFAULT_CAP) -> dict:
    """Check exhaustive partition regularity against the constant-solution test.

    Raises TheoremViolation on the first disagreement.
    """
    total = regular = 0
    for system in systems:
        result = exhaustive_pr(system, cap)
        constant = find_constant_solution(system)
        if result[0] != (constant is not None):
            raise TheoremViolation(counterexample_bundle(system, result, constant))
        total += 1
        regular += result[0]
    return {"systems": total, "partition_regular": regular,
            "not_partition_regular": total - regular, "discrepancies": 0}
