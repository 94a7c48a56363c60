"""Decide partition regularity of ``Ax = b`` and build blocking colourings.

The system is partition regular exactly when it has a constant solution,
i.e. some module element ``r`` with ``s * r = b`` where ``s`` is the sum of
the columns of ``A``. When there is none, ``b`` falls outside the subgroup
``H = {s * r}`` of ``M^m``, and a homomorphism ``theta: M^m -> Z/d`` that
kills ``H`` but not ``b`` is read off the invariant-factor decomposition of
``M^m / H``. Colouring ``t`` by ``(theta(c_1 t), ..., theta(c_n t))`` then
leaves no monochromatic solution: for monochromatic ``x`` the sum
``sum_i theta(c_i x_i)`` telescopes to ``theta(s x_1) = 0`` while it must
also equal ``theta(b) != 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence, Union

from .codec import DocumentError, parse_int, system_digest
from .linalg import FPAbelianGroup, IntMatrix, IntVector, dot, quotient, separating_functional, solve_affine
from .modules import SystemInstance


class DegenerateSystem(ValueError):
    """``b = 0``: every system is then trivially solved by ``x = 0``."""


class CertificateInvariantError(RuntimeError):
    """A synthesized certificate failed its own congruence checks (a bug)."""


class ZeroDistance(ValueError):
    pass


@dataclass(frozen=True)
class WitnessCertificate:
    """``theta(v) = u . v mod d`` on ``M^m``; ``column_covectors[i]`` is ``theta`` after column i's action."""

    u: IntVector
    d: int
    column_covectors: tuple[IntVector, ...]
    n: int
    system_digest: str

    def to_doc(self) -> dict:
        return {
            "u": [str(x) for x in self.u],
            "d": str(self.d),
            "column_covectors": [[str(x) for x in c] for c in self.column_covectors],
            "n": str(self.n),
            "system_digest": self.system_digest,
        }

    @classmethod
    def from_doc(cls, raw: Any, path: str = "$") -> WitnessCertificate:
        if not isinstance(raw, dict):
            raise DocumentError(path, "expected a certificate object")
        if "certificate" in raw:
            return cls.from_doc(raw["certificate"], f"{path}.certificate")
        missing = [k for k in ("u", "d", "column_covectors", "n", "system_digest") if k not in raw]
        if missing:
            raise DocumentError(path, f"missing fields {missing}")

        def vec(v, p):
            if not isinstance(v, list):
                raise DocumentError(p, "expected an array")
            return tuple(parse_int(x, f"{p}[{i}]") for i, x in enumerate(v))

        cols = raw["column_covectors"]
        if not isinstance(cols, list):
            raise DocumentError(f"{path}.column_covectors", "expected an array")
        d = parse_int(raw["d"], f"{path}.d")
        if d < 2:
            raise DocumentError(f"{path}.d", "modulus must be at least 2")
        if not isinstance(raw["system_digest"], str):
            raise DocumentError(f"{path}.system_digest", "expected a string")
        return cls(
            u=vec(raw["u"], f"{path}.u"),
            d=d,
            column_covectors=tuple(vec(c, f"{path}.column_covectors[{i}]") for i, c in enumerate(cols)),
            n=parse_int(raw["n"], f"{path}.n"),
            system_digest=raw["system_digest"],
        )


@dataclass(frozen=True)
class PartitionRegular:
    constant_solution: IntVector


@dataclass(frozen=True)
class NotPartitionRegular:
    certificate: WitnessCertificate


Verdict = Union[PartitionRegular, NotPartitionRegular]


def column_sum(system: SystemInstance) -> tuple:
    ring = system.ring
    return tuple(ring.sum(row) for row in system.A)


def power_group(system: SystemInstance) -> FPAbelianGroup:
    """Additive presentation of ``M^m``: m copies of the module's generators."""
    return FPAbelianGroup.from_orders(system.module.orders * system.m)


def find_constant_solution(system: SystemInstance) -> IntVector | None:
    """A module element ``r`` with ``s_j * r = b_j`` for every row, or None."""
    mod = system.module
    k = mod.rank
    s = column_sum(system)
    stacked = IntMatrix(0, k)
    for sj in s:
        stacked = stacked.vstack(mod.action_matrix(sj))
    orders = mod.orders * system.m
    slack = [[o if i == j else 0 for j, o in enumerate(orders) if o] for i in range(len(orders))]
    lhs = stacked.hstack(IntMatrix(len(orders), sum(1 for o in orders if o), slack))
    rhs = [c for t in system.b for c in t]
    sol = solve_affine(lhs, rhs).particular
    if sol is None:
        return None
    r = mod.reduce(sol[:k])
    if any(mod.act(sj, r) != bj for sj, bj in zip(s, system.b)):
        raise CertificateInvariantError("constant solution failed substitution")
    return r


def h_generators(system: SystemInstance) -> IntMatrix:
    """Rows ``(s_1 w, ..., s_m w)`` for each module generator ``w``; their span is ``H``."""
    mod = system.module
    k = mod.rank
    mats = [mod.action_matrix(sj) for sj in column_sum(system)]
    rows = []
    for l in range(k):
        row = []
        for mat in mats:
            row.extend(mod.reduce(mat.column(l)))
        rows.append(row)
    return IntMatrix(k, k * system.m, rows)


def column_covectors(system: SystemInstance, u: Sequence[int], d: int) -> tuple[IntVector, ...]:
    """``u_i = sum_j u^(j) . action(A[j][i]) mod d`` where ``u^(j)`` is u's block for row j."""
    mod = system.module
    k = mod.rank
    blocks = [u[j * k:(j + 1) * k] for j in range(system.m)]
    out = []
    for i in range(system.n):
        acc = [0] * k
        for j in range(system.m):
            mat = mod.action_matrix(system.A[j][i])
            for c in range(k):
                acc[c] += dot(blocks[j], mat.column(c))
        out.append(tuple(x % d for x in acc))
    return tuple(out)


def certificate_checks(system: SystemInstance, cert: WitnessCertificate) -> list[tuple[str, bool]]:
    """The four congruence families a valid certificate satisfies, by name."""
    d = cert.d
    orders = system.module.orders * system.m
    b = [c for t in system.b for c in t]
    shape_ok = (len(cert.u) == len(orders) and cert.n == system.n
                and len(cert.column_covectors) == system.n
                and all(len(c) == system.module.rank for c in cert.column_covectors)
                and d >= 2)
    if not shape_ok:
        return [("shape", False)]
    k = system.module.rank
    total = [sum(c[i] for c in cert.column_covectors) % d for i in range(k)]
    return [
        ("shape", True),
        ("u_kills_relations", all(x * o % d == 0 for x, o in zip(cert.u, orders) if o)),
        ("u_kills_h_generators", all(dot(cert.u, g) % d == 0 for g in h_generators(system))),
        ("u_separates_b", dot(cert.u, b) % d != 0),
        ("column_covectors_sum_to_zero", not any(total)),
    ]


def decide(system: SystemInstance) -> Verdict:
    if system.b_is_zero:
        raise DegenerateSystem("b must be nonzero; the homogeneous case b = 0 is not handled")
    r = find_constant_solution(system)
    if r is not None:
        return PartitionRegular(r)

    q = quotient(power_group(system), h_generators(system))
    b = [c for t in system.b for c in t]
    u, d = separating_functional(q, q.image(b))
    cert = WitnessCertificate(u=u, d=d, column_covectors=column_covectors(system, u, d),
                              n=system.n, system_digest=system_digest(system))
    failed = [name for name, ok in certificate_checks(system, cert) if not ok]
    if failed:
        raise CertificateInvariantError(f"synthesized certificate fails {failed}")
    return NotPartitionRegular(cert)


def colour(cert: WitnessCertificate, t: Sequence[int]) -> tuple[int, ...]:
    return tuple(dot(ui, t) % cert.d for ui in cert.column_covectors)


def colour_classes(system: SystemInstance, cert: WitnessCertificate) -> list[list[IntVector]]:
    """Colour classes of a finite module, in order of first appearance."""
    classes: dict[tuple, list] = {}
    for t in system.module.elements():
        classes.setdefault(colour(cert, t), []).append(t)
    return list(classes.values())


# circle-valued form of theta


@dataclass(frozen=True, order=True)
class RationalAngle:
    """A point of the circle as an exact fraction of a full turn, in ``[0, 1)``."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator < 1 or not 0 <= self.numerator < self.denominator:
            raise ValueError("angle must satisfy 0 <= numerator < denominator")
        if Fraction(self.numerator, self.denominator).denominator != self.denominator:
            raise ValueError("angle fraction must be reduced")

    @classmethod
    def of(cls, value, denominator: int = 1) -> RationalAngle:
        f = Fraction(value, denominator) % 1
        return cls(f.numerator, f.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def distance_to_zero(self) -> Fraction:
        f = self.fraction
        return min(f, 1 - f)


def interval_colour(q: RationalAngle, d: int) -> int:
    """Index ``j`` of the half-open arc ``[j/d, (j+1)/d)`` containing ``q``."""
    if d < 1:
        raise ValueError("bucket count must be positive")
    return q.numerator * d // q.denominator


def circle_distance(p: RationalAngle, q: RationalAngle) -> Fraction:
    return RationalAngle.of(p.fraction - q.fraction).distance_to_zero()


def required_d(n: int, delta: RationalAngle) -> int:
    """Fewest arcs for which the bucket colouring blocks every solution.

    Two angles in one arc differ by less than ``1/d`` turn, so the ``n``
    telescoping differences sum to something strictly inside ``(-n/d, n/d)``.
    That cannot be congruent to ``theta(b)`` once ``n/d`` is at most the
    distance of ``theta(b)`` from 0; we ask for strict inequality.
    """
    dist = delta.distance_to_zero()
    if dist == 0:
        raise ZeroDistance("theta(b) is zero; no bucket count separates it")
    return int(n // dist) + 1


def theta_angle(cert: WitnessCertificate, covector: Sequence[int], t: Sequence[int]) -> RationalAngle:
    return RationalAngle.of(dot(covector, t), cert.d)


def circle_colour(cert: WitnessCertificate, t: Sequence[int], buckets: int) -> tuple[int, ...]:
    """Arc colouring: each ``theta(c_i t)`` placed on the circle and bucketed into ``buckets`` arcs."""
    return tuple(interval_colour(theta_angle(cert, ui, t), buckets) for ui in cert.column_covectors)


def circle_plan(system: SystemInstance, cert: WitnessCertificate) -> dict:
    """Where ``theta(b)`` sits on the circle and how many arcs the bucket colouring needs."""
    b = [c for t in system.b for c in t]
    tb = theta_angle(cert, cert.u, b)
    buckets = required_d(cert.n, tb)
    return {
        "theta_b": f"{tb.numerator}/{tb.denominator}",
        "distance_from_zero": str(tb.distance_to_zero()),
        "buckets": str(buckets),
        "derivation": (f"same-arc angles differ by < 1/D turn, so the {cert.n} telescoping "
                       f"differences sum into (-{cert.n}/D, {cert.n}/D); D = {buckets} is the least D "
                       f"with {cert.n}/D < {tb.distance_to_zero()}, so the sum cannot reach theta(b)"),
    }
