"""Finite and finitely generated commutative rings with exact arithmetic.

Supported kinds: the integers, ``Z/nZ``, ``B[x]/(f)`` for ``B`` one of the
first two and ``f`` monic, and finite direct products of any of these.

Canonical element forms: ``int`` for the integers, an ``int`` in ``[0, n)``
for a cyclic ring, a coefficient tuple (low degree first, length ``deg f``)
for a polynomial quotient, and a tuple of factor elements for a product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterator, Sequence

from .linalg import FPAbelianGroup, IntMatrix


class MalformedElement(ValueError):
    pass


class InfiniteRing(ValueError):
    pass


class InvalidRing(ValueError):
    pass


def _as_int(raw: Any) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise MalformedElement(f"expected an integer, got {raw!r}")
    return raw


class Ring:
    """Shared behaviour. Subclasses provide normalize/add/neg/mul, the additive
    coordinates and the element enumeration."""

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def sum(self, items):
        total = self.zero
        for x in items:
            total = self.add(total, x)
        return total

    def scalar(self, k: int):
        """The image of the integer ``k`` in the ring."""
        return self.from_coords([k * c for c in self.coords(self.one)])

    @property
    def is_finite(self) -> bool:
        return 0 not in self.orders

    @property
    def size(self) -> int:
        if not self.is_finite:
            raise InfiniteRing(f"{self} is infinite")
        n = 1
        for o in self.orders:
            n *= o
        return n

    @property
    def rank(self) -> int:
        """Number of additive generators."""
        return len(self.orders)

    def generators(self) -> list:
        k = self.rank
        return [self.from_coords([int(i == j) for j in range(k)]) for i in range(k)]

    def from_coords(self, coords: Sequence[int]):
        raise NotImplementedError

    @cached_property
    def actions(self) -> tuple[IntMatrix, ...]:
        """Multiplication by each additive generator, one matrix per generator.

        Column ``l`` of matrix ``j`` is the coordinate vector of ``g_j * g_l``.
        """
        gens = self.generators()
        k = len(gens)
        out = []
        for g in gens:
            cols = [self.coords(self.mul(g, w)) for w in gens]
            out.append(IntMatrix(k, k, [[cols[l][i] for l in range(k)] for i in range(k)]))
        return tuple(out)


@dataclass(frozen=True)
class Integers(Ring):
    def __str__(self):
        return "Z"

    orders = (0,)

    def normalize(self, raw):
        return _as_int(raw)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    zero = 0
    one = 1

    def coords(self, a):
        return (a,)

    def from_coords(self, coords):
        (a,) = coords
        return a

    def elements(self):
        raise InfiniteRing("the integers cannot be enumerated")


@dataclass(frozen=True)
class CyclicRing(Ring):
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 2:
            raise InvalidRing(f"cyclic ring modulus must be an integer >= 2, got {self.n!r}")

    def __str__(self):
        return f"Z{self.n}"

    @property
    def orders(self):
        return (self.n,)

    def normalize(self, raw):
        return _as_int(raw) % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return -a % self.n

    def mul(self, a, b):
        return a * b % self.n

    zero = 0

    @property
    def one(self):
        return 1

    def coords(self, a):
        return (a,)

    def from_coords(self, coords):
        (a,) = coords
        return a % self.n

    def elements(self):
        return iter(range(self.n))


@dataclass(frozen=True)
class PolyQuotient(Ring):
    """``base[x]/(modulus)`` with ``modulus`` monic, coefficients low to high."""

    base: Integers | CyclicRing
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.base, (Integers, CyclicRing)):
            raise InvalidRing("polynomial quotient base must be Z or Z/n")
        try:
            f = tuple(self.base.normalize(c) for c in self.modulus)
        except MalformedElement as exc:
            raise InvalidRing(f"bad modulus coefficient: {exc}") from None
        if len(f) < 2:
            raise InvalidRing("modulus must have degree >= 1")
        if f[-1] != 1:
            raise InvalidRing("modulus must be monic")
        object.__setattr__(self, "modulus", f)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.modulus):
            if c == 0:
                continue
            mono = "1" if i == 0 else "x" if i == 1 else f"x^{i}"
            terms.append(mono if c == 1 and i else f"{c}" if not i else f"{c}*{mono}")
        return f"{self.base}[x]/({'+'.join(reversed(terms))})"

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def orders(self):
        return self.base.orders * self.degree

    def _reduce(self, coeffs: list[int]):
        k, f, base = self.degree, self.modulus, self.base
        c = list(coeffs)
        for i in range(len(c) - 1, k - 1, -1):
            lead = c[i]
            if lead:
                for j in range(k + 1):
                    c[i - k + j] -= lead * f[j]
        c = c[:k] + [0] * (k - len(c))
        return tuple(base.normalize(x) for x in c)

    def normalize(self, raw):
        if isinstance(raw, (str, bytes)) or not isinstance(raw, Sequence) or not raw:
            raise MalformedElement(f"expected a nonempty coefficient sequence, got {raw!r}")
        return self._reduce([_as_int(c) for c in raw])

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._reduce(prod)

    @property
    def zero(self):
        return (0,) * self.degree

    @property
    def one(self):
        return (1,) + (0,) * (self.degree - 1)

    def coords(self, a):
        return tuple(a)

    def from_coords(self, coords):
        return self._reduce(list(coords))

    def elements(self):
        if not self.is_finite:
            raise InfiniteRing(f"{self} is infinite")
        # highest coefficient varies slowest: 0, 1, x, 1+x, ...
        for rev in itertools.product(range(self.base.n), repeat=self.degree):
            yield tuple(reversed(rev))


@dataclass(frozen=True)
class Product(Ring):
    factors: tuple[Ring, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise InvalidRing("a product needs at least one factor")
        if not all(isinstance(f, Ring) for f in self.factors):
            raise InvalidRing("product factors must be rings")

    def __str__(self):
        return "x".join(f"({f})" if isinstance(f, PolyQuotient) else str(f) for f in self.factors)

    @property
    def orders(self):
        return tuple(o for f in self.factors for o in f.orders)

    def normalize(self, raw):
        if isinstance(raw, (str, bytes)) or not isinstance(raw, Sequence):
            raise MalformedElement(f"expected a sequence of {len(self.factors)} factor elements")
        if len(raw) != len(self.factors):
            raise MalformedElement(f"expected {len(self.factors)} factor elements, got {len(raw)}")
        return tuple(f.normalize(x) for f, x in zip(self.factors, raw))

    def add(self, a, b):
        return tuple(f.add(x, y) for f, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(f.neg(x) for f, x in zip(self.factors, a))

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    @property
    def zero(self):
        return tuple(f.zero for f in self.factors)

    @property
    def one(self):
        return tuple(f.one for f in self.factors)

    def coords(self, a):
        return tuple(c for f, x in zip(self.factors, a) for c in f.coords(x))

    def from_coords(self, coords):
        out, i = [], 0
        for f in self.factors:
            out.append(f.from_coords(coords[i:i + f.rank]))
            i += f.rank
        return tuple(out)

    def elements(self):
        if not self.is_finite:
            raise InfiniteRing(f"{self} is infinite")
        return itertools.product(*(list(f.elements()) for f in self.factors))


def normalize(ring: Ring, raw):
    return ring.normalize(raw)


def mul(ring: Ring, a, b):
    return ring.mul(a, b)


def enumerate_ring(ring: Ring) -> Iterator:
    """All elements, each once, in a fixed order (raises InfiniteRing)."""
    return iter(ring.elements())


def additive_presentation(ring: Ring) -> tuple[FPAbelianGroup, tuple[IntMatrix, ...]]:
    """(R, +) as a finitely presented group plus multiplication-by-generator matrices."""
    return FPAbelianGroup.from_orders(ring.orders), ring.actions


CATALOG: dict[str, Ring] = {
    "Z": Integers(),
    "Z2": CyclicRing(2),
    "Z3": CyclicRing(3),
    "Z4": CyclicRing(4),
    "Z5": CyclicRing(5),
    "Z6": CyclicRing(6),
    "Z8": CyclicRing(8),
    "Z2xZ2": Product((CyclicRing(2), CyclicRing(2))),
    "Z2xZ3": Product((CyclicRing(2), CyclicRing(3))),
    "F4": PolyQuotient(CyclicRing(2), (1, 1, 1)),
    "Z2[x]/(x^2)": PolyQuotient(CyclicRing(2), (0, 0, 1)),
    "Z3[x]/(x^2)": PolyQuotient(CyclicRing(3), (0, 0, 1)),
    "Z4[x]/(x^2)": PolyQuotient(CyclicRing(4), (0, 0, 1)),
    "Z[i]": PolyQuotient(Integers(), (1, 0, 1)),
    "Z[x]/(x^2)": PolyQuotient(Integers(), (0, 0, 1)),
}
