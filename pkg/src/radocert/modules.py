"""Modules over the supported rings and the systems ``Ax = b`` posed in them.

A module is stored by its additive group, a direct sum of cyclic groups
with the given ``orders`` (0 for an infinite cyclic summand), together with
one action matrix per additive generator of the ring. Module elements are
coordinate tuples, reduced so each finite-order coordinate lies in ``[0, o)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .linalg import FPAbelianGroup, IntMatrix, IntVector
from .rings import MalformedElement, Ring


class InvalidModule(ValueError):
    pass


class InvalidSystem(ValueError):
    pass


class InfiniteModule(ValueError):
    pass


@dataclass(frozen=True)
class ModuleDescriptor:
    ring: Ring
    orders: tuple[int, ...]
    actions: tuple[IntMatrix, ...]
    # how elements are written in documents: "self" (ring elements),
    # "free" (rank-tuples of ring elements) or "explicit" (coordinates)
    kind: str = "explicit"
    free_rank: int = 1
    _action_cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def group(self) -> FPAbelianGroup:
        return FPAbelianGroup.from_orders(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def is_finite(self) -> bool:
        return 0 not in self.orders

    @property
    def size(self) -> int:
        if not self.is_finite:
            raise InfiniteModule("module is infinite")
        n = 1
        for o in self.orders:
            n *= o
        return n

    def reduce(self, coords: Sequence[int]) -> IntVector:
        return tuple(c % o if o else c for c, o in zip(coords, self.orders))

    @property
    def zero(self) -> IntVector:
        return (0,) * self.rank

    def add(self, s: Sequence[int], t: Sequence[int]) -> IntVector:
        return self.reduce([a + b for a, b in zip(s, t)])

    def elements(self) -> list[IntVector]:
        """All elements in a fixed order.

        For a ring acting on itself the order follows the ring's enumeration.
        """
        if not self.is_finite:
            raise InfiniteModule("module is infinite")
        if self.kind == "self":
            return [self.ring.coords(x) for x in self.ring.elements()]
        if self.kind == "free":
            ring_elems = [self.ring.coords(x) for x in self.ring.elements()]
            return [sum(parts, ()) for parts in itertools.product(ring_elems, repeat=self.free_rank)]
        return [tuple(c) for c in itertools.product(*(range(o) for o in self.orders))]

    def action_matrix(self, r) -> IntMatrix:
        """Integer matrix of multiplication by the ring element ``r`` (unreduced)."""
        key = r
        hit = self._action_cache.get(key)
        if hit is not None:
            return hit
        k = self.rank
        acc = [[0] * k for _ in range(k)]
        for c, mat in zip(self.ring.coords(r), self.actions):
            if c:
                for i in range(k):
                    row, src = acc[i], mat.row(i)
                    for j in range(k):
                        row[j] += c * src[j]
        out = IntMatrix(k, k, acc)
        self._action_cache[key] = out
        return out

    def act(self, r, t: Sequence[int]) -> IntVector:
        return self.reduce(self.action_matrix(r) @ t)

    def validate(self) -> None:
        """Reject action data that does not define an R-module structure."""
        k = self.rank
        ring = self.ring
        if any(isinstance(o, bool) or not isinstance(o, int) or o < 0 for o in self.orders):
            raise InvalidModule("additive orders must be nonnegative integers")
        if len(self.actions) != ring.rank:
            raise InvalidModule(f"expected {ring.rank} action matrices, got {len(self.actions)}")
        for j, mat in enumerate(self.actions):
            if mat.shape != (k, k):
                raise InvalidModule(f"action {j} must be {k}x{k}, got {mat.rows}x{mat.cols}")
        unit = [(0,) * i + (1,) + (0,) * (k - i - 1) for i in range(k)]
        for j, mat in enumerate(self.actions):
            for i, o in enumerate(self.orders):
                if o and any(self.reduce([o * x for x in mat.column(i)])):
                    raise InvalidModule(f"action {j} does not preserve the relation on generator {i}")
            killed = mat.scale(ring.orders[j]) if ring.orders[j] else None
            if killed is not None:
                for i in range(k):
                    if any(self.reduce(killed.column(i))):
                        raise InvalidModule(f"ring relation on generator {j} does not act as zero")
        one = self.action_matrix(ring.one)
        for i in range(k):
            if self.reduce(one.column(i)) != unit[i]:
                raise InvalidModule("the ring identity does not act as the identity")
        gens = ring.generators()
        for a, ga in enumerate(gens):
            for b, gb in enumerate(gens):
                lhs = self.actions[a] @ self.actions[b]
                rhs = self.action_matrix(ring.mul(ga, gb))
                for i in range(k):
                    if self.reduce(lhs.column(i)) != self.reduce(rhs.column(i)):
                        raise InvalidModule(
                            f"actions of generators {a} and {b} are incompatible with ring multiplication")

    def encode_element(self, t: Sequence[int]):
        """Python-level value a document writes for this element (before stringification)."""
        if self.kind == "self":
            return self.ring.from_coords(t)
        if self.kind == "free":
            w = self.ring.rank
            return tuple(self.ring.from_coords(t[i * w:(i + 1) * w]) for i in range(self.free_rank))
        return tuple(t)

    def decode_element(self, raw) -> IntVector:
        if self.kind == "self":
            return self.ring.coords(self.ring.normalize(raw))
        if self.kind == "free":
            if isinstance(raw, (str, bytes)) or not isinstance(raw, Sequence) or len(raw) != self.free_rank:
                raise MalformedElement(f"expected {self.free_rank} ring elements")
            return sum((self.ring.coords(self.ring.normalize(x)) for x in raw), ())
        if isinstance(raw, (str, bytes)) or not isinstance(raw, Sequence) or len(raw) != self.rank:
            raise MalformedElement(f"expected {self.rank} coordinates")
        if any(isinstance(x, bool) or not isinstance(x, int) for x in raw):
            raise MalformedElement("module coordinates must be integers")
        return self.reduce(raw)


def self_module(ring: Ring) -> ModuleDescriptor:
    return ModuleDescriptor(ring, tuple(ring.orders), ring.actions, kind="self")


def free_module(ring: Ring, rank: int) -> ModuleDescriptor:
    if rank < 1:
        raise InvalidModule("free module rank must be >= 1")
    w = ring.rank
    k = w * rank
    actions = []
    for mat in ring.actions:
        big = [[0] * k for _ in range(k)]
        for blk in range(rank):
            for i in range(w):
                for j in range(w):
                    big[blk * w + i][blk * w + j] = mat[i, j]
        actions.append(IntMatrix(k, k, big))
    return ModuleDescriptor(ring, tuple(ring.orders) * rank, tuple(actions), kind="free", free_rank=rank)


def explicit_module(ring: Ring, orders: Sequence[int], actions: Sequence[IntMatrix]) -> ModuleDescriptor:
    mod = ModuleDescriptor(ring, tuple(orders), tuple(actions), kind="explicit")
    mod.validate()
    return mod


def element_action(module: ModuleDescriptor, r, t: Sequence[int]) -> IntVector:
    return module.act(r, t)


@dataclass(frozen=True)
class SystemInstance:
    """The system ``A x = b`` with ``A`` over the ring and ``b`` in ``M^m``.

    ``A`` holds canonical ring elements; ``b`` holds module coordinate tuples.
    """

    ring: Ring
    module: ModuleDescriptor
    A: tuple[tuple, ...]
    b: tuple[IntVector, ...]

    def __post_init__(self):
        A = tuple(tuple(row) for row in self.A)
        if not A or not A[0]:
            raise InvalidSystem("A must have at least one row and one column")
        if any(len(row) != len(A[0]) for row in A):
            raise InvalidSystem("rows of A have different lengths")
        if len(self.b) != len(A):
            raise InvalidSystem(f"b has {len(self.b)} entries but A has {len(A)} rows")
        if self.module.ring != self.ring:
            raise InvalidSystem("module is over a different ring")
        A = tuple(tuple(self.ring.normalize(x) for x in row) for row in A)
        b = tuple(self.module.reduce(t) for t in self.b)
        if any(len(t) != self.module.rank for t in b):
            raise InvalidSystem("entries of b must be module coordinate vectors")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @classmethod
    def build(cls, ring: Ring, A, b, module: ModuleDescriptor | None = None) -> SystemInstance:
        """Convenience constructor taking raw ring elements and encoded module elements."""
        module = module or self_module(ring)
        A = [[ring.normalize(x) for x in row] for row in A]
        b = [module.decode_element(x) for x in b]
        return cls(ring, module, A, b)

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0])

    @property
    def b_is_zero(self) -> bool:
        return all(not any(t) for t in self.b)

    def evaluate(self, x: Sequence[Sequence[int]]) -> tuple[IntVector, ...]:
        """``A x`` for ``x`` a vector of ``n`` module elements."""
        mod = self.module
        out = []
        for row in self.A:
            acc = mod.zero
            for a, xi in zip(row, x):
                acc = mod.add(acc, mod.act(a, xi))
            out.append(acc)
        return tuple(out)
