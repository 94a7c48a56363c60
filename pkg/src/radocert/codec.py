"""JSON documents: systems, certificates, and the canonical text used for digests.

Integers are always written as decimal strings. Input accepts JSON numbers
too, but only the string form is canonical.
"""

from __future__ import annotations

import hashlib
import json
import re
from typing import Any

from .linalg import IntMatrix
from .modules import (InvalidModule, InvalidSystem, ModuleDescriptor, SystemInstance,
                      explicit_module, free_module, self_module)
from .rings import (CyclicRing, Integers, InvalidRing, MalformedElement, PolyQuotient, Product,
                    Ring)

_INT = re.compile(r"-?(0|[1-9][0-9]*)\Z")


class DocumentError(ValueError):
    """Malformed input document; ``path`` locates the offending value."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _compact(doc: Any) -> str:
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


def parse_int(raw: Any, path: str) -> int:
    if isinstance(raw, bool):
        raise DocumentError(path, "expected an integer, got a boolean")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str) and _INT.match(raw):
        return int(raw)
    raise DocumentError(path, f"expected a decimal integer string, got {raw!r}")


def _ints(raw: Any, path: str) -> Any:
    """Recursively convert nested lists of decimal strings into ints."""
    if isinstance(raw, list):
        return [_ints(x, f"{path}[{i}]") for i, x in enumerate(raw)]
    return parse_int(raw, path)


def _strs(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return [_strs(x) for x in value]
    return str(value)


def _list(raw: Any, path: str) -> list:
    if not isinstance(raw, list):
        raise DocumentError(path, f"expected an array, got {type(raw).__name__}")
    return raw


# rings

def ring_to_doc(ring: Ring) -> dict:
    if isinstance(ring, Integers):
        return {"kind": "integers"}
    if isinstance(ring, CyclicRing):
        return {"kind": "cyclic", "n": str(ring.n)}
    if isinstance(ring, PolyQuotient):
        return {"kind": "poly_quotient", "base": ring_to_doc(ring.base),
                "modulus": _strs(ring.modulus)}
    if isinstance(ring, Product):
        return {"kind": "product", "factors": [ring_to_doc(f) for f in ring.factors]}
    raise TypeError(f"unsupported ring {ring!r}")


def ring_from_doc(raw: Any, path: str = "$.ring") -> Ring:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise DocumentError(path, "expected an object with a 'kind' field")
    kind = raw["kind"]
    try:
        if kind == "integers":
            return Integers()
        if kind == "cyclic":
            return CyclicRing(parse_int(raw.get("n"), f"{path}.n"))
        if kind == "poly_quotient":
            base = ring_from_doc(raw.get("base"), f"{path}.base")
            modulus = _ints(_list(raw.get("modulus"), f"{path}.modulus"), f"{path}.modulus")
            return PolyQuotient(base, tuple(modulus))
        if kind == "product":
            factors = _list(raw.get("factors"), f"{path}.factors")
            return Product(tuple(ring_from_doc(f, f"{path}.factors[{i}]")
                                 for i, f in enumerate(factors)))
    except InvalidRing as exc:
        raise DocumentError(path, str(exc)) from None
    raise DocumentError(f"{path}.kind", f"unknown ring kind {kind!r}")


def element_to_doc(ring: Ring, a: Any) -> Any:
    if isinstance(ring, Product):
        return [element_to_doc(f, x) for f, x in zip(ring.factors, a)]
    return _strs(a)


def element_from_doc(ring: Ring, raw: Any, path: str) -> Any:
    if isinstance(ring, Product):
        items = _list(raw, path)
        if len(items) != len(ring.factors):
            raise DocumentError(path, f"expected {len(ring.factors)} factor elements")
        return tuple(element_from_doc(f, x, f"{path}[{i}]")
                     for i, (f, x) in enumerate(zip(ring.factors, items)))
    value = _ints(raw, path)
    try:
        return ring.normalize(value)
    except MalformedElement as exc:
        raise DocumentError(path, str(exc)) from None


# modules

def module_to_doc(module: ModuleDescriptor) -> dict | None:
    if module.kind == "self":
        return None
    if module.kind == "free":
        return {"free_rank": str(module.free_rank)}
    return {"orders": _strs(module.orders), "actions": [_strs(m.tolist()) for m in module.actions]}


def module_from_doc(ring: Ring, raw: Any, path: str = "$.module") -> ModuleDescriptor:
    if raw is None:
        return self_module(ring)
    if not isinstance(raw, dict):
        raise DocumentError(path, "expected an object")
    try:
        if "free_rank" in raw:
            return free_module(ring, parse_int(raw["free_rank"], f"{path}.free_rank"))
        orders = _ints(_list(raw.get("orders"), f"{path}.orders"), f"{path}.orders")
        k = len(orders)
        mats = []
        for j, mat in enumerate(_list(raw.get("actions"), f"{path}.actions")):
            p = f"{path}.actions[{j}]"
            rows = _ints(_list(mat, p), p)
            if len(rows) != k or any(not isinstance(r, list) or len(r) != k for r in rows):
                raise DocumentError(p, f"expected a {k}x{k} matrix")
            mats.append(IntMatrix(k, k, rows))
        return explicit_module(ring, orders, mats)
    except InvalidModule as exc:
        raise DocumentError(path, str(exc)) from None


def module_element_to_doc(module: ModuleDescriptor, t) -> Any:
    value = module.encode_element(t)
    if module.kind == "self":
        return element_to_doc(module.ring, value)
    if module.kind == "free":
        return [element_to_doc(module.ring, x) for x in value]
    return _strs(value)


def module_element_from_doc(module: ModuleDescriptor, raw: Any, path: str):
    if module.kind == "self":
        return module.ring.coords(element_from_doc(module.ring, raw, path))
    if module.kind == "free":
        items = _list(raw, path)
        if len(items) != module.free_rank:
            raise DocumentError(path, f"expected {module.free_rank} ring elements")
        return sum((module.ring.coords(element_from_doc(module.ring, x, f"{path}[{i}]"))
                    for i, x in enumerate(items)), ())
    coords = _ints(_list(raw, path), path)
    if len(coords) != module.rank or any(isinstance(c, list) for c in coords):
        raise DocumentError(path, f"expected {module.rank} integer coordinates")
    return module.reduce(coords)


# systems

def system_to_doc(system: SystemInstance) -> dict:
    doc = {"ring": ring_to_doc(system.ring)}
    mod = module_to_doc(system.module)
    if mod is not None:
        doc["module"] = mod
    doc["A"] = [[element_to_doc(system.ring, a) for a in row] for row in system.A]
    doc["b"] = [module_element_to_doc(system.module, t) for t in system.b]
    return doc


def system_from_doc(raw: Any) -> SystemInstance:
    if not isinstance(raw, dict):
        raise DocumentError("$", "expected a JSON object")
    unknown = set(raw) - {"ring", "module", "A", "b"}
    if unknown:
        raise DocumentError("$", f"unknown fields {sorted(unknown)}")
    ring = ring_from_doc(raw.get("ring"))
    module = module_from_doc(ring, raw.get("module"))
    rows = _list(raw.get("A"), "$.A")
    A = [[element_from_doc(ring, x, f"$.A[{i}][{j}]") for j, x in enumerate(_list(row, f"$.A[{i}]"))]
         for i, row in enumerate(rows)]
    b = [module_element_from_doc(module, x, f"$.b[{i}]") for i, x in enumerate(_list(raw.get("b"), "$.b"))]
    try:
        return SystemInstance(ring, module, A, b)
    except InvalidSystem as exc:
        raise DocumentError("$", str(exc)) from None


def parse_system(text: str) -> SystemInstance:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return system_from_doc(raw)


def format_system(system: SystemInstance) -> str:
    return dumps(system_to_doc(system))


def system_digest(system: SystemInstance) -> str:
    return "sha256:" + hashlib.sha256(_compact(system_to_doc(system)).encode()).hexdigest()
