"""Shared machinery for the call-by-name and call-by-value front ends."""

from __future__ import annotations

import sys

from ..core import (
    Arrow, Diagnostic, LamDef, Lazy, Name, Normalizer, Signature, Tensor, TypeDef, Unit, Variant,
    map_children, validate_signature,
)

LAMBDA_TYPES = (Arrow, Tensor, Unit, Variant, Lazy)


def validate_lambda(sig: Signature) -> list:
    """Validation for unpolarized signatures (no shifts, no mu/nu)."""
    out = validate_signature(sig, polarized=False)

    def walk(ty, span):
        if isinstance(ty, Name):
            return
        if not isinstance(ty, LAMBDA_TYPES):
            out.append(Diagnostic("lambda-type",
                                  f"{type(ty).__name__} types do not exist in the call-by-name/value language",
                                  ty.span or span))
            return
        map_children(ty, lambda c: walk(c, span) or c)

    for it in sig.items:
        if isinstance(it, (TypeDef, LamDef)):
            walk(it.body if isinstance(it, TypeDef) else it.type, it.span)
        else:
            out.append(Diagnostic("lambda-type", "expected a call-by-name/value definition", it.span))
    return out


def rename(ty, suffix: str):
    if isinstance(ty, Name):
        return Name(ty.text + suffix, ty.polarity)
    return map_children(ty, lambda c: rename(c, suffix))


class CircularEngine:
    """Circular derivation search over a normalized unpolarized signature.

    Subclasses provide ``rules(a, b)``: a list of ``(name, goals)`` where
    ``goals`` is a list of name pairs that must all hold.  Disproven pairs
    are cached always, proven pairs only at top level.
    """

    def __init__(self, sig: Signature):
        self.sig = Normalizer(sig, polarized=False).signature()
        self.proven: set = set()
        self.disproven: set = set()

    def body(self, n):
        return self.sig.types[n.text if isinstance(n, Name) else n].body

    def names(self) -> list:
        return list(self.sig.types)

    def sub(self, a: str, b: str) -> bool:
        for x in (a, b):
            if x not in self.sig.types:
                raise KeyError(f"undefined type name {x}")
        old = sys.getrecursionlimit()
        if old < 20000:
            sys.setrecursionlimit(20000)
        try:
            return self._sub(a, b, frozenset())
        finally:
            sys.setrecursionlimit(old)

    def _sub(self, a: str, b: str, path: frozenset) -> bool:
        key = (a, b)
        if key in path:
            return True
        if key in self.disproven:
            return False
        if key in self.proven:
            return True
        inner = path | {key}
        for _, goals in self.rules(a, b):
            if all(self._sub(x, y, inner) for x, y in goals):
                if not path:
                    self.proven.add(key)
                return True
        self.disproven.add(key)
        return False

    def rules(self, a: str, b: str) -> list:
        raise NotImplementedError


def text(n) -> str:
    return n.text if isinstance(n, Name) else n
