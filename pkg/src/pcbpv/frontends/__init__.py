"""Isorecursive, call-by-name and call-by-value front ends."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..core import Signature, TypeDef
from ..subtype import SubtypeState
from .cbn import CbnSubtyping, cbn_full, cbn_name, cbn_sub, cbn_translate, cbn_type
from .cbv import CbvSubtyping, cbv_empty, cbv_name, cbv_sub, cbv_translate, cbv_type
from .iso import IsoTranslator, iso_name, iso_translate, validate_iso
from ._lambda import validate_lambda


@dataclass(frozen=True)
class Disagreement:
    judgment: str  # "sub", "full" or "empty"
    left: str
    right: Optional[str]
    source: bool
    core: bool

    def __str__(self) -> str:
        goal = f"{self.left} ≤ {self.right}" if self.right is not None else f"{self.left} {self.judgment}"
        return f"{goal}: source says {_yn(self.source)}, translation says {_yn(self.core)}"


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _user_names(sig: Signature) -> list:
    return [it.name for it in sig.items if isinstance(it, TypeDef)]


def xcheck(sig: Signature, mode: str) -> list:
    """Compare source-level judgments with core judgments on the translation."""
    if mode == "cbn":
        engine, core_sig, tr = CbnSubtyping(sig), cbn_translate(sig), cbn_name
        unary = ("full", engine.full, lambda st, n: st.table.is_full(n))
    elif mode == "cbv":
        engine, core_sig, tr = CbvSubtyping(sig), cbv_translate(sig), cbv_name
        unary = ("empty", engine.empty, lambda st, n: st.table.is_empty(n))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    state = SubtypeState(core_sig)
    names = _user_names(sig)
    out = []
    kind, src_pred, core_pred = unary
    for t in names:
        a, b = src_pred(t), core_pred(state, tr(t))
        if a != b:
            out.append(Disagreement(kind, t, None, a, b))
    for t in names:
        for u in names:
            a, b = engine.sub(t, u), state.sub(tr(t), tr(u))
            if a != b:
                out.append(Disagreement("sub", t, u, a, b))
    return out


__all__ = [
    "CbnSubtyping", "CbvSubtyping", "Disagreement", "IsoTranslator", "cbn_full", "cbn_name",
    "cbn_sub", "cbn_translate", "cbn_type", "cbv_empty", "cbv_name", "cbv_sub", "cbv_translate",
    "cbv_type", "iso_name", "iso_translate", "validate_iso", "validate_lambda", "xcheck",
]
