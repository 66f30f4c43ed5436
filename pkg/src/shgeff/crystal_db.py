"""Susceptibility tensors of five uniaxial crystal classes.

Each class is built from its independent coefficients (``chi11``, ``chi14``,
``chi15``, ``chi22``, ``chi33``).  Class ``"4"`` has two variants: the
component list taken literally, with ``T_132 = -chi14``
(``literal``) and the reading consistent with ``T_ijk = T_ikj``
(``symmetrized``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .tensor_core import as_tensor3

LITERAL = "literal"
SYMMETRIZED = "symmetrized"
VARIANTS = (LITERAL, SYMMETRIZED)


def _set(t, value, *indices):
    for idx in indices:
        t[tuple(int(c) - 1 for c in idx)] = value


def _build_42m(p, variant):
    t = np.zeros((3, 3, 3))
    _set(t, p["chi14"], "123", "132", "213", "231", "312", "321")
    return t


def _build_4mm(p, variant):
    t = np.zeros((3, 3, 3))
    _set(t, p["chi15"], "131", "113", "223", "232", "311", "322")
    _set(t, p["chi33"], "333")
    return t


def _build_4(p, variant):
    c14, c15 = p["chi14"], p["chi15"]
    t = np.zeros((3, 3, 3))
    _set(t, c14, "123", "213", "231", "312", "321")
    _set(t, -c14 if variant == LITERAL else c14, "132")
    _set(t, c15, "113", "131", "311")
    _set(t, -c15, "223", "232", "322")
    return t


def _build_62m(p, variant):
    t = np.zeros((3, 3, 3))
    _set(t, p["chi22"], "222")
    _set(t, -p["chi22"], "112", "121", "211")
    return t


def _build_6(p, variant):
    t = np.zeros((3, 3, 3))
    _set(t, p["chi11"], "111")
    _set(t, -p["chi11"], "122", "212", "221")
    _set(t, p["chi22"], "222")
    _set(t, -p["chi22"], "112", "121", "211")
    return t


@dataclass(frozen=True)
class CrystalClass:
    name: str
    params: tuple[str, ...]
    builder: Callable = field(repr=False)
    distinct_variants: bool = False
    example: str = ""

    @property
    def variants(self) -> tuple[str, ...]:
        return VARIANTS if self.distinct_variants else (SYMMETRIZED,)


_REGISTRY = {
    c.name: c for c in (
        CrystalClass("-42m", ("chi14",), _build_42m, example="KH2PO4"),
        CrystalClass("4mm", ("chi15", "chi33"), _build_4mm, example="LiNbO3"),
        CrystalClass("4", ("chi14", "chi15"), _build_4, distinct_variants=True, example="urea"),
        CrystalClass("-62m", ("chi22",), _build_62m, example="benitoite"),
        CrystalClass("6", ("chi11", "chi22"), _build_6, example="alpha-LiIO3"),
    )
}
_ALIASES = {"62m": "-62m", "-4-2m": "-42m"}


@dataclass(frozen=True)
class CrystalTemplate:
    name: str
    params: Mapping[str, float]
    variant: str = SYMMETRIZED


def get_class(name: str) -> CrystalClass:
    key = _ALIASES.get(name, name)
    try:
        return _REGISTRY[key]
    except KeyError:
        raise KeyError(f"unknown crystal class {name!r}; known: {', '.join(_REGISTRY)}") from None


def list_classes() -> list[CrystalClass]:
    return list(_REGISTRY.values())


def build(template_or_name, params: Mapping[str, float] | None = None,
          variant: str | None = None) -> np.ndarray:
    """Build the susceptibility tensor of a crystal class.

    Accepts either a :class:`CrystalTemplate` or ``(name, params, variant)``::

        build("-42m", {"chi14": 1.0})
        build(CrystalTemplate("4", {"chi14": 3, "chi15": 4}, "literal"))
    """
    if isinstance(template_or_name, CrystalTemplate):
        name = template_or_name.name
        params = template_or_name.params
        variant = variant or template_or_name.variant
    else:
        name = template_or_name
    variant = variant or SYMMETRIZED
    params = dict(params or {})
    cls = get_class(name)
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    missing = [p for p in cls.params if p not in params]
    extra = [p for p in params if p not in cls.params]
    if missing or extra:
        raise ValueError(f"class {cls.name!r} takes parameters {list(cls.params)}; "
                         f"missing {missing}, unexpected {extra}")
    values = {k: float(v) for k, v in params.items()}
    return as_tensor3(cls.builder(values, variant))
