"""Built-in integrable maps with rational fibrations.

Every entry carries its map, explicit inverse, first integral and a closed
form family of fiber parametrizations P_h(t).  Parameters (``a`` for br,
``b`` for the pal maps) stay symbolic unless given.
"""

from __future__ import annotations

import math

from .fibered_dynamics import FiberFamily, IntegrableSystem, RationalMapPlane
from .parser import parse_expression

__all__ = ["BUILTIN_NAMES", "builtin", "BR_CLOSED_INVERSE", "builtin_params"]

_VARS = ("x", "y", "t", "h")

# base point (a, (ah + 1 + delta)/2), delta = sqrt((ah + 1)^2 - 4a^2)
_DELTA = "sqrt((a*h+1)^2-4*a^2)"

# closed-form inverse of the br family; agrees with the slope inverse on C_h
BR_CLOSED_INVERSE = (
    "(-2*D*x+(a*h^2+(D+1)*h-4*a+2)*y-a*h+2*a+D-1)"
    "/((a*h^2+(1-D)*h-4*a+2)*x+2*D*y+a*h-2*a-D+1)"
).replace("D", _DELTA)

_TABLE = {
    "br": dict(
        params=("a",),
        F=("y", "(a-y+y^2)/x"),
        inverse=("(a-x+x^2)/y", "x"),
        V="(x^2+y^2-x-y+a)/(x*y)",
        P=(
            f"(2*D*t-a*h^2-(1+D)*h-2+4*a)/(2*(-t^2+h*t-1))+a",
            f"((-a*h+D-1)*t^2+(4*a-2)*t-a*h-D-1)/(2*(-t^2+h*t-1))",
        ),
        Q="(y-(a*h+1+D)/2)/(x-a)",
        h_range=("2-1/a", "2"),
        base_x="a",
    ),
    "saito": dict(
        params=(),
        F=("x*y", "y*(1+x)/(1+x*y)"),
        inverse=("x/(y*(1+x)-x)", "y*(1+x)-x"),
        V="y*(1+x)",
        P=("t", "h/(t+1)"),
        Q="x",
    ),
    "nostra": dict(
        params=(),
        F=("y", "y*(1+x)/(1+y)"),
        inverse=("y*(1+x)/x-1", "x"),
        V="y*(1+x)",
        P=("t", "h/(t+1)"),
        Q="x",
    ),
    "pal1": dict(
        params=("b",),
        F=("y", "y/(1+b*(x-y))"),
        inverse=("(x/y-1)/b+x", "x"),
        V="(1+b*x+b*y+b^2*x*y)/y",
        P=("t", "(-b*t-1)/(b^2*t+b-h)"),
        Q="x",
    ),
    "pal2": dict(
        params=("b",),
        F=("y", "x/(1+b*(y-x))"),
        inverse=("y*(1+b*x)/(1+b*y)", "x"),
        V="(1+b*y+x*y)/(x*y)",
        P=("t", "1/((h-1)*t-b)"),
        Q="x",
    ),
    "pal3": dict(
        params=("b",),
        F=("y", "(-b*x+b*y+y^2)/x"),
        inverse=("x*(b+x)/(y+b)", "x"),
        V="(y+b)/x",
        P=("t", "h*t-b"),
        Q="x",
    ),
    "pal4": dict(
        params=("b",),
        F=("y", "(b*y+y^2)/(x+b)"),
        inverse=("x*(b+x)/y-b", "x"),
        V="(x+b)/y",
        P=("t", "(t+b)/h"),
        Q="x",
    ),
    "pal5": dict(
        params=("b",),
        F=("y", "(b*y+x*y)/(y+b)"),
        inverse=("y*(x+b)/x-b", "x"),
        V="y*(x+b)",
        P=("t", "h/(t+b)"),
        Q="x",
    ),
    "pal6": dict(
        params=("b",),
        F=("y", "(b*x-b*y+x*y)/y"),
        inverse=("x*(y+b)/(x+b)", "x"),
        V="x*(y+b)",
        P=("t", "(-b*t+h)/t"),
        Q="x",
    ),
}

BUILTIN_NAMES = tuple(_TABLE)


def builtin_params(name: str) -> tuple:
    return _TABLE[_key(name)]["params"]


def _key(name: str) -> str:
    key = name.lower()
    if key not in _TABLE:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    return key


def _br_hint(theta):
    # inverse of theta(h) = arg((h - i sqrt(4 - h^2))/2)/(2 pi) on (h_c, 2)
    return 2 * math.cos(2 * math.pi * float(theta))


def builtin(name: str, **values) -> IntegrableSystem:
    """The named system; keyword arguments fix parameters (e.g. a=1)."""
    key = _key(name)
    spec = _TABLE[key]
    syms = {p: None for p in spec["params"]}

    def pe(src, variables=_VARS):
        return parse_expression(src.replace("D", _DELTA), syms, variables)

    F = RationalMapPlane(
        pe(spec["F"][0]),
        pe(spec["F"][1]),
        (pe(spec["inverse"][0]), pe(spec["inverse"][1])),
        dict(syms),
    )
    family = FiberFamily(pe(spec["P"][0]), pe(spec["P"][1]), pe(spec["Q"]))
    h_range = None
    if "h_range" in spec:
        h_range = tuple(_const(pe(e)) for e in spec["h_range"])
    base_x = _const(pe(spec["base_x"])) if "base_x" in spec else None
    sys = IntegrableSystem(
        key,
        F,
        pe(spec["V"]),
        family,
        dict(syms),
        h_range,
        base_x,
        _br_hint if key == "br" else None,
    )
    values = {k: v for k, v in values.items() if v is not None}
    return sys.specialize(**values) if values else sys


def _const(e):
    if e.is_constant():
        return e.constant_value()
    return e


def all_builtins(**values):
    """All systems, with ``a``/``b`` applied where the system has that parameter."""
    out = {}
    for name in BUILTIN_NAMES:
        vals = {k: v for k, v in values.items() if k in _TABLE[name]["params"]}
        out[name] = builtin(name, **vals)
    return out
