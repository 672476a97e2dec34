"""Interaction functions ``f, g: [0, 1] -> [0, 1]`` and the maps built from them.

Functions are closed-form descriptors rather than callbacks, so Lipschitz
constants are exact and ``1 - f = g`` can be decided structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exceptions import ArgumentError

KINDS = ("constant", "affine", "logistic", "pwl")

# slack for values that leave [0, 1] by rounding only
_DOMAIN_SLACK = 1e-12
# parameters closer than this are treated as equal by structural comparison
_PARAM_TOL = 1e-12


@dataclass(frozen=True)
class FunctionSpec:
    """One member of a closed family of maps ``[0, 1] -> [0, 1]``.

    ``kind`` / ``params``:

    * ``constant``: ``(c,)`` meaning ``c``
    * ``affine``: ``(a, b)`` meaning ``a*y + b``
    * ``logistic``: ``(r,)`` meaning ``r*y*(1-y)``
    * ``pwl``: ``((x0, y0), ..., (xk, yk))`` with ``x0 = 0``, ``xk = 1``

    ``complement=True`` denotes ``1 - base(y)``; it is how ``1 - logistic`` is
    written, and any other kind is folded back into its own family by
    :meth:`canonical`.
    """

    kind: str
    params: tuple
    complement: bool = False
    lipschitz: float = field(init=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ArgumentError(f"unknown function kind {self.kind!r}")
        params = tuple(self.params)
        if self.kind == "pwl":
            params = tuple((float(x), float(y)) for x, y in params)
        else:
            params = tuple(float(p) for p in params)
        object.__setattr__(self, "params", params)
        self._check_range()
        object.__setattr__(self, "lipschitz", self._lipschitz())

    def _check_range(self):
        k, p = self.kind, self.params
        if k == "constant":
            if len(p) != 1 or not 0.0 <= p[0] <= 1.0:
                raise ArgumentError(f"constant needs c in [0, 1], got {p}")
        elif k == "affine":
            if len(p) != 2:
                raise ArgumentError("affine needs (a, b)")
            a, b = p
            if not (0.0 <= b <= 1.0 and 0.0 <= a + b <= 1.0):
                raise ArgumentError(f"affine({a}, {b}) leaves [0, 1]")
        elif k == "logistic":
            if len(p) != 1 or not 0.0 <= p[0] <= 4.0:
                raise ArgumentError(f"logistic needs 0 <= r <= 4, got {p}")
        else:
            if len(p) < 2:
                raise ArgumentError("pwl needs at least two breakpoints")
            xs = [x for x, _ in p]
            ys = [y for _, y in p]
            if xs[0] != 0.0 or xs[-1] != 1.0:
                raise ArgumentError("pwl breakpoints must start at x=0 and end at x=1")
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise ArgumentError("pwl breakpoints must be strictly increasing in x")
            if any(not 0.0 <= y <= 1.0 for y in ys):
                raise ArgumentError("pwl values must lie in [0, 1]")

    def _lipschitz(self) -> float:
        k, p = self.kind, self.params
        if k == "constant":
            return 0.0
        if k == "affine":
            return abs(p[0])
        if k == "logistic":
            # sup |r (1 - 2y)| on [0, 1]
            return p[0]
        return max(abs((y1 - y0) / (x1 - x0)) for (x0, y0), (x1, y1) in zip(p, p[1:]))

    # -- evaluation --------------------------------------------------------
    def __call__(self, y):
        return evaluate(self, y)

    def _raw(self, y: np.ndarray) -> np.ndarray:
        k, p = self.kind, self.params
        if k == "constant":
            out = np.full_like(y, p[0])
        elif k == "affine":
            out = p[0] * y + p[1]
        elif k == "logistic":
            out = p[0] * y * (1.0 - y)
        else:
            xs = np.array([x for x, _ in p])
            ys = np.array([v for _, v in p])
            out = np.interp(y, xs, ys)
        return 1.0 - out if self.complement else out

    # -- structure ---------------------------------------------------------
    def complemented(self) -> "FunctionSpec":
        return FunctionSpec(self.kind, self.params, not self.complement).canonical()

    def canonical(self) -> "FunctionSpec":
        """Normal form used for structural equality of functions."""
        k, p, c = self.kind, self.params, self.complement
        if c and k == "constant":
            k, p, c = "constant", (1.0 - p[0],), False
        elif c and k == "affine":
            k, p, c = "affine", (-p[0], 1.0 - p[1]), False
        elif c and k == "pwl":
            k, p, c = "pwl", tuple((x, 1.0 - y) for x, y in p), False
        if k == "pwl":
            p = _drop_collinear(p)
            if len(p) == 2:
                (_, y0), (_, y1) = p
                k, p = "affine", (y1 - y0, y0)
        if k == "affine" and p[0] == 0.0:
            k, p = "constant", (p[1],)
        if k == "logistic" and p[0] == 0.0:
            k, p = "constant", (1.0 if c else 0.0,)
            c = False
        return FunctionSpec(k, p, c)

    def same_function(self, other: "FunctionSpec") -> bool:
        """Equal kind and parameters after normalisation, up to 1e-12 in each parameter."""
        a, b = self.canonical(), other.canonical()
        if (a.kind, a.complement) != (b.kind, b.complement):
            return False
        pa, pb = np.ravel(a.params), np.ravel(b.params)
        return pa.shape == pb.shape and bool(np.allclose(pa, pb, rtol=0.0, atol=_PARAM_TOL))

    def to_text(self) -> str:
        k, p = self.kind, self.params
        if k == "pwl":
            body = "pwl:" + ";".join(f"{_fmt(x)},{_fmt(y)}" for x, y in p)
        else:
            body = f"{k}:" + ",".join(_fmt(v) for v in p)
        return ("1-" + body) if self.complement else body


def _fmt(v: float) -> str:
    r = repr(float(v))
    return r[:-2] if r.endswith(".0") else r


def _drop_collinear(points):
    pts = list(points)
    out = [pts[0]]
    for i in range(1, len(pts) - 1):
        (x0, y0), (x1, y1), (x2, y2) = out[-1], pts[i], pts[i + 1]
        if (y1 - y0) * (x2 - x1) != (y2 - y1) * (x1 - x0):
            out.append(pts[i])
    out.append(pts[-1])
    return tuple(out)


def constant(c: float) -> FunctionSpec:
    return FunctionSpec("constant", (c,))


def affine(a: float, b: float) -> FunctionSpec:
    return FunctionSpec("affine", (a, b))


def logistic(r: float) -> FunctionSpec:
    return FunctionSpec("logistic", (r,))


def piecewise_linear(breakpoints) -> FunctionSpec:
    return FunctionSpec("pwl", tuple(breakpoints))


def evaluate(spec: FunctionSpec, y):
    """Evaluate ``spec`` at ``y`` (scalar or array), clamped to ``[0, 1]``."""
    arr = np.asarray(y, dtype=np.float64)
    if arr.size and (arr.min() < -_DOMAIN_SLACK or arr.max() > 1.0 + _DOMAIN_SLACK):
        raise ArgumentError("argument outside [0, 1]")
    out = np.clip(spec._raw(np.clip(arr, 0.0, 1.0)), 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


# -- text syntax ---------------------------------------------------------------

ALIASES = {
    "voter-f": "affine:-1,1",
    "voter-g": "affine:1,0",
}


def parse_function(text: str) -> FunctionSpec:
    """Parse ``constant:0.3``, ``affine:a,b``, ``logistic:4``, ``pwl:0,0;0.5,1;1,0``.

    A leading ``1-`` denotes the complement; ``voter-f`` and ``voter-g`` are aliases.
    """
    s = text.strip()
    s = ALIASES.get(s, s)
    comp = False
    if s.startswith("1-"):
        comp, s = True, ALIASES.get(s[2:], s[2:])
    kind, sep, body = s.partition(":")
    if not sep:
        raise ArgumentError(f"cannot parse function {text!r}")
    try:
        if kind == "pwl":
            params = tuple(tuple(float(v) for v in pt.split(",")) for pt in body.split(";"))
            if any(len(pt) != 2 for pt in params):
                raise ValueError
        else:
            params = tuple(float(v) for v in body.split(","))
    except ValueError:
        raise ArgumentError(f"cannot parse parameters in {text!r}") from None
    return FunctionSpec(kind, params, comp)


# -- pairs -----------------------------------------------------------------------

@dataclass(frozen=True)
class InteractionPair:
    """Switch-off probability ``f`` and switch-on probability ``g``."""

    f: FunctionSpec
    g: FunctionSpec
    name: str = ""

    @property
    def M(self) -> float:
        return max(self.f.lipschitz, self.g.lipschitz)

    @cached_property
    def is_memoryless(self) -> bool:
        return self.f.complemented().same_function(self.g)

    @property
    def is_voter(self) -> bool:
        return self.g.same_function(affine(1.0, 0.0)) and self.is_memoryless

    def describe(self) -> dict:
        return {
            "f": self.f.to_text(),
            "g": self.g.to_text(),
            "M": self.M,
            "memoryless": self.is_memoryless,
            "voter": self.is_voter,
        }


def voter_pair() -> InteractionPair:
    return InteractionPair(affine(-1.0, 1.0), affine(1.0, 0.0), name="voter")


def memoryless_pair(g: FunctionSpec, name: str = "") -> InteractionPair:
    """Pair with ``1 - f = g``."""
    return InteractionPair(g.complemented(), g, name=name)


def memoryless_logistic(r: float = 4.0) -> InteractionPair:
    return memoryless_pair(logistic(r), name=f"memoryless-logistic({_fmt(r)})")


def parse_pair(f_text: str, g_text: str) -> InteractionPair:
    """Build a pair from text; ``f_text == 'memoryless'`` sets ``f = 1 - g``."""
    g = parse_function(g_text)
    if f_text.strip() == "memoryless":
        return memoryless_pair(g)
    return InteractionPair(parse_function(f_text), g)


def gamma(pair: InteractionPair, x, y):
    """Conditional probability of state 1 next step: ``x(1 - f(y)) + (1 - x) g(y)``."""
    xa = np.asarray(x, dtype=np.float64)
    if xa.size and (xa.min() < -_DOMAIN_SLACK or xa.max() > 1.0 + _DOMAIN_SLACK):
        raise ArgumentError("own state outside [0, 1]")
    gy = evaluate(pair.g, y)
    if pair.is_memoryless:
        # 1 - f = g, so the own state drops out; avoids rounding in 1 - (1 - g)
        out = np.broadcast_to(gy, np.broadcast_shapes(xa.shape, np.shape(gy))).copy()
    else:
        fy = evaluate(pair.f, y)
        out = np.clip(xa * (1.0 - fy) + (1.0 - xa) * gy, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def gamma_tilde(pair: InteractionPair, s):
    """Restriction of ``gamma`` to the diagonal, ``gamma(s, s)``."""
    return gamma(pair, s, s)


def gamma_tilde_orbit(pair: InteractionPair, p: float, t: int) -> list[float]:
    if not 0.0 <= p <= 1.0:
        raise ArgumentError("p outside [0, 1]")
    if t < 0:
        raise ArgumentError("t must be non-negative")
    orbit = [float(p)]
    for _ in range(t):
        orbit.append(gamma_tilde(pair, orbit[-1]))
    return orbit


def theta(pair: InteractionPair, p: float) -> float:
    """``|1 - f(p) - g(p)|``; zero identically for memoryless pairs."""
    if pair.is_memoryless:
        return 0.0
    return abs(1.0 - evaluate(pair.f, p) - evaluate(pair.g, p))
