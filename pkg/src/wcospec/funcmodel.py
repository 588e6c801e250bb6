"""Evaluatable models of interval self-maps and weights.

A :class:`FunctionSpec` is the serializable description of a function on
[0,1]; building it yields an evaluator supporting derivatives up to the
declared smoothness, exact or numeric inversion, iteration, and the two
orbit cocycles (weight products and chain-rule derivative products) that
the spectral formulas consume.

Supported kinds: infix ``expression`` over x, ``constant``, the one-real-
parameter family of fractional-linear self-maps fixing 0 and 1
(``moebius``, with map x / (c - (c-1) x)), ``piecewise_linear_family``
breakpoint models, and ``composite`` combinations (inverse, composition,
products, reciprocals, and weight-times-derivative-power transforms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import expressions as ex
from .errors import (ConvergenceError, DomainError, SchemaError,
                     UnsupportedDerivativeError)
from .piecewise import DEFAULT_N_MAX, BreakpointFamilies

ANALYTIC = 99          # effectively unlimited derivative order
VALIDATION_GRID = 2001
INVERSE_TOL = 1e-13


@dataclass(frozen=True)
class FunctionSpec:
    kind: str
    payload: dict

    @staticmethod
    def expression(text: str) -> "FunctionSpec":
        return FunctionSpec("expression", {"text": text})

    @staticmethod
    def constant(value: float) -> "FunctionSpec":
        return FunctionSpec("constant", {"value": float(value)})

    @staticmethod
    def moebius(c: float) -> "FunctionSpec":
        return FunctionSpec("moebius", {"c": float(c)})

    @staticmethod
    def piecewise(families: list[dict], n_max: int = DEFAULT_N_MAX) -> "FunctionSpec":
        return FunctionSpec("piecewise_linear_family",
                            {"families": families, "n_max": n_max})

    @staticmethod
    def composite(op: str, **kw) -> "FunctionSpec":
        return FunctionSpec("composite", {"op": op, **kw})

    def to_json(self) -> dict:
        doc = {"kind": self.kind}
        for key, val in self.payload.items():
            doc[key] = val.to_json() if isinstance(val, FunctionSpec) else val
        return doc

    @staticmethod
    def from_json(doc: dict) -> "FunctionSpec":
        if not isinstance(doc, dict) or "kind" not in doc:
            raise SchemaError("function spec must be an object with a 'kind'")
        kind = doc["kind"]
        payload = {k: v for k, v in doc.items() if k != "kind"}
        if kind == "composite":
            for key in ("of", "outer", "inner", "base", "map"):
                if key in payload:
                    payload[key] = FunctionSpec.from_json(payload[key])
            if "factors" in payload:
                payload["factors"] = [FunctionSpec.from_json(d) for d in payload["factors"]]
        known = {"expression", "constant", "moebius", "piecewise_linear_family", "composite"}
        if kind not in known:
            raise SchemaError(f"unsupported function kind {kind!r}")
        return FunctionSpec(kind, payload)


# ----------------------------------------------------------------------
# evaluators
# ----------------------------------------------------------------------


class _Evaluator:
    smoothness: int = ANALYTIC

    def value(self, x, order: int = 0):
        raise NotImplementedError


class _ConstEval(_Evaluator):
    def __init__(self, v: float):
        self.v = float(v)

    def value(self, x, order: int = 0):
        out = self.v if order == 0 else 0.0
        if np.isscalar(x):
            return out
        return np.full_like(np.asarray(x, float), out)


class _ExprEval(_Evaluator):
    def __init__(self, text: str):
        self.tree = ex.parse(text)
        self._derivs = {0: self.tree}

    def _tree(self, order: int):
        while order not in self._derivs:
            top = max(self._derivs)
            self._derivs[top + 1] = ex.diff(self._derivs[top])
        return self._derivs[order]

    def value(self, x, order: int = 0):
        return ex.evaluate(self._tree(order), x)


class _MoebiusEval(_Evaluator):
    """x -> x / (c - (c-1) x); fixes 0 and 1, derivative c at 1 and 1/c at 0."""

    def __init__(self, c: float):
        if c <= 0 or c == 1.0:
            raise SchemaError("moebius parameter must be positive and != 1")
        self.c = float(c)

    def value(self, x, order: int = 0):
        c = self.c
        d = c - (c - 1.0) * np.asarray(x, float) if not np.isscalar(x) else c - (c - 1.0) * x
        if order == 0:
            return x / d
        return math.factorial(order) * c * (c - 1.0) ** (order - 1) / d ** (order + 1)


class _PiecewiseEval(_Evaluator):
    smoothness = 1

    def __init__(self, families: list[dict], n_max: int):
        self.model = BreakpointFamilies(families, n_max)

    def value(self, x, order: int = 0):
        if order == 0:
            return self.model.value(x)
        if order == 1:
            return self.model.slope(x)
        raise UnsupportedDerivativeError(
            "piecewise-linear maps have no derivatives beyond order 1")


class _InverseEval(_Evaluator):
    def __init__(self, base: "_Evaluator"):
        self.base = base
        self.smoothness = min(2, base.smoothness)
        self._increasing = _scalar(base.value(0.0)) < _scalar(base.value(1.0))

    def _inv(self, y):
        if isinstance(self.base, _MoebiusEval):
            return _MoebiusEval(1.0 / self.base.c).value(y)
        if isinstance(self.base, _PiecewiseEval):
            return self.base.model.inverse(y)
        return _numeric_inverse(self.base, y, self._increasing)

    def value(self, x, order: int = 0):
        g = self._inv(x)
        if order == 0:
            return g
        d1 = self.base.value(g, 1)
        if order == 1:
            return 1.0 / d1
        if order == 2:
            return -self.base.value(g, 2) / d1 ** 3
        raise UnsupportedDerivativeError("inverse models support orders <= 2")


class _ComposeEval(_Evaluator):
    def __init__(self, outer: "_Evaluator", inner: "_Evaluator"):
        self.outer, self.inner = outer, inner
        self.smoothness = min(2, outer.smoothness, inner.smoothness)

    def value(self, x, order: int = 0):
        g = self.inner.value(x)
        if order == 0:
            return self.outer.value(g)
        g1 = self.inner.value(x, 1)
        f1 = self.outer.value(g, 1)
        if order == 1:
            return f1 * g1
        if order == 2:
            return self.outer.value(g, 2) * g1 ** 2 + f1 * self.inner.value(x, 2)
        raise UnsupportedDerivativeError("composed models support orders <= 2")


class _ProductEval(_Evaluator):
    def __init__(self, factors: list["_Evaluator"]):
        self.factors = factors
        self.smoothness = min([2] + [f.smoothness for f in factors])

    def value(self, x, order: int = 0):
        if order == 0:
            out = self.factors[0].value(x)
            for f in self.factors[1:]:
                out = out * f.value(x)
            return out
        if order == 1:
            vals = [f.value(x) for f in self.factors]
            ders = [f.value(x, 1) for f in self.factors]
            total = 0.0
            for i in range(len(self.factors)):
                term = ders[i]
                for j, v in enumerate(vals):
                    if j != i:
                        term = term * v
                total = total + term
            return total
        if order == 2 and len(self.factors) == 2:
            f, g = self.factors
            return (f.value(x, 2) * g.value(x) + 2.0 * f.value(x, 1) * g.value(x, 1)
                    + f.value(x) * g.value(x, 2))
        raise UnsupportedDerivativeError("product models support orders <= 2")


class _ReciprocalEval(_Evaluator):
    def __init__(self, base: "_Evaluator"):
        self.base = base
        self.smoothness = min(2, base.smoothness)

    def value(self, x, order: int = 0):
        v = self.base.value(x)
        if np.any(np.asarray(v) == 0):
            raise DomainError("reciprocal of a function with a zero")
        if order == 0:
            return 1.0 / v
        d1 = self.base.value(x, 1)
        if order == 1:
            return -d1 / v ** 2
        if order == 2:
            return (2.0 * d1 ** 2 - v * self.base.value(x, 2)) / v ** 3
        raise UnsupportedDerivativeError("reciprocal models support orders <= 2")


class _TimesDerivPowEval(_Evaluator):
    """base(x) * (map'(x))^exponent, the weight transform used on Sobolev spaces."""

    def __init__(self, base: "_Evaluator", map_eval: "_Evaluator", exponent: float):
        self.base, self.map_eval, self.exponent = base, map_eval, float(exponent)
        self.smoothness = min(1, base.smoothness, map_eval.smoothness - 1)

    def value(self, x, order: int = 0):
        d1 = self.map_eval.value(x, 1)
        if np.any(np.asarray(d1) <= 0):
            raise DomainError("derivative-power transform needs a positive map derivative")
        p = d1 ** self.exponent
        if order == 0:
            return self.base.value(x) * p
        if order == 1:
            d2 = self.map_eval.value(x, 2)
            return (self.base.value(x, 1) * p +
                    self.base.value(x) * self.exponent * d1 ** (self.exponent - 1.0) * d2)
        raise UnsupportedDerivativeError("weight transform supports orders <= 1")


def _scalar(v) -> float:
    return float(np.asarray(v).reshape(-1)[0])


def _numeric_inverse(base: "_Evaluator", y, increasing: bool):
    """Monotone inverse on [0,1] by bracketed bisection refined with Newton."""
    ya = np.atleast_1d(np.asarray(y, dtype=float))
    lo = np.zeros_like(ya)
    hi = np.ones_like(ya)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        val = np.asarray(base.value(mid), dtype=float)
        high_side = (val > ya) if increasing else (val < ya)
        hi = np.where(high_side, mid, hi)
        lo = np.where(high_side, lo, mid)
    root = 0.5 * (lo + hi)
    # Newton polish (the bracket is already ~1e-18 wide; this i mostly
    # sharpens derivative-limited cases)
    for _ in range(3):
        val = np.asarray(base.value(root), dtype=float)
        der = np.asarray(base.value(root, 1), dtype=float)
        step = np.where(der != 0, (val - ya) / np.where(der == 0, 1.0, der), 0.0)
        root = np.clip(root - step, 0.0, 1.0)
    err = np.abs(np.asarray(base.value(root), dtype=float) - ya)
    if np.any(err > 1e-10):
        raise ConvergenceError(f"inverse solve residual {float(err.max()):.3e} above tolerance")
    return root if not np.isscalar(y) else float(root[0])


def _build_evaluator(spec: FunctionSpec) -> "_Evaluator":
    if spec.kind == "expression":
        return _ExprEval(spec.payload["text"])
    if spec.kind == "constant":
        return _ConstEval(spec.payload["value"])
    if spec.kind == "moebius":
        return _MoebiusEval(spec.payload["c"])
    if spec.kind == "piecewise_linear_family":
        return _PiecewiseEval(spec.payload["families"],
                              int(spec.payload.get("n_max", DEFAULT_N_MAX)))
    if spec.kind == "composite":
        op = spec.payload["op"]
        if op == "inverse":
            return _InverseEval(_build_evaluator(spec.payload["of"]))
        if op == "compose":
            return _ComposeEval(_build_evaluator(spec.payload["outer"]),
                                _build_evaluator(spec.payload["inner"]))
        if op == "product":
            return _ProductEval([_build_evaluator(s) for s in spec.payload["factors"]])
        if op == "reciprocal":
            return _ReciprocalEval(_build_evaluator(spec.payload["of"]))
        if op == "times_deriv_pow":
            return _TimesDerivPowEval(_build_evaluator(spec.payload["base"]),
                                      _build_evaluator(spec.payload["map"]),
                                      spec.payload["exponent"])
        raise SchemaError(f"unknown composite op {op!r}")
    raise SchemaError(f"unsupported function kind {spec.kind!r}")


# ----------------------------------------------------------------------
# models
# ----------------------------------------------------------------------


@dataclass
class HomeoModel:
    """A homeomorphism of [0,1] with derivative and iteration support."""

    spec: FunctionSpec
    evaluator: _Evaluator = field(repr=False)
    orientation: str = "preserving"   # or "reversing"
    smoothness: int = ANALYTIC

    def value(self, x, order: int = 0):
        _check_domain(x)
        if order < 0 or order > self.smoothness:
            raise UnsupportedDerivativeError(
                f"order {order} exceeds smoothness {self.smoothness}")
        return self.evaluator.value(x, order)

    def inverse_value(self, y):
        _check_domain(y)
        return _InverseEval(self.evaluator)._inv(y)

    def iterate(self, n: int, x):
        """n-fold composition; n = 0 is the identity, negative n inverts."""
        _check_domain(x)
        if isinstance(self.evaluator, _MoebiusEval) and n != 0:
            return _MoebiusEval(self.evaluator.c ** n if n > 0 else
                                (1.0 / self.evaluator.c) ** (-n)).value(x)
        y = np.asarray(x, dtype=float) if not np.isscalar(x) else x
        for _ in range(abs(n)):
            y = self.evaluator.value(y) if n > 0 else self.inverse_value(y)
        return y

    @property
    def breakpoints(self) -> BreakpointFamilies | None:
        ev = self.evaluator
        return ev.model if isinstance(ev, _PiecewiseEval) else None


@dataclass
class WeightModel:
    """An invertible weight function with its positivity certificate."""

    spec: FunctionSpec
    evaluator: _Evaluator = field(repr=False)
    smoothness: int = ANALYTIC
    min_abs: float = 0.0

    def value(self, x, order: int = 0):
        _check_domain(x)
        if order < 0 or order > self.smoothness:
            raise UnsupportedDerivativeError(
                f"order {order} exceeds smoothness {self.smoothness}")
        return self.evaluator.value(x, order)


def _check_domain(x):
    arr = np.asarray(x)
    if np.any(arr < -1e-12) or np.any(arr > 1.0 + 1e-12):
        raise DomainError("argument outside [0,1]")


def build_homeo(spec: FunctionSpec) -> HomeoModel:
    ev = _build_evaluator(spec)
    grid = np.linspace(0.0, 1.0, VALIDATION_GRID)
    vals = np.asarray(ev.value(grid), dtype=float)
    v0, v1 = vals[0], vals[-1]
    if abs(v0) <= 1e-9 and abs(v1 - 1.0) <= 1e-9:
        orientation = "preserving"
    elif abs(v0 - 1.0) <= 1e-9 and abs(v1) <= 1e-9:
        orientation = "reversing"
    else:
        raise DomainError(f"map endpoints ({v0:.3g}, {v1:.3g}) are not a bijection of [0,1]")
    diffs = np.diff(vals)
    if orientation == "preserving" and not np.all(diffs > 0):
        raise DomainError("map is not strictly increasing on the validation grid")
    if orientation == "reversing" and not np.all(diffs < 0):
        raise DomainError("map is not strictly decreasing on the validation grid")
    if ev.smoothness >= 1:
        ders = np.asarray(ev.value(grid, 1), dtype=float)
        if orientation == "preserving" and np.any(ders <= 0):
            raise DomainError("map derivative must be positive for a preserving model")
        if orientation == "reversing" and np.any(ders >= 0):
            raise DomainError("map derivative must be negative for a reversing model")
    return HomeoModel(spec, ev, orientation, ev.smoothness)


def build_weight(spec: FunctionSpec) -> WeightModel:
    ev = _build_evaluator(spec)
    grid = np.linspace(0.0, 1.0, VALIDATION_GRID)
    vals = np.abs(np.asarray(ev.value(grid), dtype=float))
    min_abs = float(vals.min())
    if min_abs <= 0.0:
        raise DomainError("weight is not invertible: |w| reaches 0 on the validation grid")
    return WeightModel(spec, ev, ev.smoothness, min_abs)


# ----------------------------------------------------------------------
# cocycles
# ----------------------------------------------------------------------


def evaluate(model, x, order: int = 0):
    """Uniform entry point for both model kinds."""
    return model.value(x, order)


def iterate(phi: HomeoModel, n: int, x):
    return phi.iterate(n, x)


def weight_cocycle(w: WeightModel, phi: HomeoModel, n: int, x):
    """w(x) w(phi x) ... w(phi^(n-1) x) for n >= 1."""
    if n < 1:
        raise DomainError("weight cocycle needs n >= 1")
    y = np.asarray(x, dtype=float) if not np.isscalar(x) else x
    out = None
    for _ in range(n):
        term = w.value(y)
        out = term if out is None else out * term
        y = phi.value(y)
    return out


def derivative_cocycle(phi: HomeoModel, n: int, x):
    """Chain-rule product for the n-th iterate's derivative; n may be negative."""
    if n == 0:
        raise DomainError("derivative cocycle needs |n| >= 1")
    if n > 0:
        y = np.asarray(x, dtype=float) if not np.isscalar(x) else x
        out = None
        for _ in range(n):
            term = phi.value(y, 1)
            out = term if out is None else out * term
            y = phi.value(y)
        return out
    y = np.asarray(x, dtype=float) if not np.isscalar(x) else x
    out = None
    for _ in range(-n):
        y = phi.inverse_value(y)
        term = 1.0 / phi.value(y, 1)
        out = term if out is None else out * term
    return out
