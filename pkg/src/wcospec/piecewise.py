"""Piecewise-linear interval homeomorphisms driven by breakpoint families.

A family model is given by K named sequences of breakpoints.  Each sequence
has a closed-form generator in the integer index ``n``: the ``pos`` formula
gives the value at orbit depth n >= 0 on the side accumulating at 0, the
``neg`` formula the value at depth m >= 1 on the side accumulating at 1
(both formulas use the variable ``n``).  The first family is the *frame*:
its consecutive values bound the gaps in which the other families' points
of the same index must lie, and its depth-0 values on the two sides must
agree (the junction point in the middle).  The map sends every breakpoint
of index n to the same family's breakpoint of index n+1 (depth m to m-1 on
the upper side) and is linear in between, so the segment between two
adjacently named breakpoints is a map-invariant class.

Two kinds of data are derived from the generators:

* dense node tables for evaluation (depth-capped where double precision
  can no longer separate neighbouring breakpoints), and
* per-class asymptotic slopes at both ends, extracted as exact symbolic
  limits of consecutive-length ratios and cross-checked against the finite
  node table before the spectral engine is allowed to use them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import parse_expr

from .errors import DomainError, SchemaError, TruncationError

_N = sp.Symbol("n", integer=True, positive=True)

DEFAULT_N_MAX = 64


def _parse_generator(text: str):
    try:
        expr = parse_expr(text, local_dict={"n": _N}, evaluate=True)
    except Exception as exc:
        raise SchemaError(f"cannot parse breakpoint generator {text!r}: {exc}") from exc
    free = expr.free_symbols - {_N}
    if free:
        raise SchemaError(f"generator {text!r} uses unknown symbols {sorted(map(str, free))}")
    return expr


@dataclass(frozen=True)
class InvariantClass:
    """One map-invariant segment class with its asymptotic end slopes."""

    lower: str
    upper: str
    slope_at_0: float
    slope_at_1: float
    check_at_0: float  # finite-depth length ratio, diagnostics only
    check_at_1: float


class BreakpointFamilies:
    """Breakpoint generator bundle plus the derived node table and classes."""

    def __init__(self, families: list[dict], n_max: int = DEFAULT_N_MAX):
        if len(families) < 2:
            raise SchemaError("piecewise_linear_family needs at least two families")
        self.names = [str(f["name"]) for f in families]
        if len(set(self.names)) != len(self.names):
            raise SchemaError("family names must be distinct")
        self.pos = [_parse_generator(f["pos"]) for f in families]
        self.neg = [_parse_generator(f["neg"]) for f in families]
        self.n_max = int(n_max)
        if self.n_max < 8:
            raise SchemaError("n_max must be at least 8")
        self._pos_table, self._neg_table = self._tabulate()
        self.depth_pos = self._pos_table.shape[1] - 1   # largest index n
        self.depth_neg = self._neg_table.shape[1]       # largest depth m
        self.nodes_x, self.nodes_y = self._build_nodes()
        self._classes: list[InvariantClass] | None = None

    # ------------------------------------------------------------------
    # tabulation
    # ------------------------------------------------------------------

    def _tabulate(self):
        ns = np.arange(0, self.n_max + 2, dtype=float)
        ms = np.arange(1, self.n_max + 2, dtype=float)
        pos = np.empty((len(self.pos), len(ns)))
        neg = np.empty((len(self.neg), len(ms)))
        for i, expr in enumerate(self.pos):
            fn = sp.lambdify(_N, expr, modules="numpy")
            pos[i] = np.asarray(fn(ns), dtype=float)
        for i, expr in enumerate(self.neg):
            fn = sp.lambdify(_N, expr, modules="numpy")
            neg[i] = np.asarray(fn(ms), dtype=float)
        pos = pos[:, : self._usable_columns(pos, descending=True)]
        neg = neg[:, : self._usable_columns(neg, descending=False)]
        if pos.shape[1] < 8 or neg.shape[1] < 8:
            raise DomainError("breakpoint generators collapse too early in double precision")
        junction = abs(pos[0, 0] - float(self.neg[0].subs(_N, 0)))
        if junction > 1e-12:
            raise DomainError("frame generators disagree at the junction index 0")
        return pos, neg

    @staticmethod
    def _usable_columns(table: np.ndarray, descending: bool) -> int:
        """Number of leading columns within which all breakpoints stay ordered."""
        count = table.shape[1]
        for k in range(table.shape[1]):
            col = table[:, k]
            ok = bool(np.isfinite(col).all()) and \
                bool(np.all(np.diff(np.sort(col)) > 0.0))
            if descending:
                ok = ok and float(col.min()) > 0.0
                if k >= 1:
                    ok = ok and float(col.max()) < float(table[:, k - 1].min())
            else:
                ok = ok and float(col.max()) < 1.0
                if k >= 1:
                    ok = ok and float(col.min()) > float(table[:, k - 1].max())
            if not ok:
                count = k
                break
        return count

    def _gap_order(self, side: str, k: int) -> list[int]:
        """Ascending family order within one gap; the frame must sit on top."""
        table = self._pos_table if side == "pos" else self._neg_table
        col = table[:, k]
        order = [int(i) for i in np.argsort(col)]
        if order[-1] != 0:
            raise DomainError("frame family must bound its gaps from above")
        if side == "pos":
            lo, hi = table[0, k + 1], table[0, k]
        else:
            lo = table[0, k - 1] if k >= 1 else self._pos_table[0, 0]
            hi = table[0, k]
        for i in order[:-1]:
            if not (lo < col[i] < hi):
                raise DomainError(
                    f"family {self.names[i]!r} breakpoint leaves its frame gap "
                    f"on the {side} side (gap index {k})")
        return order

    def _build_nodes(self):
        xs, ys = [0.0, 1.0], [0.0, 1.0]
        pos, neg = self._pos_table, self._neg_table
        for i in range(len(self.names)):
            for k in range(pos.shape[1] - 1):
                xs.append(pos[i, k])
                ys.append(pos[i, k + 1])
            for k in range(neg.shape[1]):
                xs.append(neg[i, k])
                ys.append(neg[i, k - 1] if k >= 1 else pos[i, 0])
        order = np.argsort(xs)
        nx = np.asarray(xs)[order]
        ny = np.asarray(ys)[order]
        if not (np.all(np.diff(nx) > 0) and np.all(np.diff(ny) > 0)):
            raise DomainError("breakpoint families do not interleave monotonically")
        return nx, ny

    # ------------------------------------------------------------------
    # map queries
    # ------------------------------------------------------------------

    def breakpoint(self, name: str, index: int) -> float:
        i = self.names.index(name)
        if index >= 0:
            if index >= self._pos_table.shape[1]:
                raise TruncationError(
                    f"breakpoint {name}[{index}] beyond generated depth {self.depth_pos}")
            return float(self._pos_table[i, index])
        m = -index
        if m > self._neg_table.shape[1]:
            raise TruncationError(
                f"breakpoint {name}[{index}] beyond generated depth {self.depth_neg}")
        return float(self._neg_table[i, m - 1])

    def value(self, x):
        return np.interp(x, self.nodes_x, self.nodes_y)

    def inverse(self, y):
        return np.interp(y, self.nodes_y, self.nodes_x)

    def slope(self, x):
        """Right-hand slope of the node interpolant (a.e. derivative)."""
        idx = np.clip(np.searchsorted(self.nodes_x, x, side="right") - 1, 0,
                      len(self.nodes_x) - 2)
        dx = self.nodes_x[idx + 1] - self.nodes_x[idx]
        dy = self.nodes_y[idx + 1] - self.nodes_y[idx]
        return dy / dx

    # ------------------------------------------------------------------
    # invariant classes
    # ------------------------------------------------------------------

    def classes(self) -> list[InvariantClass]:
        if self._classes is None:
            self._classes = self._derive_classes()
        return self._classes

    def _derive_classes(self) -> list[InvariantClass]:
        probe_pos = min(12, self._pos_table.shape[1] - 3)
        probe_neg = min(12, self._neg_table.shape[1] - 2)
        order_pos = self._gap_order("pos", probe_pos)
        order_neg = self._gap_order("neg", probe_neg)
        if self._gap_order("pos", probe_pos + 1) != order_pos or \
           self._gap_order("neg", probe_neg + 1) != order_neg:
            raise DomainError("breakpoint ordering is not stable in depth")

        # boundary list bottom-up within one gap: (family index, index offset)
        bnd_pos = [(0, 1)] + [(i, 0) for i in order_pos if i != 0] + [(0, 0)]
        bnd_neg = [(0, -1)] + [(i, 0) for i in order_neg if i != 0] + [(0, 0)]
        labels_pos = [(self.names[lo[0]], self.names[hi[0]])
                      for lo, hi in zip(bnd_pos[:-1], bnd_pos[1:])]
        labels_neg = [(self.names[lo[0]], self.names[hi[0]])
                      for lo, hi in zip(bnd_neg[:-1], bnd_neg[1:])]
        if sorted(labels_pos) != sorted(labels_neg):
            raise DomainError(
                f"invariant classes differ between the two ends: {labels_pos} vs {labels_neg}")

        def expr_at(exprs, fam, offset):
            return exprs[fam].subs(_N, _N + offset) if offset else exprs[fam]

        out = []
        for j, label in enumerate(labels_pos):
            lo, hi = bnd_pos[j], bnd_pos[j + 1]
            len_pos = sp.simplify(expr_at(self.pos, hi[0], hi[1]) -
                                  expr_at(self.pos, lo[0], lo[1]))
            jn = labels_neg.index(label)
            lo_n, hi_n = bnd_neg[jn], bnd_neg[jn + 1]
            len_neg = sp.simplify(expr_at(self.neg, hi_n[0], hi_n[1]) -
                                  expr_at(self.neg, lo_n[0], lo_n[1]))
            slope0 = _ratio_limit(len_pos, forward=True)
            slope1 = _ratio_limit(len_neg, forward=False)
            chk0 = _finite_ratio(len_pos, self._pos_table.shape[1] - 2, forward=True)
            chk1 = _finite_ratio(len_neg, self._neg_table.shape[1] - 1, forward=False)
            _check_stabilized(label, slope0, chk0, "0")
            _check_stabilized(label, slope1, chk1, "1")
            out.append(InvariantClass(label[0], label[1], slope0, slope1, chk0, chk1))
        return out


def _ratio_limit(length_expr, forward: bool) -> float:
    shifted = length_expr.subs(_N, _N + 1) if forward else length_expr.subs(_N, _N - 1)
    ratio = sp.simplify(shifted / length_expr)
    lim = sp.limit(ratio, _N, sp.oo)
    if lim.is_finite is not True:
        raise DomainError(f"class length ratio has no finite limit: {ratio}")
    val = float(lim)
    if val <= 0:
        raise DomainError(f"class length ratio limit must be positive, got {val}")
    return val


def _finite_ratio(length_expr, depth: int, forward: bool) -> float:
    fn = sp.lambdify(_N, length_expr, modules="numpy")
    here = float(fn(float(depth)))
    nxt = float(fn(float(depth + 1 if forward else depth - 1)))
    if here <= 0 or nxt <= 0:
        raise DomainError("non-positive class length in breakpoint family")
    return nxt / here


def _check_stabilized(label, limit_val: float, finite_val: float, end: str):
    # the finite-depth ratio must already sit near its limit; catches
    # mislabeled classes and generators outside the supported shape
    if abs(finite_val - limit_val) > 0.25 * max(limit_val, 1e-30):
        raise DomainError(
            f"class {label} slope at end {end} not stabilized: "
            f"finite {finite_val:.6g} vs limit {limit_val:.6g}")
