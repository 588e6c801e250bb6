"""Independent numerical oracles for the closed-form spectral engine.

Nothing here reuses the fixed-point formulas.  Essential radii are
estimated from the growth of orbit cocycles, eigenvalues are rebuilt as
infinite products, approximate-point membership is witnessed by explicit
almost-eigenvectors (kernel side) or almost-eigenmeasures (adjoint side),
the lower-triangular integration operator is compressed by dyadic-square
kernels with computable defect norms, and the L^p change-of-variables
isometry is checked by quadrature.  Each check reports a verdict against
its closed-form counterpart rather than silently asserting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, Refusal
from .funcmodel import HomeoModel, WeightModel

DEFAULT_DEPTH = 40
DEFAULT_GRID = 4000


@dataclass
class OracleVerdict:
    quantity: str
    closed_form: float
    estimate: float
    relative_error: float
    converged: bool
    samples: list = field(default_factory=list)

    @staticmethod
    def make(quantity: str, closed_form: float, estimate: float,
             tolerance: float, samples=()) -> "OracleVerdict":
        rel = abs(estimate - closed_form) / max(abs(closed_form), 1e-30)
        return OracleVerdict(quantity, closed_form, estimate, rel,
                             rel <= tolerance, list(samples))

    def to_json(self) -> dict:
        return {
            "quantity": self.quantity,
            "closed_form": self.closed_form,
            "estimate": self.estimate,
            "relative_error": self.relative_error,
            "converged": self.converged,
            "samples": list(self.samples),
        }


# ----------------------------------------------------------------------
# cocycle growth
# ----------------------------------------------------------------------


def cocycle_growth(phi: HomeoModel, w: WeightModel, m: float,
                   depth: int = DEFAULT_DEPTH, grid_size: int = DEFAULT_GRID) -> dict:
    """Grid max/min of N-step geometric-mean cocycle rates, both orbit directions.

    Forward orbits see the rates at attracting ends, inverse orbits the
    rates at repelling ends; together the extremes estimate the essential
    radii.  All products accumulate in log space.
    """
    if depth < 8:
        raise DomainError("cocycle growth needs depth >= 8")
    xs = np.linspace(0.0, 1.0, grid_size)
    snapshots = {d: [] for d in (depth - 2, depth - 1, depth)}
    for direction in (+1, -1):
        acc = np.zeros_like(xs)
        y = xs.copy()
        for step in range(1, depth + 1):
            if direction < 0:
                y = np.asarray(phi.inverse_value(y), dtype=float)
            dphi = np.abs(np.asarray(phi.value(y, 1), dtype=float))
            if np.any(dphi <= 0):
                raise DomainError("vanishing map derivative in cocycle")
            acc += np.log(np.abs(np.asarray(w.value(y), dtype=complex))) \
                + m * np.log(dphi)
            if direction > 0:
                y = np.asarray(phi.value(y), dtype=float)
            if step in snapshots:
                r = np.exp(acc / step)
                snapshots[step].append((float(r.max()), float(r.min())))
    history = [{"depth": d,
                "max_rate": max(r[0] for r in snapshots[d]),
                "min_rate": min(r[1] for r in snapshots[d])}
               for d in sorted(snapshots)]
    return {
        "max_rate": history[-1]["max_rate"],
        "min_rate": history[-1]["min_rate"],
        "history": history,
    }


# ----------------------------------------------------------------------
# eigenfunction products
# ----------------------------------------------------------------------


def eigenfunction_product(phi: HomeoModel, w: WeightModel, end: int,
                          factors: int, grid_size: int, radial_bounds) -> dict:
    """Rebuild the eigenfunction at an attracting/repelling endpoint as a product.

    For the endpoint 0 of a map moving points down, f = prod_k w(phi^k x)/lam
    with lam = w(0) satisfies w * (f o phi) = lam f up to a factor w(phi^K x)
    that converges to lam geometrically.  The endpoint 1 runs the same
    construction along the inverse orbit.  Refuses when the closed-form
    radii say no isolated eigenvalue can sit at that endpoint.
    """
    R2, R1 = radial_bounds
    lam = complex(np.asarray(w.value(float(end))).item())
    probe = 0.01 if end == 0 else 0.99
    moving_down = float(phi.value(probe)) < probe
    if end == 0:
        if not moving_down:
            raise Refusal("endpoint 0 is not attracting for this map")
        if abs(lam) <= R1 * (1 + 1e-9):
            raise Refusal(f"|w(0)| = {abs(lam):.6g} does not exceed the outer radius {R1:.6g}")
    else:
        if not moving_down:
            raise Refusal("endpoint 1 is not repelling for this map")
        if abs(lam) >= R2 * (1 - 1e-9):
            raise Refusal(f"|w(1)| = {abs(lam):.6g} is not below the inner radius {R2:.6g}")

    xs = np.linspace(0.0, 1.0, grid_size)

    def build(start: np.ndarray) -> np.ndarray:
        f = np.ones_like(start, dtype=complex)
        y = start.copy()
        if end == 0:
            for _ in range(factors):
                f *= np.asarray(w.value(y), dtype=complex) / lam
                y = np.asarray(phi.value(y), dtype=float)
        else:
            for _ in range(factors):
                y = np.asarray(phi.inverse_value(y), dtype=float)
                f *= lam / np.asarray(w.value(y), dtype=complex)
        return f

    f = build(xs)
    f_phi = build(np.asarray(phi.value(xs), dtype=float))
    wx = np.asarray(w.value(xs), dtype=complex)
    residual_fn = wx * f_phi - lam * f
    norm = float(np.abs(f).max())
    residual = float(np.abs(residual_fn).max()) / norm

    h = xs[1] - xs[0]
    d_res = np.diff(residual_fn) / h
    d_f = np.abs(np.diff(f) / h)
    deriv_residual = float(np.abs(d_res).max()) / max(float(d_f.max()), norm)

    # convergence of the partial products at a probe point
    mid = np.array([0.5])
    prev = _partial_product(phi, w, end, lam, mid, factors)[0]
    more = _partial_product(phi, w, end, lam, mid, factors + 5)[0]
    converged = abs(more - prev) <= 1e-6 * max(1.0, abs(prev))
    return {
        "lambda": lam,
        "residual": residual,
        "deriv_residual": deriv_residual,
        "converged": bool(converged),
    }


def _partial_product(phi, w, end, lam, start, factors):
    f = np.ones_like(start, dtype=complex)
    y = start.copy()
    for _ in range(factors):
        if end == 0:
            f *= np.asarray(w.value(y), dtype=complex) / lam
            y = np.asarray(phi.value(y), dtype=float)
        else:
            y = np.asarray(phi.inverse_value(y), dtype=float)
            f *= lam / np.asarray(w.value(y), dtype=complex)
    return f


# ----------------------------------------------------------------------
# approximate-point witnesses
# ----------------------------------------------------------------------


def approx_point_witness(phi: HomeoModel, w: WeightModel, m: float, lam: complex,
                         scale: int, grid_size: int = 4096,
                         side: str = "kernel") -> dict:
    """Residual of a propagated-bump witness over `scale` orbit segments.

    side='kernel': an almost-eigenvector of the multiplier-m operator,
    residual in the sup norm.  side='adjoint': an almost-eigenmeasure of
    the transposed action (masses pushed along the orbit), residual in the
    total-variation norm.  Membership on the kernel side means the
    residual decays with scale; at spectral distance d the residual cannot
    drop below ~d.
    """
    if lam == 0:
        raise DomainError("witness construction needs a nonzero target value")
    if side not in ("kernel", "adjoint"):
        raise DomainError("side must be 'kernel' or 'adjoint'")

    def symbol(x):
        return np.asarray(w.value(x), dtype=complex) * \
            np.asarray(phi.value(x, 1), dtype=float) ** m

    probe = np.linspace(0.01, 0.99, 1971)
    sym = np.abs(symbol(probe))
    base = float(probe[int(np.argmin(np.abs(sym - abs(lam))))])

    def it(x: float, k: int) -> float:
        return float(phi.iterate(k, x))

    half = max(2, scale // 2)
    ks = list(range(-half, half + 1))
    centers = {k: it(base, k) for k in ks}
    delta = 0.02
    lo_pt, hi_pt = base - delta, base + delta
    seg = {k: tuple(sorted((it(lo_pt, k), it(hi_pt, k)))) for k in ks}

    gam = {0: 1.0 + 0.0j}
    for k in range(0, half):
        g = complex(np.asarray(symbol(centers[k])).item())
        gam[k + 1] = lam * gam[k] / g if side == "kernel" else gam[k] * g / lam
    for k in range(0, -half, -1):
        g = complex(np.asarray(symbol(centers[k - 1])).item())
        gam[k - 1] = gam[k] * g / lam if side == "kernel" else lam * gam[k] / g
    peak = max(abs(v) for v in gam.values())
    for k in gam:
        gam[k] = gam[k] / peak

    truncated = any(seg[k][1] - seg[k][0] < 1.0 / grid_size for k in ks)

    if side == "adjoint":
        # masses mu_k at the orbit points; transposed action pushes
        # g(x_k) mu_k onto x_{k+1}; interior terms cancel by construction
        mu = {k: gam[k] for k in ks}
        total = sum(abs(v) for v in mu.values())
        g_hi = complex(np.asarray(symbol(centers[half])).item())
        res = abs(lam) * abs(mu[-half]) + abs(g_hi) * abs(mu[half])
        for k in range(-half, half):
            g = complex(np.asarray(symbol(centers[k])).item())
            res += abs(g * mu[k] - lam * mu[k + 1])
        return {"residual": res / total, "side": side, "truncated": truncated,
                "base": base, "segments": 2 * half + 1}

    def bump(t):
        return np.sin(np.pi * np.clip(t, 0.0, 1.0)) ** 2

    def u(x: np.ndarray) -> np.ndarray:
        out = np.zeros(x.shape, dtype=complex)
        for k in ks:
            a, b = seg[k]
            msk = (x >= a) & (x <= b)
            if not msk.any():
                continue
            y = x[msk]
            t = (np.asarray(phi.iterate(-k, y), dtype=float) - lo_pt) / (hi_pt - lo_pt)
            out[msk] = gam[k] * bump(t)
        return out

    points = [np.linspace(0.0, 1.0, grid_size)]
    for k in ks + [ks[0] - 1, ks[-1] + 1]:
        a = it(lo_pt, k)
        b = it(hi_pt, k)
        a, b = min(a, b), max(a, b)
        points.append(np.linspace(a, b, 17))
    x_eval = np.unique(np.concatenate(points))
    ux = u(x_eval)
    au = symbol(x_eval) * u(np.asarray(phi.value(x_eval), dtype=float))
    norm = float(np.abs(ux).max())
    residual = float(np.abs(au - lam * ux).max()) / norm
    return {"residual": residual, "side": side, "truncated": truncated,
            "base": base, "segments": 2 * half + 1}


def witness_side_for(report, lam: complex) -> str:
    """Pick the witness side from a closed-form report."""
    if report.sigma_2.contains(lam):
        return "kernel"
    if report.sigma_2_adjoint.contains(lam):
        return "adjoint"
    return "kernel"


# ----------------------------------------------------------------------
# dyadic compression of the integration operator
# ----------------------------------------------------------------------


def _uncovered_start(t: float, level: int) -> float:
    """Left endpoint a(t) of the uncovered row segment [a(t), t] after
    removing dyadic squares of generations 0..level from the triangle."""
    lo = 0.0
    for i in range(level + 1):
        cell = 2.0 ** -i
        o = math.floor(t / cell) * cell
        if t - o >= cell / 2.0:
            lo = max(lo, o + cell / 2.0)
    return lo


def volterra_approximation(level: int, grid_size: int) -> dict:
    """Defect data for the rank-(2^(level+1)-1) dyadic compression.

    Returns the exact sup-norm and L1-norm of the defect operator (max row
    and column measure of the uncovered kernel region, computed without
    quadrature) together with the numeric rank of the compressed operator
    on a moderate grid.
    """
    if level < 0:
        raise DomainError("generation level must be >= 0")
    if grid_size < 2 ** (level + 3):
        raise Refusal(f"grid {grid_size} too coarse for generation {level}")
    ts = np.linspace(0.0, 1.0, grid_size)
    row = np.array([t - _uncovered_start(t, level) for t in ts])
    sup_norm = float(row.max())
    # the kernel region is symmetric under (s,t) -> (1-t, 1-s), so the
    # worst column measure equals the worst row measure
    l1_norm = sup_norm

    n_rank = min(grid_size, 512)
    ss = np.linspace(0.0, 1.0, n_rank + 1)
    centers = 0.5 * (ss[:-1] + ss[1:])
    h = ss[1] - ss[0]
    compressed = np.zeros((n_rank, n_rank))
    for i in range(level + 1):
        cell = 2.0 ** -i
        for j in range(2 ** i):
            o = j * cell
            s_mask = (centers >= o) & (centers < o + cell / 2.0)
            t_mask = (centers >= o + cell / 2.0) & (centers < o + cell)
            compressed[np.ix_(t_mask, s_mask)] = h
    rank = int(np.linalg.matrix_rank(compressed, tol=1e-10))
    return {
        "rank": rank,
        "expected_rank": 2 ** (level + 1) - 1,
        "sup_norm_defect": sup_norm,
        "l1_norm_defect": l1_norm,
        "bound": 2.0 ** -(level + 1),
        "row_lengths": row,
        "grid": ts,
    }


def volterra_defect_apply_ones(level: int, grid_size: int) -> np.ndarray:
    """(V - V_level) applied to the constant 1: equals the row measures."""
    ts = np.linspace(0.0, 1.0, grid_size)
    return np.array([t - _uncovered_start(t, level) for t in ts])


# ----------------------------------------------------------------------
# L^p checks
# ----------------------------------------------------------------------


def _lp_norm(vals: np.ndarray, xs: np.ndarray, p: float) -> float:
    return float(np.trapezoid(np.abs(vals) ** p, xs) ** (1.0 / p))


def _test_functions(xs: np.ndarray, seed: int, count: int = 5) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        coef = rng.uniform(-1.0, 1.0, size=4)
        vals = 1.5 + coef[0] * np.sin(np.pi * xs) + coef[1] * np.cos(2 * np.pi * xs) \
            + coef[2] * xs + coef[3] * xs ** 2
        out.append(vals)
    return out


def lp_isometry_check(phi: HomeoModel, p: float, k_max: int,
                      grid_size: int = 8192, seed: int = 2024) -> dict:
    """Norm ratios of the normalized composition under iteration.

    U x = (phi')^(1/p) * (x o phi) preserves every L^p norm by the change
    of variables; the k-th iterate is evaluated in closed cocycle form and
    integrated by the composite trapezoid rule.
    """
    if not (1.0 <= p < math.inf):
        raise DomainError("p must lie in [1, inf)")
    xs = np.linspace(0.0, 1.0, grid_size)
    ratios = []
    for vals in _test_functions(xs, seed):
        base = _lp_norm(vals, xs, p)
        poly = np.polynomial.Polynomial.fit(xs, vals, deg=6)
        for k in range(1, k_max + 1):
            y = np.asarray(phi.iterate(k, xs), dtype=float)
            dk = _derivative_cocycle_vals(phi, k, xs)
            transported = dk ** (1.0 / p) * poly(y)
            ratios.append(_lp_norm(transported, xs, p) / base)
    ratios = np.asarray(ratios)
    return {
        "ratios": ratios,
        "max_deviation": float(np.abs(ratios - 1.0).max()),
        "power_norm_estimate": float(ratios.max() ** (1.0 / k_max)),
    }


def _derivative_cocycle_vals(phi: HomeoModel, k: int, xs: np.ndarray) -> np.ndarray:
    out = np.ones_like(xs)
    y = xs.copy()
    for _ in range(k):
        out *= np.asarray(phi.value(y, 1), dtype=float)
        y = np.asarray(phi.value(y), dtype=float)
    return out


def lp_power_norms(phi: HomeoModel, w: WeightModel, n: int, p: float,
                   k_max: int = 10, grid_size: int = 8192, seed: int = 2024) -> dict:
    """Quadrature estimates of the k-th root of the L^p operator norm of
    the n-th-derivative conjugate x -> w (phi')^n (x o phi).

    Test functions include bumps at both endpoints so the estimate feels
    the dominating fixed-point rate.
    """
    if not (1.0 <= p < math.inf):
        raise DomainError("p must lie in [1, inf)")
    xs = np.linspace(0.0, 1.0, grid_size)
    tests = _test_functions(xs, seed, count=3)
    for loc, width in ((0.0, 0.05), (1.0, 0.05), (0.5, 0.2)):
        tests.append(np.exp(-((xs - loc) / width) ** 2))
    estimates = []
    for k in range(1, k_max + 1):
        y = np.asarray(phi.iterate(k, xs), dtype=float)
        dk = _derivative_cocycle_vals(phi, k, xs)
        wk = np.ones_like(xs, dtype=complex)
        z = xs.copy()
        for _ in range(k):
            wk *= np.asarray(w.value(z), dtype=complex)
            z = np.asarray(phi.value(z), dtype=float)
        best = 0.0
        for vals in tests:
            poly = np.polynomial.Polynomial.fit(xs, vals, deg=6)
            transported = np.abs(wk) * dk ** n * np.abs(poly(y))
            num = _lp_norm(transported, xs, p)
            den = _lp_norm(vals, xs, p)
            best = max(best, num / den)
        estimates.append(best ** (1.0 / k))
    return {"estimates": np.asarray(estimates), "final": float(estimates[-1])}


# ----------------------------------------------------------------------
# second-derivative similarity residual
# ----------------------------------------------------------------------


def similarity_residual_n2(phi: HomeoModel, w: WeightModel,
                           grid_size: int = 1024, seed: int = 7) -> dict:
    """Two assemblies of the second-derivative conjugate of f -> w (f o phi).

    Route 1 applies the operator to the double antiderivative of a test
    polynomial and differentiates twice by central differences.  Route 2
    evaluates the closed pointwise form: the weighted (phi')^2 composition
    plus three integral terms.  Their sup discrepancy certifies the
    similarity; the singular values of the integral terms certify that the
    difference from the pure composition part is a compact perturbation.
    """
    if phi.smoothness < 2 or w.smoothness < 2:
        raise Refusal("second-derivative similarity needs twice-differentiable data")
    if grid_size < 64:
        raise Refusal("grid too coarse for the second-derivative stencil")
    rng = np.random.default_rng(seed)
    xs = np.linspace(0.0, 1.0, grid_size)
    h = xs[1] - xs[0]
    phix = np.asarray(phi.value(xs), dtype=float)
    d1 = np.asarray(phi.value(xs, 1), dtype=float)
    d2 = np.asarray(phi.value(xs, 2), dtype=float)
    wx = np.asarray(w.value(xs), dtype=float)
    w1 = np.asarray(w.value(xs, 1), dtype=float)
    w2 = np.asarray(w.value(xs, 2), dtype=float)

    worst = 0.0
    for _ in range(4):
        coef = rng.uniform(-1.0, 1.0, size=6)

        def x_poly(y):
            return sum(c * y ** k for k, c in enumerate(coef))

        def x_int(y):          # integral of x
            return sum(c * y ** (k + 1) / (k + 1) for k, c in enumerate(coef))

        def x_dblint(y):       # iterated double integral of x
            return sum(c * y ** (k + 2) / ((k + 1) * (k + 2)) for k, c in enumerate(coef))

        g = wx * x_dblint(phix)
        lhs = (g[2:] - 2 * g[1:-1] + g[:-2]) / h ** 2
        rhs = (wx * d1 ** 2 * x_poly(phix)
               + (wx * d2 + 2 * w1 * d1) * x_int(phix)
               + w2 * x_dblint(phix))[1:-1]
        scale = float(np.abs(rhs).max())
        worst = max(worst, float(np.abs(lhs - rhs).max()) / max(scale, 1e-30))

    n_svd = min(grid_size, 512)
    ss = np.linspace(0.0, 1.0, n_svd)
    hq = ss[1] - ss[0]
    phis = np.asarray(phi.value(ss), dtype=float)
    coefs = (np.asarray(w.value(ss), dtype=float) * np.asarray(phi.value(ss, 2), dtype=float)
             + 2 * np.asarray(w.value(ss, 1), dtype=float) * np.asarray(phi.value(ss, 1), dtype=float))
    w2s = np.asarray(w.value(ss, 2), dtype=float)
    kernel = np.zeros((n_svd, n_svd))
    for i in range(n_svd):
        inside = ss <= phis[i]
        kernel[i, inside] += coefs[i] * hq
        kernel[i, inside] += w2s[i] * (phis[i] - ss[inside]) * hq
    singular_values = np.linalg.svd(kernel, compute_uv=False)
    return {
        "composition_part_error": worst,
        "compact_part_singular_values": singular_values,
    }


# ----------------------------------------------------------------------
# advisory eigenvalue cloud
# ----------------------------------------------------------------------


def eigen_cloud(phi: HomeoModel, w: WeightModel, m: float,
                grid_size: int = 256) -> np.ndarray:
    """Eigenvalues of the interpolated grid discretization (advisory only).

    Finite sections of composition operators are spectrally unreliable;
    the cloud is for plots, never for acceptance decisions.
    """
    xs = np.linspace(0.0, 1.0, grid_size)
    g = np.asarray(w.value(xs), dtype=complex) * \
        np.asarray(phi.value(xs, 1), dtype=float) ** m
    y = np.asarray(phi.value(xs), dtype=float)
    idx = np.clip(np.searchsorted(xs, y) - 1, 0, grid_size - 2)
    t = (y - xs[idx]) / (xs[idx + 1] - xs[idx])
    mat = np.zeros((grid_size, grid_size), dtype=complex)
    rows = np.arange(grid_size)
    mat[rows, idx] = g * (1.0 - t)
    mat[rows, idx + 1] = g * t
    return np.linalg.eigvals(mat)
