"""Fixed-point structure of interval homeomorphisms.

The spectral formulas consume exactly this data: the fixed-point set F of
the map, split into isolated points (with their derivative multipliers and
weight values), interior plateau segments (with sampled weight data), and
the complementary intervals of [0,1] \\ F, each directed by whether the map
moves points down (toward the lower endpoint) or up.

Detection is a dense sign-change scan refined by bisection and Newton.
Structure that cannot be resolved at the working tolerance is never
guessed: the analysis is returned with ``interval_structure_resolved``
cleared and downstream consumers refuse to proceed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .funcmodel import FunctionSpec, HomeoModel, WeightModel, build_homeo, build_weight

DEFAULT_TOL = 1e-11
DEFAULT_GRID = 10_001
CURVE_SAMPLES = 512


@dataclass(frozen=True)
class FixedPoint:
    location: float
    phi_prime: float
    w_value: complex
    isolated: bool
    interior: bool = False
    tangential: bool = False


@dataclass(frozen=True)
class InteriorSegment:
    a: float
    b: float
    w_samples: tuple = ()
    w_abs_min: float = 0.0
    w_abs_max: float = 0.0


@dataclass(frozen=True)
class ComplementaryInterval:
    a: float
    b: float
    direction: str           # 'below' (phi(x) < x) or 'above'
    phi_prime_a: float
    phi_prime_b: float
    w_a: complex
    w_b: complex


@dataclass
class FixedPointAnalysis:
    fixed_points: list[FixedPoint] = field(default_factory=list)
    segments: list[InteriorSegment] = field(default_factory=list)
    intervals: list[ComplementaryInterval] = field(default_factory=list)
    has_interior: bool = False
    F_nowhere_dense: bool = True
    interval_structure_resolved: bool = True
    tol: float = DEFAULT_TOL
    notes: list[str] = field(default_factory=list)

    def boundary_points(self) -> list[FixedPoint]:
        """Points of F outside the relative interior (circle contributors)."""
        return [p for p in self.fixed_points if not p.interior]

    def isolated_points(self) -> list[FixedPoint]:
        return [p for p in self.fixed_points if p.isolated]


@dataclass
class PeriodTwoAnalysis:
    central_fixed_point: float
    central_w: complex
    pairs: list[dict] = field(default_factory=list)
    Pi_nowhere_dense: bool = True
    square_analysis: FixedPointAnalysis | None = None
    resolved: bool = True


def _refine_root(phi: HomeoModel, lo: float, hi: float, tol: float) -> float:
    g = lambda x: float(phi.value(x)) - x
    glo = g(lo)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0 or (hi - lo) < tol * 0.01:
            lo = hi = mid
            break
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    if phi.smoothness >= 1:
        for _ in range(4):
            der = float(phi.value(root, 1)) - 1.0
            if der == 0.0:
                break
            step = (float(phi.value(root)) - root) / der
            cand = root - step
            if 0.0 <= cand <= 1.0:
                root = cand
    return min(max(root, 0.0), 1.0)


def _refine_transition(phi: HomeoModel, inside: float, outside: float, tol: float) -> float:
    """Boundary of the plateau {|phi(x)-x| <= tol} between two grid points."""
    f = lambda x: abs(float(phi.value(x)) - x) - tol
    lo, hi = inside, outside
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if f(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return lo


def _minimize_abs_gap(phi: HomeoModel, lo: float, hi: float) -> float:
    """Golden-section minimum of |phi(x) - x| for tangential roots."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    f = lambda x: abs(float(phi.value(x)) - x)
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(70):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _refine_abs_range(w: WeightModel, sub: np.ndarray, mags: np.ndarray):
    """Sharpen the min/max of |w| over a segment around the best samples."""

    def local_extremum(idx: int, sign: float) -> float:
        lo = sub[max(idx - 1, 0)]
        hi = sub[min(idx + 1, len(sub) - 1)]
        invphi = (np.sqrt(5.0) - 1.0) / 2.0
        f = lambda x: sign * abs(complex(np.asarray(w.value(x)).item()))
        a, b = lo, hi
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc, fd = f(c), f(d)
        for _ in range(60):
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = f(c)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = f(d)
        return sign * f(0.5 * (a + b))

    lo = min(float(mags.min()), local_extremum(int(np.argmin(mags)), +1.0))
    hi = max(float(mags.max()), local_extremum(int(np.argmax(mags)), -1.0))
    return lo, hi


def find_fixed_points(phi: HomeoModel, w: WeightModel,
                      tol: float = DEFAULT_TOL,
                      grid: int = DEFAULT_GRID,
                      declared_accumulation: tuple[float, ...] = ()) -> FixedPointAnalysis:
    """Resolve F, its plateau segments and the directed complementary intervals."""
    if phi.orientation != "preserving":
        raise ValueError("fixed-point analysis expects an orientation-preserving map")
    out = FixedPointAnalysis(tol=tol)
    xs = np.linspace(0.0, 1.0, grid)
    step = xs[1] - xs[0]
    g = np.asarray(phi.value(xs), dtype=float) - xs
    flat = np.abs(g) <= tol

    # --- plateau runs and isolated flat hits -------------------------------
    plateaus: list[tuple[float, float]] = []
    tangential_seeds: list[float] = []
    i = 0
    while i < grid:
        if not flat[i]:
            i += 1
            continue
        j = i
        while j + 1 < grid and flat[j + 1]:
            j += 1
        run_width = xs[j] - xs[i]
        if run_width > 2.0 * step:
            a = xs[i] if i == 0 else _refine_transition(phi, xs[i], xs[i - 1], tol)
            b = xs[j] if j == grid - 1 else _refine_transition(phi, xs[j], xs[j + 1], tol)
            plateaus.append((a, b))
        else:
            # short flat run away from the endpoints: isolated root seed
            tangential_seeds.append(0.5 * (xs[i] + xs[j]))
        i = j + 1

    def in_plateau(x: float) -> bool:
        return any(a - step <= x <= b + step for a, b in plateaus)

    # --- sign-change roots --------------------------------------------------
    roots: list[float] = []
    for i in range(grid - 1):
        if flat[i] or flat[i + 1]:
            continue
        if (g[i] > 0) != (g[i + 1] > 0):
            r = _refine_root(phi, xs[i], xs[i + 1], tol)
            if not in_plateau(r):
                roots.append(r)

    for seed in tangential_seeds:
        if in_plateau(seed):
            continue
        lo = max(seed - 2 * step, 0.0)
        hi = min(seed + 2 * step, 1.0)
        r = _minimize_abs_gap(phi, lo, hi)
        if abs(float(phi.value(r)) - r) <= tol:
            roots.append(r)

    # endpoints are fixed by the model invariant
    for endpoint in (0.0, 1.0):
        if not in_plateau(endpoint) and not any(abs(r - endpoint) < 2 * step for r in roots):
            roots.append(endpoint)

    roots = sorted(set(roots))

    # --- deduplicate / detect unresolved clusters ---------------------------
    cleaned: list[float] = []
    for r in roots:
        if cleaned and r - cleaned[-1] < 0.5 * step:
            continue
        cleaned.append(r)
    clustered = [(a, b) for a, b in zip(cleaned, cleaned[1:]) if b - a < 3.0 * step]
    accepted_acc: list[float] = []
    if clustered:
        for acc in declared_accumulation:
            near = [r for r in cleaned if abs(r - acc) < 20.0 * step and abs(r - acc) > 0]
            if near:
                cleaned = [r for r in cleaned if not (0 < abs(r - acc) < 20.0 * step)]
                accepted_acc.append(float(acc))
                out.notes.append(
                    f"fixed points near declared accumulation {acc} truncated to the limit point")
        still = [(a, b) for a, b in zip(cleaned, cleaned[1:]) if b - a < 3.0 * step]
        if still:
            out.interval_structure_resolved = False
            out.notes.append(
                f"unresolved fixed-point clusters at {[round(a, 6) for a, _ in still]}")

    # --- records -------------------------------------------------------------
    def deriv_at(x: float) -> float:
        return float(phi.value(x, 1)) if phi.smoothness >= 1 else float("nan")

    records: list[FixedPoint] = []
    for r in cleaned:
        dp = deriv_at(r)
        tang = abs(dp - 1.0) < 1e-6 and not any(abs(r - a) < 1e-9 for a in (0.0, 1.0))
        records.append(FixedPoint(r, dp, complex(np.asarray(w.value(r)).item()),
                                  isolated=True, tangential=tang))
    for acc in accepted_acc:
        records.append(FixedPoint(acc, 1.0, complex(np.asarray(w.value(acc)).item()),
                                  isolated=False))

    for a, b in plateaus:
        sub = np.linspace(a, b, CURVE_SAMPLES)
        wv = np.asarray(w.value(sub), dtype=complex)
        lo, hi = _refine_abs_range(w, sub, np.abs(wv))
        out.segments.append(InteriorSegment(a, b, tuple(wv.tolist()), lo, hi))
        # plateau endpoints adjacent to non-fixed territory contribute circles
        for endpoint in (a, b):
            inner = 0.0 < endpoint < 1.0
            if inner:
                records.append(FixedPoint(endpoint, 1.0,
                                          complex(np.asarray(w.value(endpoint)).item()),
                                          isolated=False))

    records.sort(key=lambda p: p.location)
    out.fixed_points = records
    out.has_interior = bool(plateaus)
    out.F_nowhere_dense = not plateaus

    # --- complementary intervals ---------------------------------------------
    blocks: list[tuple[float, float]] = sorted(
        [(p.location, p.location) for p in records] + plateaus)
    merged_blocks: list[list[float]] = []
    for a, b in blocks:
        if merged_blocks and a <= merged_blocks[-1][1] + 1e-15:
            merged_blocks[-1][1] = max(merged_blocks[-1][1], b)
        else:
            merged_blocks.append([a, b])
    for (a0, b0), (a1, b1) in zip(merged_blocks, merged_blocks[1:]):
        lo, hi = b0, a1
        if hi - lo <= 2 * tol:
            continue
        probes = np.array([lo + (hi - lo) * t for t in (0.25, 0.5, 0.75)])
        gp = np.asarray(phi.value(probes), dtype=float) - probes
        if np.all(gp < -tol):
            direction = "below"
        elif np.all(gp > tol):
            direction = "above"
        else:
            out.interval_structure_resolved = False
            out.notes.append(f"inconsistent direction signs on ({lo:.6g}, {hi:.6g})")
            continue
        out.intervals.append(ComplementaryInterval(
            lo, hi, direction, deriv_at(lo), deriv_at(hi),
            complex(np.asarray(w.value(lo)).item()),
            complex(np.asarray(w.value(hi)).item())))

    if merged_blocks:
        gap_start = merged_blocks[0][0]
        gap_end = merged_blocks[-1][1]
        if gap_start > 2 * tol or gap_end < 1.0 - 2 * tol:
            out.interval_structure_resolved = False
            out.notes.append("fixed-point structure does not reach the interval endpoints")
    return out


def analyze_period_two(phi: HomeoModel, w: WeightModel,
                       tol: float = DEFAULT_TOL,
                       grid: int = DEFAULT_GRID) -> PeriodTwoAnalysis:
    """Period-2 structure of an orientation-reversing homeomorphism."""
    if phi.orientation != "reversing":
        raise ValueError("period-two analysis expects an orientation-reversing map")
    # the unique fixed point: phi(x) - x is strictly decreasing from 1 to -1
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if float(phi.value(mid)) - mid > 0:
            lo = mid
        else:
            hi = mid
    center = 0.5 * (lo + hi)

    square_spec = FunctionSpec.composite("compose", outer=phi.spec, inner=phi.spec)
    square = build_homeo(square_spec)
    analysis = find_fixed_points(square, w, tol=tol, grid=grid)

    pairs = []
    for p in analysis.isolated_points():
        t = p.location
        if abs(t - center) <= max(10 * tol, 1e-9) or t > center:
            continue
        mate = float(phi.value(t))
        product = complex(np.asarray(w.value(t)).item()) * \
            complex(np.asarray(w.value(mate)).item())
        pairs.append({"t": t, "phi_t": mate, "product": product})
    return PeriodTwoAnalysis(
        central_fixed_point=center,
        central_w=complex(np.asarray(w.value(center)).item()),
        pairs=pairs,
        Pi_nowhere_dense=analysis.F_nowhere_dense,
        square_analysis=analysis,
        resolved=analysis.interval_structure_resolved,
    )
