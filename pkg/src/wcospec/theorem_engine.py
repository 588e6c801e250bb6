"""Closed-form spectrum assembly for invertible weighted composition operators.

Given a scenario (a function space, a homeomorphism of [0,1] and an
invertible weight), this module produces the full spectrum, the five nested
essential spectra, the second essential spectrum of the adjoint, and the
isolated eigenvalues, as explicit unions of annuli, circles and points.

The assembly rests on one mechanism: at every fixed point a of the map the
local growth rate is |w(a)| phi'(a)^m, with an exponent m determined by the
function space (m = n on the n-times-differentiable and n-Lipschitz scales,
m = n - 1/p on the L^p Sobolev scale).  Fixed-point circles, the bands
spanned over complementary intervals (directed by where orbits drift), and
the curve of weight values over interior fixed segments combine into the
essential sets; weight values at isolated fixed points that escape the
essential annulus radially become isolated eigenvalues.

Orientation-reversing maps are treated through the square of the operator:
the square's report is pulled back under lambda -> lambda^2 and eigenvalue
candidates come from period-2 products.  Piecewise-linear breakpoint maps
use invariant-class asymptotics instead of pointwise multipliers; each
radial band between consecutive class rates is classified by which classes
ascend or descend across it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import (FixedPointAnalysis, analyze_period_two, find_fixed_points)
from .errors import Refusal, SchemaError
from .funcmodel import (FunctionSpec, HomeoModel, WeightModel, build_homeo,
                        build_weight)
from .spectral_sets import SpectralPoint, SpectralSet

RADIAL_SLACK = 1e-9


# ----------------------------------------------------------------------
# scenario
# ----------------------------------------------------------------------


@dataclass
class Scenario:
    family: str                    # 'C', 'Lip' or 'W'
    n: int
    phi: FunctionSpec
    w: FunctionSpec
    p: float | None = None         # only for W; math.inf allowed
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in ("C", "Lip", "W"):
            raise SchemaError(f"space.family must be 'C', 'Lip' or 'W', got {self.family!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise SchemaError("space.n must be a positive integer")
        if self.family == "W":
            if self.p is None:
                raise SchemaError("space.p is required for the W family")
            if not (1.0 <= self.p):
                raise SchemaError(f"space.p must lie in [1, inf], got {self.p}")
        else:
            self.p = None

    @staticmethod
    def from_json(doc: dict) -> "Scenario":
        if not isinstance(doc, dict):
            raise SchemaError("scenario must be a JSON object")
        space = doc.get("space")
        if not isinstance(space, dict):
            raise SchemaError("missing or malformed 'space' object")
        family = space.get("family")
        n = space.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise SchemaError("space.n must be a positive integer")
        p = space.get("p")
        if p is not None:
            if p == "inf":
                p = math.inf
            elif isinstance(p, (int, float)) and not isinstance(p, bool):
                p = float(p)
                if not math.isfinite(p) or p < 1.0:
                    raise SchemaError(f"space.p must be a number in [1, inf], got {space.get('p')!r}")
            else:
                raise SchemaError(f"space.p must be a number or 'inf', got {p!r}")
        if "phi" not in doc or "w" not in doc:
            raise SchemaError("scenario needs 'phi' and 'w' function specs")
        return Scenario(
            family=family,
            n=n,
            phi=FunctionSpec.from_json(doc["phi"]),
            w=FunctionSpec.from_json(doc["w"]),
            p=p,
            options=doc.get("options", {}) or {},
        )

    def to_json(self) -> dict:
        doc = {
            "space": {"family": self.family, "n": self.n},
            "phi": self.phi.to_json(),
            "w": self.w.to_json(),
        }
        if self.family == "W":
            doc["space"]["p"] = "inf" if math.isinf(self.p) else self.p
        if self.options:
            doc["options"] = self.options
        return doc


@dataclass(frozen=True)
class Eigenvalue:
    value: complex
    multiplicity: int
    source: str


@dataclass
class SpectrumReport:
    sigma: SpectralSet
    sigma_1: SpectralSet
    sigma_2: SpectralSet
    sigma_3: SpectralSet
    sigma_4: SpectralSet
    sigma_5: SpectralSet
    sigma_2_adjoint: SpectralSet
    sigma_A: SpectralSet
    eigenvalues: list[Eigenvalue]
    R1: float
    R2: float
    provenance: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def sigma_i(self, i: int) -> SpectralSet:
        return (self.sigma_1, self.sigma_2, self.sigma_3, self.sigma_4, self.sigma_5)[i - 1]

    def sigma_ap(self) -> SpectralSet:
        """Approximate-point spectrum: sigma_2 plus the isolated eigenvalues."""
        return self.sigma_2.union(SpectralSet.build(
            points=[SpectralPoint(e.value, e.multiplicity, "isolated-eigenvalue")
                    for e in self.eigenvalues]))

    def check_invariants(self) -> list[str]:
        """Return violated structural identities (empty when healthy)."""
        bad = []
        chain = [self.sigma_1, self.sigma_2, self.sigma_3, self.sigma_4, self.sigma_5]
        for i in range(4):
            if not chain[i].is_subset(chain[i + 1]):
                bad.append(f"sigma_{i + 1} not contained in sigma_{i + 2}")
        if not self.sigma_1.same_as(self.sigma_2.intersect(self.sigma_2_adjoint)):
            bad.append("sigma_1 != sigma_2 intersect sigma_2(adjoint)")
        if not self.sigma_3.same_as(self.sigma_2.union(self.sigma_2_adjoint)):
            bad.append("sigma_3 != sigma_2 union sigma_2(adjoint)")
        for e in self.eigenvalues:
            if self.sigma_A.contains(e.value):
                bad.append(f"eigenvalue {e.value} lies in sigma_A")
        return bad


# ----------------------------------------------------------------------
# shared smooth-map assembly
# ----------------------------------------------------------------------


def _multiplier(point, m_exp: float) -> float:
    base = 1.0 if not point.isolated else point.phi_prime
    return abs(point.w_value) * base ** m_exp


def _assemble_preserving(analysis: FixedPointAnalysis, m_exp: float,
                         eigen_exp: float, mult_per_point: int,
                         source: str) -> SpectrumReport:
    if not analysis.interval_structure_resolved:
        raise Refusal("fixed-point structure unresolved: " + "; ".join(analysis.notes))

    prov: list[dict] = [{"component": "multiplier", "rule": "fixed-point-rate",
                         "exponent": m_exp}]
    circle_radii: list[float] = []
    for pt in analysis.boundary_points():
        r = _multiplier(pt, m_exp)
        circle_radii.append(r)
        prov.append({"component": "sigma_2", "rule": "fixed-point-circle",
                     "location": pt.location, "radius": r})

    curve_pts = []
    for seg in analysis.segments:
        curve_pts.extend(SpectralPoint(v, 1, "interior-curve") for v in seg.w_samples)
        prov.append({"component": "sigma_2", "rule": "interior-curve",
                     "segment": [seg.a, seg.b]})

    bands_kernel: list[tuple[float, float]] = []   # infinite-kernel side -> sigma_2
    bands_defect: list[tuple[float, float]] = []   # infinite-defect side -> sigma_2(adjoint)
    for iv in analysis.intervals:
        v_a = abs(iv.w_a) * iv.phi_prime_a ** m_exp
        v_b = abs(iv.w_b) * iv.phi_prime_b ** m_exp
        if iv.direction == "below":
            attract, repel = v_a, v_b
        else:
            attract, repel = v_b, v_a
        if repel < attract:
            bands_kernel.append((repel, attract))
            prov.append({"component": "sigma_2", "rule": "descending-interval-band",
                         "interval": [iv.a, iv.b], "radii": [repel, attract]})
        elif attract < repel:
            bands_defect.append((attract, repel))
            prov.append({"component": "sigma_2_adjoint", "rule": "ascending-interval-band",
                         "interval": [iv.a, iv.b], "radii": [attract, repel]})

    circles = [(r, r) for r in circle_radii]
    sigma2 = SpectralSet.build(circles + bands_kernel, curve_pts)
    sigma2_adj = SpectralSet.build(circles + bands_defect, curve_pts)
    sigma1 = sigma2.intersect(sigma2_adj)
    sigma3 = sigma2.union(sigma2_adj)
    sigma_A = sigma3

    radial = circle_radii + [s.w_abs_min for s in analysis.segments] + \
        [s.w_abs_max for s in analysis.segments]
    R1, R2 = max(radial), min(radial)

    eigen = _eigenvalues_from_isolated(analysis, eigen_exp, mult_per_point, R1, R2, source)
    sigma = sigma_A.union(SpectralSet.build(
        points=[SpectralPoint(e.value, e.multiplicity, "isolated-eigenvalue")
                for e in eigen]))

    warnings = []
    if analysis.has_interior:
        warnings.append("fixed-point set has interior; spectra are not rotation invariant")
    warnings.extend(analysis.notes)
    return SpectrumReport(sigma, sigma1, sigma2, sigma3, sigma3, sigma3,
                          sigma2_adj, sigma_A, eigen, R1, R2, prov, warnings)


def _eigenvalues_from_isolated(analysis: FixedPointAnalysis, eigen_exp: float,
                               mult_per_point: int, R1: float, R2: float,
                               source: str) -> list[Eigenvalue]:
    candidates: list[complex] = []
    for pt in analysis.isolated_points():
        lam = pt.w_value * pt.phi_prime ** eigen_exp
        r = abs(lam)
        if r > R1 * (1 + RADIAL_SLACK) or r < R2 * (1 - RADIAL_SLACK):
            candidates.append(lam)
    groups: list[list[complex]] = []
    for lam in sorted(candidates, key=lambda z: (abs(z), z.real, z.imag)):
        for grp in groups:
            if abs(grp[0] - lam) <= 1e-9 * max(1.0, abs(lam)):
                grp.append(lam)
                break
        else:
            groups.append([lam])
    return [Eigenvalue(grp[0], len(grp) * mult_per_point, source) for grp in groups]


# ----------------------------------------------------------------------
# family engines
# ----------------------------------------------------------------------


def _analysis_for(phi: HomeoModel, w: WeightModel, options: dict) -> FixedPointAnalysis:
    return find_fixed_points(
        phi, w,
        tol=float(options.get("tol", 1e-11)),
        grid=int(options.get("scan_grid", 10_001)),
        declared_accumulation=tuple(options.get("declared_accumulation", ())),
    )


def spectra_smooth_preserving(phi: HomeoModel, w: WeightModel, n: int,
                              m_exp: float, eigen_exp: float,
                              mult_per_point: int, source: str,
                              options: dict,
                              require_nowhere_dense: bool) -> SpectrumReport:
    if phi.smoothness < 1:
        raise Refusal("map derivative unavailable; smooth engine needs a differentiable model")
    analysis = _analysis_for(phi, w, options)
    if require_nowhere_dense and analysis.has_interior:
        raise Refusal("fixed-point set is not nowhere dense; "
                      "this space family needs a nowhere-dense fixed-point set")
    return _assemble_preserving(analysis, m_exp, eigen_exp, mult_per_point, source)


def spectra_C(scn: Scenario, phi: HomeoModel, w: WeightModel) -> SpectrumReport:
    n = scn.n
    mult = 1 if n == 1 else n
    return spectra_smooth_preserving(
        phi, w, n, m_exp=float(n), eigen_exp=0.0, mult_per_point=mult,
        source=f"isolated fixed point, C^{n} scale",
        options=scn.options, require_nowhere_dense=(n >= 2))


def spectra_Lip(scn: Scenario, phi: HomeoModel, w: WeightModel) -> SpectrumReport:
    n = scn.n
    if phi.breakpoints is not None or scn.options.get("declared_classes"):
        return _spectra_lip_piecewise(scn, phi, w)
    mult = 1 if n == 1 else n
    return spectra_smooth_preserving(
        phi, w, n, m_exp=float(n), eigen_exp=0.0, mult_per_point=mult,
        source=f"isolated fixed point, Lip^{n} scale",
        options=scn.options, require_nowhere_dense=False)


def _spectra_lip_piecewise(scn: Scenario, phi: HomeoModel, w: WeightModel) -> SpectrumReport:
    n = scn.n
    mid = float(phi.value(0.5))
    if mid >= 0.5:
        raise Refusal("piecewise engine handles maps moving points toward 0 "
                      "(phi(x) < x on (0,1)); invert the scenario first")
    declared = scn.options.get("declared_classes")
    if declared:
        class_slopes = [(float(c["slope_at_0"]), float(c["slope_at_1"])) for c in declared]
        labels = [f"declared-{i}" for i in range(len(class_slopes))]
    else:
        classes = phi.breakpoints.classes()
        class_slopes = [(c.slope_at_0, c.slope_at_1) for c in classes]
        labels = [f"{c.lower}-{c.upper}" for c in classes]

    w0 = abs(complex(np.asarray(w.value(0.0)).item()))
    w1 = abs(complex(np.asarray(w.value(1.0)).item()))
    rates = [(w0 * s0 ** n, w1 * s1 ** n) for s0, s1 in class_slopes]

    prov: list[dict] = [{"component": "classes", "rule": "invariant-class-rates",
                         "classes": [{"label": lbl, "rate_at_0": a, "rate_at_1": b}
                                     for lbl, (a, b) in zip(labels, rates)]}]

    values = sorted({r for pair in rates for r in pair})
    merged: list[float] = []
    for v in values:
        if merged and abs(v - merged[-1]) <= 1e-12 * max(1.0, v):
            continue
        merged.append(v)
    circles = [(v, v) for v in merged]

    bands_kernel, bands_defect, bands_sing, warnings = [], [], [], []
    for lo, hi in zip(merged, merged[1:]):
        lam = math.sqrt(lo * hi)
        ascending = descending = straddle = False
        for a, b in rates:
            if min(a, b) > lam:
                continue                      # class entirely above the band
            if max(a, b) < lam:
                continue                      # entirely below
            straddle = True
            if a < lam < b:
                ascending = True
            elif b < lam < a:
                descending = True
        if not straddle:
            warnings.append(f"radial gap ({lo:.6g}, {hi:.6g}) inside the rate range; "
                            "essential spectrum not connected")
            continue
        if ascending and descending:
            bands_sing.append((lo, hi))
            prov.append({"component": "sigma_1", "rule": "two-sided band",
                         "radii": [lo, hi]})
        elif descending:
            bands_kernel.append((lo, hi))
            prov.append({"component": "sigma_2", "rule": "descending-class-band",
                         "radii": [lo, hi]})
        elif ascending:
            bands_defect.append((lo, hi))
            prov.append({"component": "sigma_2_adjoint", "rule": "ascending-class-band",
                         "radii": [lo, hi]})

    sigma2 = SpectralSet.build(circles + bands_sing + bands_kernel)
    sigma2_adj = SpectralSet.build(circles + bands_sing + bands_defect)
    sigma1 = sigma2.intersect(sigma2_adj)
    sigma3 = sigma2.union(sigma2_adj)
    R1, R2 = merged[-1], merged[0]

    mult = 1 if n == 1 else n
    eigen: list[Eigenvalue] = []
    for loc, wv in ((0.0, w0), (1.0, w1)):
        lam = complex(np.asarray(w.value(loc)).item())
        r = abs(lam)
        if r > R1 * (1 + RADIAL_SLACK) or r < R2 * (1 - RADIAL_SLACK):
            eigen.append(Eigenvalue(lam, mult, "isolated endpoint fixed point, Lip scale"))
    sigma = sigma3.union(SpectralSet.build(
        points=[SpectralPoint(e.value, e.multiplicity, "isolated-eigenvalue")
                for e in eigen]))
    return SpectrumReport(sigma, sigma1, sigma2, sigma3, sigma3, sigma3,
                          sigma2_adj, sigma3, eigen, R1, R2, prov, warnings)


def spectra_W(scn: Scenario, phi: HomeoModel, w: WeightModel) -> SpectrumReport:
    p, n = scn.p, scn.n
    if math.isinf(p):
        return spectra_Lip(scn, phi, w)
    mode = scn.options.get("sobolev_mode", "similarity")
    if mode in ("similarity", "lemma_l9"):
        m_exp = n - 1.0 / p
        eigen_exp = n - n / p
        rep = spectra_smooth_preserving(
            phi, w, n, m_exp=m_exp, eigen_exp=eigen_exp, mult_per_point=n,
            source=f"isolated fixed point, W^({n},{p}) scale",
            options=scn.options, require_nowhere_dense=True)
        rep.provenance.append({"component": "mode", "rule": "similarity-multiplier",
                               "m_exp": m_exp, "eigen_exp": eigen_exp})
        return rep
    if mode in ("t4_1_transform", "transform"):
        beta = n - n / p
        w_t = build_weight(FunctionSpec.composite(
            "times_deriv_pow", base=scn.w, map=scn.phi, exponent=beta))
        rep = spectra_smooth_preserving(
            phi, w_t, n, m_exp=float(n), eigen_exp=0.0, mult_per_point=n,
            source=f"isolated fixed point, W^({n},{p}) scale (transform mode)",
            options=scn.options, require_nowhere_dense=True)
        rep.provenance.append({"component": "mode", "rule": "weight-transform",
                               "beta": beta, "effective_exponent": n + beta})
        rep.warnings.append("transform mode composes the derivative factor twice; "
                            "the similarity mode is the calibrated default")
        return rep
    raise SchemaError(f"unknown sobolev_mode {mode!r}")


def spectra_reversing(scn: Scenario, phi: HomeoModel, w: WeightModel) -> SpectrumReport:
    if scn.family == "W" and not math.isinf(scn.p):
        raise Refusal("orientation-reversing maps are supported on the C and Lip scales only")
    square_scn = Scenario(
        family="Lip" if scn.family == "W" else scn.family,
        n=scn.n,
        phi=FunctionSpec.composite("compose", outer=scn.phi, inner=scn.phi),
        w=FunctionSpec.composite("product", factors=[
            scn.w, FunctionSpec.composite("compose", outer=scn.w, inner=scn.phi)]),
        options=scn.options,
    )
    rep2 = compute_spectra(square_scn)

    period = analyze_period_two(phi, w,
                                tol=float(scn.options.get("tol", 1e-11)),
                                grid=int(scn.options.get("scan_grid", 10_001)))
    if not period.resolved:
        raise Refusal("period-two structure unresolved")

    def back(s: SpectralSet) -> SpectralSet:
        return s.sqrt_preimage()

    R1, R2 = math.sqrt(rep2.R1), math.sqrt(rep2.R2)
    mult = 1 if scn.n == 1 else scn.n
    candidates: list[complex] = [period.central_w]
    for pair in period.pairs:
        root = _sqrt_complex(pair["product"])
        candidates.extend((root, -root))
    eigen: list[Eigenvalue] = []
    for lam in candidates:
        r = abs(lam)
        if r > R1 * (1 + RADIAL_SLACK) or r < R2 * (1 - RADIAL_SLACK):
            eigen.append(Eigenvalue(lam, mult, "isolated periodic point, square-root data"))

    sigma_A = back(rep2.sigma_A)
    sigma = sigma_A.union(SpectralSet.build(
        points=[SpectralPoint(e.value, e.multiplicity, "isolated-eigenvalue")
                for e in eigen]))
    warnings = list(rep2.warnings)
    if not period.Pi_nowhere_dense:
        warnings.append("period-2 point set is not nowhere dense; "
                        "rotation invariance is not asserted")
    prov = rep2.provenance + [{"component": "all", "rule": "square-root-preimage"}]
    return SpectrumReport(
        sigma, back(rep2.sigma_1), back(rep2.sigma_2), back(rep2.sigma_3),
        back(rep2.sigma_4), back(rep2.sigma_5), back(rep2.sigma_2_adjoint),
        sigma_A, eigen, R1, R2, prov, warnings)


def _sqrt_complex(z: complex) -> complex:
    r = math.sqrt(abs(z))
    theta = math.atan2(z.imag, z.real) / 2.0
    return complex(r * math.cos(theta), r * math.sin(theta))


# ----------------------------------------------------------------------
# dispatch
# ----------------------------------------------------------------------


def compute_spectra(scn: Scenario) -> SpectrumReport:
    """Build models, dispatch on orientation and family, return the report."""
    phi = build_homeo(scn.phi)
    w = build_weight(scn.w)
    if phi.orientation == "reversing":
        return spectra_reversing(scn, phi, w)
    if scn.family == "C":
        return spectra_C(scn, phi, w)
    if scn.family == "Lip":
        return spectra_Lip(scn, phi, w)
    return spectra_W(scn, phi, w)
