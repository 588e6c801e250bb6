"""Oracle orchestration: cross-check a closed-form report numerically.

For every scenario the cocycle-growth extremes are compared against the
reported essential radii.  Scenario-dependent extras: eigenfunction
products for endpoint eigenvalues, almost-eigenvector witnesses inside and
outside the essential set, quadrature power norms and the change-of-
variables isometry on the Sobolev scale.
"""

from __future__ import annotations

import math

import numpy as np

from . import numerics
from .errors import Refusal
from .funcmodel import build_homeo, build_weight
from .theorem_engine import Scenario, SpectrumReport

RADII_TOLERANCE = 0.05


def multiplier_exponent(report: SpectrumReport, scn: Scenario) -> float:
    for entry in report.provenance:
        if entry.get("rule") == "fixed-point-rate":
            return float(entry["exponent"])
        if entry.get("rule") == "weight-transform":
            return float(entry["effective_exponent"])
    return float(scn.n)


def verify_report(scn: Scenario, report: SpectrumReport,
                  grid_size: int = numerics.DEFAULT_GRID,
                  depth: int = numerics.DEFAULT_DEPTH) -> list[numerics.OracleVerdict]:
    phi = build_homeo(scn.phi)
    w = build_weight(scn.w)
    verdicts: list[numerics.OracleVerdict] = []

    m = multiplier_exponent(report, scn)
    if scn.family == "W" and math.isinf(scn.p):
        m = float(scn.n)
    growth = numerics.cocycle_growth(phi, w, m, depth, grid_size)
    verdicts.append(numerics.OracleVerdict.make(
        "outer-essential-radius", report.R1, growth["max_rate"],
        RADII_TOLERANCE, growth["history"]))
    verdicts.append(numerics.OracleVerdict.make(
        "inner-essential-radius", report.R2, growth["min_rate"],
        RADII_TOLERANCE, growth["history"]))

    if phi.orientation == "preserving":
        verdicts.extend(_eigen_verdicts(phi, w, report))
        verdicts.extend(_witness_verdicts(phi, w, report, m))

    if scn.family == "W" and not math.isinf(scn.p):
        iso = numerics.lp_isometry_check(phi, scn.p, k_max=6, grid_size=4096)
        verdicts.append(numerics.OracleVerdict.make(
            "composition-isometry-deviation", 0.0, iso["max_deviation"], math.inf))
        verdicts[-1].converged = iso["max_deviation"] < 1e-5
        power = numerics.lp_power_norms(phi, w, scn.n, scn.p, k_max=10, grid_size=4096)
        verdicts.append(numerics.OracleVerdict.make(
            "power-norm-radius", report.R1, power["final"], RADII_TOLERANCE,
            list(power["estimates"])))
    return verdicts


def _eigen_verdicts(phi, w, report) -> list:
    out = []
    for end in (0, 1):
        lam = complex(np.asarray(w.value(float(end))).item())
        matches = [e for e in report.eigenvalues
                   if abs(e.value - lam) <= 1e-9 * max(1.0, abs(lam))]
        if not matches:
            continue
        try:
            res = numerics.eigenfunction_product(
                phi, w, end, factors=60, grid_size=2048,
                radial_bounds=(report.R2, report.R1))
        except Refusal:
            continue
        v = numerics.OracleVerdict.make(
            f"eigenfunction-residual-end-{end}", 0.0, res["residual"], math.inf)
        v.converged = res["converged"] and res["residual"] < 1e-6
        out.append(v)
    return out


def _witness_verdicts(phi, w, report, m) -> list:
    out = []
    if report.R1 <= report.R2 * (1 + 1e-9):
        inside = report.R1
    else:
        inside = math.sqrt(report.R1 * report.R2)
    if report.sigma_A.contains_radius(inside):
        side = numerics.witness_side_for(report, complex(inside))
        small = numerics.approx_point_witness(phi, w, m, complex(inside), 12,
                                              grid_size=2048, side=side)
        large = numerics.approx_point_witness(phi, w, m, complex(inside), 24,
                                              grid_size=2048, side=side)
        v = numerics.OracleVerdict.make(
            "witness-inside-residual", 0.0, large["residual"], math.inf,
            [small["residual"], large["residual"]])
        v.converged = large["residual"] < 0.25 and \
            large["residual"] <= small["residual"] + 1e-9
        out.append(v)
    lam_out = 2.0 * report.R1 + 0.5
    far = numerics.approx_point_witness(phi, w, m, complex(lam_out), 16,
                                        grid_size=2048, side="kernel")
    dist = lam_out - report.R1
    v = numerics.OracleVerdict.make(
        "witness-outside-floor", dist, far["residual"], math.inf)
    v.converged = far["residual"] >= dist / 2.0
    out.append(v)
    return out
