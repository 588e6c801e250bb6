"""Bundled example scenarios.

Each entry is a ready-to-run scenario document: the fractional-linear
family with several weights and smoothness degrees, a cubic with an inner
fixed point, the flat map (pure multiplication), orientation-reversing
maps, two breakpoint staircase maps whose invariant classes produce two
and four distinct asymptotic rates, and a Sobolev p-sweep.
"""

from __future__ import annotations

MOEBIUS = {"kind": "moebius", "c": 2.0}
UNIT_WEIGHT = {"kind": "constant", "value": 1.0}

TWO_RATE_STAIRS = {
    "kind": "piecewise_linear_family",
    "n_max": 64,
    "families": [
        {"name": "a", "pos": "2**-(n+1)", "neg": "1 - 2**-(n+1)"},
        {"name": "b", "pos": "2**-(n+2) + 4**-(n+2)", "neg": "1 - 2**-(n+1) - 4**-(n+1)"},
    ],
}

# four invariant classes with end rates (1,1), (1,3/2), (2,3/2), (2,2)
# once the weight 2-x is applied; gaps shrink harmonically so the mild
# classes approach slope 1 at both ends
FOUR_RATE_STAIRS = {
    "kind": "piecewise_linear_family",
    "n_max": 1024,
    "families": [
        {"name": "a", "pos": "1/(n+2)", "neg": "1 - 1/(n+2)"},
        {"name": "b",
         "pos": "(1/(n+3) + 2**-(n+3) + 1/(n+2))/2",
         "neg": "1 - 1/(n+2) - 2**-(n+3)"},
        {"name": "c",
         "pos": "1/(n+3) + 2**-(n+3)",
         "neg": "1 - 1/(n+2) - 2**-(n+3) - (1/8)*(2/3)**(n+3)"},
        {"name": "d",
         "pos": "1/(n+3) + 2**-(n+4)",
         "neg": "1 - 1/(n+2) - 2**-(n+3) - (1/4)*(2/3)**(n+3)"},
    ],
}


def _entry(name: str, title: str, scenario: dict) -> dict:
    return {"name": name, "title": title, "scenario": scenario}


CATALOG: list[dict] = [
    _entry(
        "moebius-basic",
        "fractional-linear map, unit weight, first-derivative scale",
        {"space": {"family": "C", "n": 1}, "phi": MOEBIUS, "w": UNIT_WEIGHT},
    ),
    _entry(
        "moebius-affine-weight",
        "fractional-linear map with weight 5-4x: annulus plus two eigenvalues",
        {"space": {"family": "C", "n": 1}, "phi": MOEBIUS,
         "w": {"kind": "expression", "text": "5 - 4*x"}},
    ),
    _entry(
        "moebius-exp-weight",
        "fractional-linear map with weight 3 - x*exp(x)",
        {"space": {"family": "C", "n": 1}, "phi": MOEBIUS,
         "w": {"kind": "expression", "text": "3 - x*exp(x)"}},
    ),
    _entry(
        "moebius-second-derivative",
        "fractional-linear map on the twice-differentiable scale",
        {"space": {"family": "C", "n": 2}, "phi": MOEBIUS,
         "w": {"kind": "expression", "text": "5 - 4*x"}},
    ),
    _entry(
        "cubic-inner-fixed-point",
        "cubic perturbation with fixed points at 0, 1/2 and 1",
        {"space": {"family": "C", "n": 1},
         "phi": {"kind": "expression", "text": "x + 0.5*x*(1 - x)*(x - 0.5)"},
         "w": UNIT_WEIGHT},
    ),
    _entry(
        "flat-map-multiplication",
        "identity map: the operator is multiplication by the weight",
        {"space": {"family": "C", "n": 1},
         "phi": {"kind": "expression", "text": "x"},
         "w": {"kind": "expression", "text": "2 + x"}},
    ),
    _entry(
        "reflection",
        "orientation-reversing involution 1-x with unit weight",
        {"space": {"family": "C", "n": 1},
         "phi": {"kind": "expression", "text": "1 - x"}, "w": UNIT_WEIGHT},
    ),
    _entry(
        "reflection-weighted",
        "involution 1-x with weight 1+x: radius band via the squared operator",
        {"space": {"family": "C", "n": 1},
         "phi": {"kind": "expression", "text": "1 - x"},
         "w": {"kind": "expression", "text": "1 + x"}},
    ),
    _entry(
        "reversing-moebius",
        "orientation-reversing fractional-linear map",
        {"space": {"family": "C", "n": 1},
         "phi": {"kind": "expression", "text": "1 - x/(2 - x)"}, "w": UNIT_WEIGHT},
    ),
    _entry(
        "lip-moebius",
        "fractional-linear map on the Lipschitz scale (smooth delegation)",
        {"space": {"family": "Lip", "n": 1}, "phi": MOEBIUS, "w": UNIT_WEIGHT},
    ),
    _entry(
        "stairs-two-rate",
        "dyadic staircase with unit weight: two invariant classes, four rates",
        {"space": {"family": "Lip", "n": 1}, "phi": TWO_RATE_STAIRS, "w": UNIT_WEIGHT},
    ),
    _entry(
        "stairs-four-rate",
        "harmonic staircase with weight 2-x: one ascending and one descending band",
        {"space": {"family": "Lip", "n": 1}, "phi": FOUR_RATE_STAIRS,
         "w": {"kind": "expression", "text": "2 - x"}},
    ),
    _entry(
        "sobolev-p1",
        "fractional-linear map on the integrable-derivative Sobolev space",
        {"space": {"family": "W", "n": 1, "p": 1}, "phi": MOEBIUS, "w": UNIT_WEIGHT},
    ),
    _entry(
        "sobolev-p2",
        "fractional-linear map on the square-integrable-derivative Sobolev space",
        {"space": {"family": "W", "n": 1, "p": 2}, "phi": MOEBIUS, "w": UNIT_WEIGHT},
    ),
    _entry(
        "sobolev-p4",
        "fractional-linear map on the p=4 Sobolev space",
        {"space": {"family": "W", "n": 1, "p": 4}, "phi": MOEBIUS, "w": UNIT_WEIGHT},
    ),
    _entry(
        "sobolev-pinf",
        "p=inf Sobolev space delegates to the Lipschitz scale",
        {"space": {"family": "W", "n": 1, "p": "inf"}, "phi": MOEBIUS, "w": UNIT_WEIGHT},
    ),
]


def get(name: str) -> dict:
    for entry in CATALOG:
        if entry["name"] == name:
            return entry
    raise KeyError(f"no bundled scenario named {name!r}")
