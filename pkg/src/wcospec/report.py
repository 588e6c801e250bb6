"""Deterministic report documents.

Serialization is byte-stable: object keys keep insertion order (fixed by
construction), floats print at 17 significant digits, and no environment
data leaks into the document.  parse(serialize(report)) reproduces the
report exactly.
"""

from __future__ import annotations

import math

from .spectral_sets import SpectralSet
from .theorem_engine import Eigenvalue, Scenario, SpectrumReport

TOOL_VERSION = "0.1.0"

_SIGMA_KEYS = {
    "1": "sigma_1", "2": "sigma_2", "3": "sigma_3", "4": "sigma_4",
    "5": "sigma_5", "ap": "sigma_ap", "adjoint": "sigma_2_adjoint",
}


def report_document(scn: Scenario, rep: SpectrumReport,
                    verdicts=None, sigma_selection=None) -> dict:
    selected = list(_SIGMA_KEYS) if not sigma_selection else list(sigma_selection)
    body = {"sigma": rep.sigma.to_json()}
    for key in selected:
        if key not in _SIGMA_KEYS:
            raise ValueError(f"unknown sigma selector {key!r}")
        name = _SIGMA_KEYS[key]
        value = rep.sigma_ap() if key == "ap" else getattr(rep, name)
        body[name] = value.to_json()
    body["sigma_A"] = rep.sigma_A.to_json()
    body["eigenvalues"] = [
        {"re": e.value.real, "im": e.value.imag,
         "multiplicity": e.multiplicity, "source": e.source}
        for e in rep.eigenvalues
    ]
    body["essential_radii"] = {"R1": rep.R1, "R2": rep.R2}
    body["provenance"] = rep.provenance
    body["warnings"] = rep.warnings
    doc = {
        "tool": {"name": "wcospec", "version": TOOL_VERSION},
        "scenario": scn.to_json(),
        "report": body,
    }
    if verdicts is not None:
        doc["oracles"] = [v.to_json() for v in verdicts]
    return doc


def report_from_document(doc: dict) -> SpectrumReport:
    body = doc["report"]

    def ss(key: str) -> SpectralSet:
        return SpectralSet.from_json(body[key])

    eigen = [Eigenvalue(complex(e["re"], e["im"]), e["multiplicity"], e["source"])
             for e in body["eigenvalues"]]
    return SpectrumReport(
        sigma=ss("sigma"),
        sigma_1=ss("sigma_1"), sigma_2=ss("sigma_2"), sigma_3=ss("sigma_3"),
        sigma_4=ss("sigma_4"), sigma_5=ss("sigma_5"),
        sigma_2_adjoint=ss("sigma_2_adjoint"), sigma_A=ss("sigma_A"),
        eigenvalues=eigen,
        R1=body["essential_radii"]["R1"], R2=body["essential_radii"]["R2"],
        provenance=body.get("provenance", []),
        warnings=body.get("warnings", []),
    )


def dumps(doc) -> str:
    """JSON with fixed float formatting (17 significant digits)."""
    out: list[str] = []
    _emit(doc, out)
    return "".join(out)


def _emit(node, out: list[str]) -> None:
    if node is None:
        out.append("null")
    elif node is True:
        out.append("true")
    elif node is False:
        out.append("false")
    elif isinstance(node, str):
        out.append(_escape(node))
    elif isinstance(node, int):
        out.append(str(node))
    elif isinstance(node, float):
        out.append(_float_repr(node))
    elif isinstance(node, complex):
        _emit({"re": node.real, "im": node.imag}, out)
    elif isinstance(node, dict):
        out.append("{")
        for i, (key, value) in enumerate(node.items()):
            if i:
                out.append(",")
            out.append(_escape(str(key)))
            out.append(":")
            _emit(value, out)
        out.append("}")
    elif isinstance(node, (list, tuple)):
        out.append("[")
        for i, value in enumerate(node):
            if i:
                out.append(",")
            _emit(value, out)
        out.append("]")
    else:
        try:
            _emit(float(node), out)
        except (TypeError, ValueError):
            raise TypeError(f"cannot serialize {type(node).__name__}") from None


def _float_repr(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite number in report document")
    if x == int(x) and abs(x) < 1e15:
        return f"{int(x)}.0"
    return format(x, ".17g")


def _escape(s: str) -> str:
    body = s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{body}"'
