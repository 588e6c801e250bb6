"""Exact algebra of radially structured spectral sets in the complex plane.

Every set handled here is a finite union of closed annuli centered at the
origin (a circle is an annulus with equal radii, the origin is the annulus
[0, 0]) together with finitely many isolated complex points.  This is the
closure class needed by the theorem engine: unions, intersections, scaling,
inversion and membership all stay inside it.

All comparisons carry a small numeric slack so that radii produced by
floating-point evaluation of exact expressions compare as intended.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

SLACK = 1e-12


class RegionError(ValueError):
    """Raised for malformed set data (negative radii, inverting through 0)."""


def _close(a: float, b: float, slack: float = SLACK) -> bool:
    return abs(a - b) <= slack * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class SpectralPoint:
    """An isolated complex point with a multiplicity tag and provenance label."""

    value: complex
    multiplicity: int = 1
    provenance: str = ""

    def scaled(self, c: complex) -> "SpectralPoint":
        return replace(self, value=self.value * c)

    def inverted(self) -> "SpectralPoint":
        return replace(self, value=1.0 / self.value)


@dataclass(frozen=True)
class SpectralSet:
    """Normalized union of closed annuli and isolated points.

    Normal form: annuli sorted by inner radius, pairwise disjoint and
    non-adjacent (touching annuli are merged); no point lies radially inside
    an annulus; no duplicate points.
    """

    annuli: tuple[tuple[float, float], ...] = ()
    points: tuple[SpectralPoint, ...] = ()

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------

    @staticmethod
    def build(annuli=(), points=()) -> "SpectralSet":
        """Build and normalize from raw annulus pairs and points.

        Points may be given as complex numbers or SpectralPoint records.
        """
        ann = []
        for r_in, r_out in annuli:
            r_in, r_out = float(r_in), float(r_out)
            if r_in < -SLACK or r_out < r_in - SLACK:
                raise RegionError(f"invalid annulus radii [{r_in}, {r_out}]")
            ann.append((max(r_in, 0.0), max(r_out, r_in, 0.0)))
        pts = []
        for p in points:
            if not isinstance(p, SpectralPoint):
                p = SpectralPoint(complex(p))
            pts.append(p)
        return SpectralSet._normalized(ann, pts)

    @staticmethod
    def empty() -> "SpectralSet":
        return SpectralSet()

    @staticmethod
    def annulus(r_in: float, r_out: float) -> "SpectralSet":
        return SpectralSet.build(annuli=[(r_in, r_out)])

    @staticmethod
    def circle(r: float) -> "SpectralSet":
        return SpectralSet.build(annuli=[(r, r)])

    @staticmethod
    def circles(*radii: float) -> "SpectralSet":
        return SpectralSet.build(annuli=[(r, r) for r in radii])

    @staticmethod
    def _normalized(ann, pts) -> "SpectralSet":
        merged: list[list[float]] = []
        for r_in, r_out in sorted(ann):
            if merged and r_in <= merged[-1][1] + SLACK * max(1.0, merged[-1][1]):
                merged[-1][1] = max(merged[-1][1], r_out)
            else:
                merged.append([r_in, r_out])
        out_ann = tuple((a, b) for a, b in merged)

        def absorbed(p: SpectralPoint) -> bool:
            r = abs(p.value)
            return any(a - SLACK * max(1.0, a) <= r <= b + SLACK * max(1.0, b)
                       for a, b in out_ann)

        kept: list[SpectralPoint] = []
        for p in sorted(pts, key=lambda q: (abs(q.value), q.value.real, q.value.imag)):
            if absorbed(p):
                continue
            dup = next((k for k in kept if _close_complex(k.value, p.value)), None)
            if dup is None:
                kept.append(p)
            elif p.multiplicity > dup.multiplicity:
                kept[kept.index(dup)] = p
        return SpectralSet(out_ann, tuple(kept))

    def normalize(self) -> "SpectralSet":
        """Idempotent; sets are already stored in normal form."""
        return SpectralSet._normalized(list(self.annuli), list(self.points))

    # ------------------------------------------------------------------
    # queries
    # ------------------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.annuli and not self.points

    def contains(self, lam: complex, slack: float = SLACK) -> bool:
        r = abs(lam)
        for a, b in self.annuli:
            if a - slack * max(1.0, a) <= r <= b + slack * max(1.0, b):
                return True
        return any(_close_complex(p.value, lam, slack) for p in self.points)

    def contains_radius(self, r: float, slack: float = SLACK) -> bool:
        """True iff the whole circle of radius r lies in the set."""
        return any(a - slack * max(1.0, a) <= r <= b + slack * max(1.0, b)
                   for a, b in self.annuli)

    def is_rotation_invariant(self) -> bool:
        return not self.points

    def is_subset(self, other: "SpectralSet", slack: float = SLACK) -> bool:
        for a, b in self.annuli:
            if not any(c - slack * max(1.0, c) <= a and b <= d + slack * max(1.0, d)
                       for c, d in other.annuli):
                return False
        return all(other.contains(p.value, slack) for p in self.points)

    def radial_extent(self) -> tuple[float, float]:
        """(min, max) modulus over the set; raises on the empty set."""
        if self.is_empty():
            raise RegionError("radial extent of empty set")
        lows = [a for a, _ in self.annuli] + [abs(p.value) for p in self.points]
        highs = [b for _, b in self.annuli] + [abs(p.value) for p in self.points]
        return min(lows), max(highs)

    # ------------------------------------------------------------------
    # algebra
    # ------------------------------------------------------------------

    def union(self, other: "SpectralSet") -> "SpectralSet":
        return SpectralSet._normalized(
            list(self.annuli) + list(other.annuli),
            list(self.points) + list(other.points),
        )

    def intersect(self, other: "SpectralSet") -> "SpectralSet":
        ann = []
        for a, b in self.annuli:
            for c, d in other.annuli:
                lo, hi = max(a, c), min(b, d)
                if lo <= hi + SLACK * max(1.0, hi):
                    ann.append((lo, min(hi, max(lo, hi))))
        pts = [p for p in self.points if other.contains(p.value)]
        pts += [p for p in other.points if self.contains(p.value)]
        return SpectralSet._normalized(ann, pts)

    def scale(self, c: complex) -> "SpectralSet":
        if c == 0:
            raise RegionError("scaling a spectral set by 0")
        m = abs(c)
        return SpectralSet._normalized(
            [(a * m, b * m) for a, b in self.annuli],
            [p.scaled(c) for p in self.points],
        )

    def invert(self) -> "SpectralSet":
        if self.contains(0.0):
            raise RegionError("inverting a spectral set containing 0")
        return SpectralSet._normalized(
            [(1.0 / b, 1.0 / a) for a, b in self.annuli],
            [p.inverted() for p in self.points],
        )

    def sqrt_preimage(self) -> "SpectralSet":
        """Preimage under the squaring map lambda -> lambda^2.

        Annuli pull back radially; each point pulls back to both square
        roots.  Used to turn data for the square of an operator into data
        for the operator itself.
        """
        ann = [(math.sqrt(a), math.sqrt(b)) for a, b in self.annuli]
        pts = []
        for p in self.points:
            root = _principal_sqrt(p.value)
            pts.append(replace(p, value=root))
            pts.append(replace(p, value=-root))
        return SpectralSet._normalized(ann, pts)

    # ------------------------------------------------------------------
    # comparison / serialization
    # ------------------------------------------------------------------

    def same_as(self, other: "SpectralSet", slack: float = SLACK) -> bool:
        if len(self.annuli) != len(other.annuli) or len(self.points) != len(other.points):
            return False
        for (a, b), (c, d) in zip(self.annuli, other.annuli):
            if not (_close(a, c, slack) and _close(b, d, slack)):
                return False
        return all(_close_complex(p.value, q.value, slack)
                   for p, q in zip(self.points, other.points))

    def __eq__(self, other) -> bool:
        return isinstance(other, SpectralSet) and self.same_as(other)

    def __hash__(self):
        return hash((len(self.annuli), len(self.points)))

    def to_json(self) -> dict:
        return {
            "annuli": [[a, b] for a, b in self.annuli],
            "points": [
                {
                    "re": p.value.real,
                    "im": p.value.imag,
                    "multiplicity": p.multiplicity,
                    "provenance": p.provenance,
                }
                for p in self.points
            ],
        }

    @staticmethod
    def from_json(doc: dict) -> "SpectralSet":
        pts = [
            SpectralPoint(complex(d["re"], d["im"]), int(d.get("multiplicity", 1)),
                          d.get("provenance", ""))
            for d in doc.get("points", [])
        ]
        return SpectralSet.build(doc.get("annuli", []), pts)

    def describe(self) -> str:
        parts = []
        for a, b in self.annuli:
            if _close(a, b):
                parts.append(f"circle r={a:.6g}")
            else:
                parts.append(f"annulus [{a:.6g}, {b:.6g}]")
        for p in self.points:
            parts.append(f"point {p.value:.6g} (x{p.multiplicity})")
        return " + ".join(parts) if parts else "empty"


def _close_complex(a: complex, b: complex, slack: float = SLACK) -> bool:
    return abs(a - b) <= slack * max(1.0, abs(a), abs(b))


def _principal_sqrt(z: complex) -> complex:
    r = math.sqrt(abs(z))
    if r == 0.0:
        return 0.0 + 0.0j
    theta = math.atan2(z.imag, z.real) / 2.0
    return complex(r * math.cos(theta), r * math.sin(theta))
