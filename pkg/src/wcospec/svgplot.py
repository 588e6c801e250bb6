"""Standalone SVG rendering of spectral sets: shaded rings, stroked
circles, eigenvalue markers, and an optional advisory eigenvalue cloud."""

from __future__ import annotations

SIZE = 560
MARGIN = 40


def render_report_svg(rep, cloud=None) -> str:
    radii = [b for _, b in rep.sigma.annuli] + \
        [abs(p.value) for p in rep.sigma.points] + \
        [abs(e.value) for e in rep.eigenvalues] + [rep.R1]
    r_max = max(radii) if radii else 1.0
    scale = (SIZE / 2 - MARGIN) / max(r_max, 1e-12)
    cx = cy = SIZE / 2
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<line x1="{MARGIN / 2}" y1="{cy}" x2="{SIZE - MARGIN / 2}" y2="{cy}" '
        'stroke="#ccc" stroke-width="1"/>',
        f'<line x1="{cx}" y1="{MARGIN / 2}" x2="{cx}" y2="{SIZE - MARGIN / 2}" '
        'stroke="#ccc" stroke-width="1"/>',
    ]
    if cloud is not None:
        for z in cloud:
            parts.append(
                f'<circle cx="{cx + z.real * scale:.2f}" cy="{cy - z.imag * scale:.2f}" '
                'r="1.3" fill="#9db8d9" fill-opacity="0.45"/>')
    for r_in, r_out in rep.sigma.annuli:
        if r_out - r_in <= 1e-12 * max(1.0, r_out):
            parts.append(
                f'<circle cx="{cx}" cy="{cy}" r="{r_out * scale:.3f}" fill="none" '
                'stroke="#1f4e96" stroke-width="2.2"/>')
        else:
            parts.append(
                f'<path d="M {cx + r_out * scale:.3f} {cy} '
                f'A {r_out * scale:.3f} {r_out * scale:.3f} 0 1 0 {cx - r_out * scale:.3f} {cy} '
                f'A {r_out * scale:.3f} {r_out * scale:.3f} 0 1 0 {cx + r_out * scale:.3f} {cy} '
                f'M {cx + r_in * scale:.3f} {cy} '
                f'A {r_in * scale:.3f} {r_in * scale:.3f} 0 1 0 {cx - r_in * scale:.3f} {cy} '
                f'A {r_in * scale:.3f} {r_in * scale:.3f} 0 1 0 {cx + r_in * scale:.3f} {cy} Z" '
                'fill="#7aa6d8" fill-opacity="0.5" fill-rule="evenodd" '
                'stroke="#1f4e96" stroke-width="1"/>')
    for p in rep.sigma.points:
        parts.append(
            f'<circle cx="{cx + p.value.real * scale:.3f}" '
            f'cy="{cy - p.value.imag * scale:.3f}" r="2.2" fill="#555"/>')
    for e in rep.eigenvalues:
        x = cx + e.value.real * scale
        y = cy - e.value.imag * scale
        parts.append(
            f'<path d="M {x - 5:.2f} {y:.2f} L {x:.2f} {y - 5:.2f} '
            f'L {x + 5:.2f} {y:.2f} L {x:.2f} {y + 5:.2f} Z" '
            'fill="#c23b22"/>')
        parts.append(
            f'<text x="{x + 7:.2f}" y="{y - 7:.2f}" font-size="11" '
            f'fill="#c23b22">x{e.multiplicity}</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def write_report_svg(rep, path: str, cloud=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_report_svg(rep, cloud))
