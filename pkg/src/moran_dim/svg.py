"""Minimal SVG heatmap writer for sweep results."""

from __future__ import annotations

from xml.sax.saxutils import escape

# viridis sampled at 8 evenly spaced stops
RAMP = (
    (68, 1, 84),
    (70, 50, 126),
    (54, 92, 141),
    (39, 127, 142),
    (31, 161, 135),
    (74, 193, 109),
    (160, 218, 57),
    (253, 231, 37),
)


def ramp_color(t: float) -> str:
    t = min(max(t, 0.0), 1.0) * (len(RAMP) - 1)
    i = min(int(t), len(RAMP) - 2)
    f = t - i
    rgb = (round(c0 + f * (c1 - c0)) for c0, c1 in zip(RAMP[i], RAMP[i + 1]))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def heatmap_svg(rows, a_values, b_values, *, cell=10, title="alpha(a, b)") -> str:
    """Render ``rows`` of ``(a, b, value)`` on the ``a_values x b_values`` grid.

    ``a`` runs along the horizontal axis and ``b`` upward; grid nodes with
    no row are left empty.
    """
    a_index = {a: i for i, a in enumerate(a_values)}
    b_index = {b: j for j, b in enumerate(b_values)}
    values = [v for _, _, v in rows]
    vmin, vmax = (min(values), max(values)) if values else (0.0, 1.0)
    span = vmax - vmin or 1.0
    margin, bar = 40, 20
    width = margin * 2 + cell * len(a_values) + bar + 60
    height = margin * 2 + cell * len(b_values)
    top = margin + cell * len(b_values)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>{escape(title)}</title>',
        '<g class="cells">',
    ]
    for a, b, v in rows:
        x = margin + cell * a_index[a]
        y = top - cell * (b_index[b] + 1)
        out.append(
            f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" '
            f'fill="{ramp_color((v - vmin) / span)}" data-a="{a:.17g}" data-b="{b:.17g}" '
            f'data-value="{v:.17g}"/>'
        )
    out.append("</g>")
    bar_x = margin * 2 + cell * len(a_values)
    out.append('<g class="colorbar">')
    steps = 64
    h = cell * len(b_values) / steps
    for k in range(steps):
        out.append(
            f'<rect x="{bar_x}" y="{top - (k + 1) * h:.3f}" width="{bar}" height="{h:.3f}" '
            f'fill="{ramp_color(k / (steps - 1))}"/>'
        )
    out.append(f'<text x="{bar_x + bar + 4}" y="{top}" font-size="10">{vmin:.3g}</text>')
    out.append(f'<text x="{bar_x + bar + 4}" y="{margin + 10}" font-size="10">{vmax:.3g}</text>')
    out.append("</g>")
    out.append(f'<text x="{margin}" y="{height - 10}" font-size="12">a</text>')
    out.append(f'<text x="10" y="{margin}" font-size="12">b</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
