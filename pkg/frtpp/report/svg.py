from typing import Dict, List, Sequence, Tuple
from xml.sax.saxutils import escape
from .figure import FigureSpec, Panel, style_of
from ..dataobj.reference import ETA_C0_GRID

WIDTH, HEIGHT = 800, 500
LEGEND_HEIGHT = 50
Y_TICKS = (0.0, 0.25, 0.5, 0.75, 1.0)

Points = Dict[str, List[Tuple[float, float]]]


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _x_ticks(panels: Sequence[Tuple[Panel, Points]]) -> List[float]:
    xs = {x for _, lines in panels for points in lines.values() for x, _ in points}
    return sorted(xs | set(ETA_C0_GRID))


def _legend(series: Sequence[str]) -> List[str]:
    lines = []
    slot = (WIDTH - 40) / max(len(series), 1)
    for i, method in enumerate(series):
        style = style_of(method)
        x = 20 + i * slot
        dash = ' stroke-dasharray="6 4"' if style.dashed else ""
        lines.append(f'<line x1="{_fmt(x)}" y1="25.00" x2="{_fmt(x + 30)}" y2="25.00" '
                     f'stroke="{style.color}" stroke-width="2.5"{dash}/>')
        lines.append(f'<text x="{_fmt(x + 36)}" y="29.00">{escape(method)}</text>')
    return lines


def _panel(panel: Panel, lines: Points, box: Tuple[float, float, float, float],
           ticks: Sequence[float], alpha_level: float) -> List[str]:
    left, top, width, height = box
    x_min, x_max = ticks[0], ticks[-1]
    span = (x_max - x_min) or 1.0

    def x_px(value: float) -> float:
        return left + (value - x_min) / span * width

    def y_px(value: float) -> float:
        return top + height - value * height

    out = [
        f'<text x="{_fmt(left + width / 2)}" y="{_fmt(top - 8)}" text-anchor="middle">{escape(panel.title)}</text>',
        f'<rect x="{_fmt(left)}" y="{_fmt(top)}" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'fill="none" stroke="#000" stroke-width="1"/>',
    ]
    for tick in ticks:
        px = x_px(tick)
        out.append(f'<line x1="{_fmt(px)}" y1="{_fmt(top + height)}" x2="{_fmt(px)}" '
                   f'y2="{_fmt(top + height + 4)}" stroke="#000"/>')
        out.append(f'<text x="{_fmt(px)}" y="{_fmt(top + height + 16)}" text-anchor="middle" '
                   f'font-size="10">{tick:g}</text>')
    for tick in Y_TICKS:
        py = y_px(tick)
        out.append(f'<line x1="{_fmt(left - 4)}" y1="{_fmt(py)}" x2="{_fmt(left)}" y2="{_fmt(py)}" stroke="#000"/>')
        out.append(f'<text x="{_fmt(left - 6)}" y="{_fmt(py + 3)}" text-anchor="end" '
                   f'font-size="10">{tick:.2f}</text>')
    out.append(f'<line class="alpha" x1="{_fmt(left)}" y1="{_fmt(y_px(alpha_level))}" '
               f'x2="{_fmt(left + width)}" y2="{_fmt(y_px(alpha_level))}" '
               f'stroke="#888" stroke-dasharray="2 3"/>')

    for method, points in lines.items():
        if not points:
            continue
        style = style_of(method)
        dash = ' stroke-dasharray="6 4"' if style.dashed else ""
        coords = " ".join(f"{_fmt(x_px(x))},{_fmt(y_px(y))}" for x, y in points)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{style.color}" '
                   f'stroke-width="2"{dash}/>')
        for x, y in points:
            out.append(f'<circle cx="{_fmt(x_px(x))}" cy="{_fmt(y_px(y))}" r="3" fill="{style.color}"/>')
    return out


def render_svg(spec: FigureSpec, panels: Sequence[Tuple[Panel, Points]]) -> str:
    """
    Static line chart of rejection rates: panels two per row under a legend,
    rates on [0, 1], a dashed reference line at the significance level.
    Coordinates are printed with two decimals so equal inputs give equal bytes.
    """
    ticks = _x_ticks(panels)
    columns = 2 if len(panels) > 1 else 1
    rows = (len(panels) + columns - 1) // columns
    cell_w = WIDTH / columns
    cell_h = (HEIGHT - LEGEND_HEIGHT - 30) / max(rows, 1)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<style>text { font-family: "Helvetica", "Arial", sans-serif; font-size: 12px; }</style>',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    out += _legend(spec.series)
    for i, (panel, lines) in enumerate(panels):
        row, col = divmod(i, columns)
        box = (col * cell_w + 55, LEGEND_HEIGHT + row * cell_h + 25, cell_w - 75, cell_h - 55)
        out += _panel(panel, lines, box, ticks, spec.alpha_level)
    out.append(f'<text x="{WIDTH / 2:.2f}" y="{HEIGHT - 8}" text-anchor="middle">eta_c0 - eta_n</text>')
    out.append(f'<text x="14" y="{HEIGHT / 2:.2f}" transform="rotate(-90 14,{HEIGHT / 2:.2f})" '
               f'text-anchor="middle">rejection rate</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
