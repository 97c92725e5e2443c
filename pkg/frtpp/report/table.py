from typing import List
import pandas as pd
from .figure import FigureSpec


def render_table(spec: FigureSpec, frame: pd.DataFrame) -> str:
    """
    Aligned text table of rejection rates, one block per panel with a row per
    eta_c0 - eta_n value and a column per series.
    """
    blocks: List[str] = []
    for panel, lines in spec.panel_points(frame):
        records = [(x, method, y) for method, points in lines.items() for x, y in points]
        blocks.append(f"[{spec.name}] {panel.title}")
        if not records:
            blocks.append("  (no rows)")
            continue
        table = pd.DataFrame(records, columns=["eta_c0 - eta_n", "method", "rate"])
        table = table.pivot(index="eta_c0 - eta_n", columns="method", values="rate")
        table = table[[m for m in spec.series if m in table.columns]]
        table.columns.name = None
        blocks.append(table.to_string(float_format=lambda v: f"{v:.3f}", na_rep="-"))
    return "\n".join(blocks) + "\n"
