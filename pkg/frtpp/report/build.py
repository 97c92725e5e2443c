import logging
import os
from dataclasses import dataclass
from typing import Optional, Union
from .figure import FigureSpec
from .svg import render_svg
from .table import render_table
from ..dataobj import read_results
from ..helper import ensure_parent

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


@dataclass(frozen=True)
class Report:
    """
    Rendered figure.

    Attributes:
        spec (FigureSpec): The figure with its series resolved against the results.
        table (str): Aligned text table.
        svg (str): SVG document.
    """
    spec: FigureSpec
    table: str
    svg: str

    def write(self, svg_path: PathLike, table_path: Optional[PathLike] = None):
        with open(ensure_parent(svg_path), "w", encoding="utf-8", newline="\n") as f:
            f.write(self.svg)
        if table_path is not None:
            with open(ensure_parent(table_path), "w", encoding="utf-8", newline="\n") as f:
                f.write(self.table)


def report(results: PathLike, spec: FigureSpec) -> Report:
    """
    Render a results CSV as a figure.

    Raises:
    - InvalidFormatError: The CSV does not have the results schema.
    - ReportError: No series to draw, or an explicitly requested series is absent.
    """
    frame = read_results(results)
    resolved = spec.resolve(frame)
    dropped = [s for s in spec.series if s not in resolved.series]
    if dropped:
        logger.info("%s: no rows for %s, dropped", spec.name, dropped)
    panels = resolved.panel_points(frame)
    return Report(resolved, render_table(resolved, frame), render_svg(resolved, panels))
