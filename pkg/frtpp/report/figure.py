from __future__ import annotations
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple
import pandas as pd
from ..error import ReportError

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6")
_LEVELS = ("none", "medium", "high")


@dataclass(frozen=True)
class SeriesStyle:
    color: str
    dashed: bool = False


# line styles of the figure legends
STYLES: Dict[str, SeriesStyle] = {
    "m1": SeriesStyle("#1f4fbf"),
    "m2": SeriesStyle("#d62728"),
    "m3": SeriesStyle("#1f4fbf", dashed=True),
    "m4": SeriesStyle("#d62728", dashed=True),
    "model": SeriesStyle("#2ca02c"),
    "model_x": SeriesStyle("#2ca02c", dashed=True),
    "itt": SeriesStyle("#000000"),
    "known_c": SeriesStyle("#7f7f7f"),
    "known_theta": SeriesStyle("#7f7f7f", dashed=True),
}

def style_of(method: str) -> SeriesStyle:
    return STYLES.get(method, SeriesStyle("#333333"))


@dataclass(frozen=True)
class Panel:
    """
    One sub-plot: the rows of a results table matching a hypothesis, a
    correct or misspecified analysis and a set of test quantities.

    Attributes:
        title (str): Panel heading.
        hypothesis (str): "H0" selects tau == 0, "H1" selects tau > 0.
        kinds (tuple): Accepted values of the `kind` column.
        misspecified (Optional[bool]): Misspecification filter, None accepts both.
    """
    title: str
    hypothesis: str
    kinds: Tuple[str, ...]
    misspecified: Optional[bool] = False

    def select(self, frame: pd.DataFrame) -> pd.DataFrame:
        mask = (frame["tau"] == 0) if self.hypothesis == "H0" else (frame["tau"] != 0)
        mask &= frame["kind"].isin(self.kinds)
        if self.misspecified is not None:
            mask &= frame["misspecified"].astype(bool) == self.misspecified
        return frame[mask]


@dataclass(frozen=True)
class FigureSpec:
    """
    Which rows of a results table become which panels and series.

    Attributes:
        name (str): Figure name, used in titles.
        predictiveness (Optional[str]): Row filter on the predictiveness column.
        panels (tuple): Panels, drawn row by row, two per row.
        series (tuple): Method families in legend order.
        explicit (bool): The series were requested by the user and must all be present.
        alpha_level (float): Height of the reference line.

    Methods:
    - named: One of the six standard figures.
    - with_series: Replace the series by an explicit selection.
    - resolve: Check the series against a results table.
    """
    name: str
    predictiveness: Optional[str]
    panels: Tuple[Panel, ...]
    series: Tuple[str, ...]
    explicit: bool = False
    alpha_level: float = 0.05

    @classmethod
    def named(cls, name: str, alpha_level: float = 0.05) -> FigureSpec:
        if name not in FIGURES:
            raise ReportError([f"unknown-figure: {name!r}, expected one of {list(FIGURES)}"],
                              context="FigureSpec")
        index = FIGURES.index(name)
        level = _LEVELS[index % 3]
        if index < 3:
            panels = tuple(Panel(f"{h} {k}", h, (k,)) for h in ("H0", "H1") for k in ("stat", "disc"))
            series = ("m1", "m2", "m3", "m4")
        else:
            panels = tuple(Panel(f"{'misspecified' if mis else 'correct'} {h}", h, ("disc", "model"), mis)
                           for mis in (False, True) for h in ("H0", "H1"))
            series = ("m1", "m2", "m3", "m4", "model", "model_x")
        return cls(name, level, panels, series, alpha_level=alpha_level)

    def with_series(self, series: Sequence[str]) -> FigureSpec:
        return replace(self, series=tuple(series), explicit=True)

    def rows(self, frame: pd.DataFrame) -> pd.DataFrame:
        if self.predictiveness is not None:
            frame = frame[frame["predictiveness"] == self.predictiveness]
        return frame

    def resolve(self, frame: pd.DataFrame) -> FigureSpec:
        """
        Return a spec whose series all occur in `frame`.

        Named figures silently drop absent series; an explicit selection must be
        fully present. Raises ReportError when nothing is left to draw.
        """
        if not self.series:
            raise ReportError(["no series"], context=self.name)
        frame = self.rows(frame)
        present = set()
        for panel in self.panels:
            present.update(panel.select(frame)["method"])
        missing = [s for s in self.series if s not in present]
        if missing and self.explicit:
            raise ReportError([f"requested series absent: {missing}"], context=self.name)
        kept = tuple(s for s in self.series if s in present)
        if not kept:
            raise ReportError(["no series"], context=self.name)
        return replace(self, series=kept)

    def panel_points(self, frame: pd.DataFrame) -> List[Tuple[Panel, Dict[str, List[Tuple[float, float]]]]]:
        """
        (x, rejection rate) points per panel and series, x being eta_c0 - eta_n,
        sorted by x, undefined rates left out.
        """
        frame = self.rows(frame)
        frame = frame.assign(gap=frame["eta_c0"] - frame["eta_n"])
        drawn = []
        for panel in self.panels:
            rows = panel.select(frame)
            lines = {}
            for method in self.series:
                points = rows[(rows["method"] == method) & rows["rejection_rate"].notna()]
                points = points.sort_values("gap")
                lines[method] = [(float(x), float(y)) for x, y in
                                 zip(points["gap"], points["rejection_rate"])]
            drawn.append((panel, lines))
        return drawn
