"""Report tables: long-format CSV and aligned-text rendering."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["ReportRow", "ReportTable"]

CSV_HEADER = "statistic,value,se,config-echo"


@dataclass(frozen=True)
class ReportRow:
    statistic: str
    value: float
    se: float
    config_echo: str


@dataclass
class ReportTable:
    """A flat list of labelled cells plus optional grid metadata.

    ``grid_rows`` maps a row label to the statistic labels present in that
    row; when set, the text rendering pivots into a statistics-as-columns
    grid mirroring the power-table layout.
    """

    rows: list[ReportRow] = field(default_factory=list)
    grid_rows: list[tuple[str, dict[str, float]]] | None = None
    value_format: str = "{:.6f}"

    def add(self, statistic: str, value: float, se: float, config_echo: str) -> None:
        self.rows.append(ReportRow(statistic, float(value), float(se), config_echo))

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for row in self.rows:
            value = self.value_format.format(row.value)
            se = self.value_format.format(row.se)
            lines.append(f"{row.statistic},{value},{se},{row.config_echo}")
        return "\n".join(lines) + "\n"

    def _flat_text(self) -> str:
        header = ("statistic", "value", "se")
        body = [
            (r.statistic, self.value_format.format(r.value), self.value_format.format(r.se))
            for r in self.rows
        ]
        widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(header)]
        lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
        lines.append("  ".join("-" * w for w in widths))
        for b in body:
            lines.append("  ".join(b[i].ljust(widths[i]) for i in range(3)))
        return "\n".join(lines) + "\n"

    def _grid_text(self) -> str:
        assert self.grid_rows is not None
        stat_labels: list[str] = []
        for _, cells in self.grid_rows:
            for label in cells:
                if label not in stat_labels:
                    stat_labels.append(label)
        head = [""] + stat_labels
        body = []
        for row_label, cells in self.grid_rows:
            body.append(
                [row_label]
                + [self.value_format.format(cells[s]) if s in cells else "" for s in stat_labels]
            )
        widths = [
            max(len(head[i]), *(len(b[i]) for b in body)) for i in range(len(head))
        ]
        lines = ["  ".join(head[i].ljust(widths[i]) for i in range(len(head)))]
        lines.append("  ".join("-" * w for w in widths))
        for b in body:
            lines.append("  ".join(b[i].ljust(widths[i]) for i in range(len(b))))
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        if self.grid_rows:
            return self._grid_text()
        return self._flat_text()

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "text":
            return self.to_text()
        raise ValueError(f"unknown format {fmt!r}")
