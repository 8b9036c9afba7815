"""Text table files and ``key: value`` reports."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import CayleyTable, Loop, build_table
from .errors import OutOfRangeEntry, TableSyntaxError


def parse_table_file(text: str) -> tuple[CayleyTable, Optional[tuple[int, ...]]]:
    """Parse ``order N``, N rows, and an optional ``subloop ...`` line.

    Lines starting with ``#`` and blank lines are skipped.
    """
    order = None
    rows: list[list[int]] = []
    subset = None
    lines = text.splitlines()
    lineno = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        words = line.split()
        if words[0] == "order":
            if order is not None:
                raise TableSyntaxError(lineno, "duplicate order line")
            if len(words) != 2 or not words[1].isdigit() or int(words[1]) < 1:
                raise TableSyntaxError(lineno, "expected 'order N' with N >= 1")
            order = int(words[1])
            continue
        if order is None:
            raise TableSyntaxError(lineno, "expected 'order N' before table rows")
        if words[0] == "subloop":
            if len(rows) != order:
                raise TableSyntaxError(lineno, f"expected {order} rows")
            if subset is not None:
                raise TableSyntaxError(lineno, "duplicate subloop line")
            try:
                subset = tuple(int(w) for w in words[1:])
            except ValueError:
                raise TableSyntaxError(lineno, "subloop entries must be integers") from None
            for v in subset:
                if not 0 <= v < order:
                    raise TableSyntaxError(lineno, f"subloop element {v} out of range")
            continue
        if subset is not None or len(rows) == order:
            raise TableSyntaxError(lineno, "unexpected content after the table")
        try:
            row = [int(w) for w in words]
        except ValueError:
            raise TableSyntaxError(lineno, "table entries must be integers") from None
        if len(row) != order:
            raise TableSyntaxError(lineno, f"expected {order} entries, got {len(row)}")
        for col, v in enumerate(row):
            if not 0 <= v < order:
                err = OutOfRangeEntry(len(rows), col, v)
                err.line = lineno
                err.args = (f"line {lineno}: {err.args[0]}",)
                raise err
        rows.append(row)
    if order is None:
        raise TableSyntaxError(lineno + 1, "missing order line")
    if len(rows) != order:
        raise TableSyntaxError(len(lines) + 1, f"expected {order} rows")
    table = build_table(order, [v for r in rows for v in r])
    return table, subset


def serialize_table(table, subset: Optional[Iterable[int]] = None,
                    comments: Iterable[str] = ()) -> str:
    if isinstance(table, Loop):
        table = table.table
    out = [f"# {c}" for c in comments]
    out.append(f"order {table.order}")
    for row in table.entries:
        out.append(" ".join(str(int(v)) for v in row))
    if subset is not None:
        out.append("subloop " + " ".join(str(int(v)) for v in subset))
    return "\n".join(out) + "\n"


@dataclass
class Report:
    """Ordered ``key: value`` document; ``time_ms`` is always written last."""

    entries: list[tuple[str, str]] = field(default_factory=list)
    time_ms: Optional[int] = None

    def add(self, key: str, value) -> None:
        self.entries.append((key, _fmt(value)))

    def extend(self, pairs: Iterable[tuple[str, str]]) -> None:
        for k, v in pairs:
            if k == "time_ms":
                self.time_ms = int(v)
            else:
                self.add(k, v)

    def get(self, key: str) -> Optional[str]:
        for k, v in self.entries:
            if k == key:
                return v
        return None

    def render(self, with_time: bool = True) -> str:
        lines = [f"{k}: {v}" for k, v in self.entries]
        if with_time and self.time_ms is not None:
            lines.append(f"time_ms: {self.time_ms}")
        return "\n".join(lines) + "\n"


def parse_report(text: str) -> list[tuple[str, str]]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition(": ")
        out.append((key, value))
    return out


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (tuple, list)):
        return " ".join(str(v) for v in value)
    return str(value)
