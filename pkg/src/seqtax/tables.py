"""Fixed-width ASCII tables for diff-stable terminal output."""
from __future__ import annotations

from typing import Sequence


def ascii_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Render a bordered table; widths derive only from the cell content."""
    columns = len(headers)
    widths = [len(h) for h in headers]
    for row in rows:
        for i in range(columns):
            widths[i] = max(widths[i], len(row[i]))

    def rule() -> str:
        return "+" + "+".join("-" * (w + 2) for w in widths) + "+"

    def line(cells: Sequence[str]) -> str:
        return "| " + " | ".join(cell.ljust(widths[i]) for i, cell in enumerate(cells)) + " |"

    out = [rule(), line(headers), rule()]
    for row in rows:
        out.append(line(row))
    if rows:
        out.append(rule())
    return "\n".join(out) + "\n"
