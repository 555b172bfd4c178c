"""The ``.mla`` text format and plain integer table files.

::

    MLA 1
    n 4
    names e a b c        (optional)
    mul
    <n rows of n indices>
    star
    <n rows of n indices>

Lines starting with ``#`` are comments anywhere in the file.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

from .core import FiniteMLA, validate_group
from .errors import MultLieError, ParseError
from .groups import GroupTable

MAGIC = "MLA 1"


def _lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, line in enumerate(text.split("\n"), 1):
        s = line.strip()
        if s and not s.startswith("#"):
            out.append((no, s))
    return out


def _row(no: int, line: str, n: int) -> list[int]:
    parts = line.split()
    if len(parts) != n:
        raise ParseError(f"expected {n} entries, got {len(parts)}", no)
    try:
        row = [int(p) for p in parts]
    except ValueError:
        raise ParseError("entries must be decimal integers", no) from None
    for v in row:
        if not 0 <= v < n:
            raise ParseError(f"index {v} out of range 0..{n - 1}", no)
    return row


def parse_mla(text: str) -> FiniteMLA:
    """Parse ``.mla`` text; the group table must pass :func:`validate_group`."""
    lines = _lines(text)
    pos = 0

    def take(what: str) -> tuple[int, str]:
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 1
            raise ParseError(f"unexpected end of file, expected {what}", last)
        item = lines[pos]
        pos += 1
        return item

    no, line = take("header")
    if line != MAGIC:
        raise ParseError(f"expected header {MAGIC!r}", no)
    no, line = take("n line")
    parts = line.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise ParseError("expected 'n <positive integer>'", no)
    n = int(parts[1])
    names = None
    no, line = take("names or mul")
    if line.split()[0] == "names":
        names = line.split()[1:]
        if len(names) != n:
            raise ParseError(f"expected {n} names, got {len(names)}", no)
        no, line = take("mul")
    tables = []
    for block in ("mul", "star"):
        if line != block:
            raise ParseError(f"expected {block!r}", no)
        rows = []
        for _ in range(n):
            no, line = take(f"{block} row")
            if line in ("mul", "star"):
                raise ParseError(f"{block} block has {len(rows)} rows, expected {n}", no)
            rows.append(_row(no, line, n))
        tables.append(rows)
        if block == "mul":
            no, line = take("star")
    if pos != len(lines):
        raise ParseError("trailing content after star block", lines[pos][0])
    try:
        group = GroupTable(np.array(tables[0], dtype=np.int64))
    except MultLieError as e:
        raise ParseError(f"mul block: {e}") from e
    report = validate_group(group)
    if not report.valid:
        raise ParseError(f"mul block is not a group: {report.message}")
    return FiniteMLA(group, tables[1], names)


def serialize_mla(m: FiniteMLA, comments: Iterable[str] = ()) -> str:
    out = [MAGIC, f"n {m.n}"]
    out += [f"# {c}" for c in comments]
    if m.names is not None:
        out.append("names " + " ".join(m.names))
    for block, tab in (("mul", m.group.mul), ("star", m.star)):
        out.append(block)
        out += [" ".join(str(int(v)) for v in row) for row in tab]
    return "\n".join(out) + "\n"


def read_mla(path: str | Path) -> FiniteMLA:
    return parse_mla(Path(path).read_text(encoding="ascii"))


def write_mla(path: str | Path, m: FiniteMLA, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(serialize_mla(m, comments), encoding="ascii", newline="\n")


def parse_table(text: str, rows: int | None = None, cols: int | None = None) -> list[list[int]]:
    """Whitespace-separated integer rows, ``#`` comments allowed."""
    out = []
    for no, line in _lines(text):
        try:
            row = [int(p) for p in line.split()]
        except ValueError:
            raise ParseError("entries must be decimal integers", no) from None
        if cols is not None and len(row) != cols:
            raise ParseError(f"expected {cols} entries, got {len(row)}", no)
        out.append(row)
    if rows is not None and len(out) != rows:
        raise ParseError(f"expected {rows} rows, got {len(out)}")
    return out


def parse_map(text: str, n: int) -> list[int]:
    """An element map written as ``n`` integers over any number of lines."""
    values = [v for row in parse_table(text) for v in row]
    if len(values) != n:
        raise ParseError(f"map needs {n} values, got {len(values)}")
    return values


def dump_exterior(ext, m: FiniteMLA | None = None) -> str:
    """Serialize a realized square with its variant and symbol images.

    ``m`` is the square as an MLA when its star is known; otherwise the
    star block is written as all zeros and marked as such.
    """
    table = ext.table
    star_known = m is not None
    if m is None:
        m = FiniteMLA(table, np.zeros((table.n, table.n), dtype=np.int64))
    comments = [f"variant={ext.variant}", f"star={'extended' if star_known else 'unset'}"]
    n = ext.mla.n
    for i in range(n):
        for j in range(n):
            comments.append(f"symbol {i} {j} -> {ext.wedge(i, j)}")
    for i in range(n):
        for j in range(n):
            comments.append(f"bracket {i} {j} -> {ext.bracket(i, j)}")
    return serialize_mla(m, comments)


def format_report(d: dict[str, object]) -> str:
    """``key=value`` lines with keys sorted."""
    return "".join(f"{k}={d[k]}\n" for k in sorted(d))


def parse_ideal(arg: str) -> list[int]:
    try:
        return sorted({int(x) for x in arg.split(",") if x.strip()})
    except ValueError:
        raise ParseError(f"bad index list {arg!r}") from None

