"""Embedded batch-size plan tables and MIL-STD-105E code-letter sizes.

The (n, c) plan cells for the two design cases ship as a versioned text
file under ``data/``; cells the source tables leave blank are preserved as
blanks (lookups report them as "no plan") rather than extrapolated. The
loader and serializer round-trip that file byte-exactly, and the CSV
export mirrors it with blanks as empty fields.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .plans import InvalidParameterError

_DATA_PATH = Path(__file__).parent / "data" / "aql_plans.txt"

#: The AQL columns the plan tables publish.
SUPPORTED_AQLS = (0.025, 0.04, 0.065, 0.1)

#: MIL-STD-105E sample-size code letters (I and O are not assigned).
CODE_LETTER_SIZES = {
    "A": 2, "B": 3, "C": 5, "D": 8, "E": 13, "F": 20, "G": 32, "H": 50,
    "J": 80, "K": 125, "L": 200, "M": 315, "N": 500, "P": 800,
    "Q": 1250, "R": 2000,
}


class UnknownCodeLetterError(ValueError):
    """The requested sample-size code letter is not assigned."""


class PlanCase(Enum):
    """Which design case a plan table serves."""

    CASE_I = "CaseI"
    CASE_II = "CaseII"


@dataclass(frozen=True)
class AqlPlanEntry:
    """One non-blank plan cell: batch-size range x AQL -> (n, c).

    ``batch_hi`` is None for open-ended ranges. ``n`` is the number of
    items to test and ``c`` the defect threshold.
    """

    batch_lo: int
    batch_hi: int | None
    aql: float
    n: int
    c: int
    case_id: PlanCase

    def __post_init__(self) -> None:
        if self.batch_hi is not None and self.batch_lo > self.batch_hi:
            raise InvalidParameterError(
                f"batch range inverted: {self.batch_lo}..{self.batch_hi}"
            )
        if self.batch_hi is not None and self.n > self.batch_hi:
            raise InvalidParameterError(
                f"sample size {self.n} exceeds batch upper bound {self.batch_hi}"
            )


@dataclass(frozen=True)
class _Cell:
    """One grid cell as stored, blank or not."""

    case_id: PlanCase
    batch_lo: int
    batch_hi: int | None
    aql: float
    n: int | None
    c: int | None

    @property
    def blank(self) -> bool:
        return self.n is None


def _parse_data(text: str) -> list[_Cell]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "version 1":
        raise ValueError(f"unsupported plan-table data version in {_DATA_PATH}")
    cells: list[_Cell] = []
    for line in lines[1:]:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        case_s, lo_s, hi_s, aql_s, n_s, c_s = line.split()
        cells.append(
            _Cell(
                case_id=PlanCase(case_s),
                batch_lo=int(lo_s),
                batch_hi=None if hi_s == "*" else int(hi_s),
                aql=float(aql_s),
                n=None if n_s == "-" else int(n_s),
                c=None if c_s == "-" else int(c_s),
            )
        )
    return cells


def render_data_file(cells: list[_Cell], header_comments: list[str]) -> str:
    """Serialize cells back to the data-file format (used to verify round-trip)."""
    out = io.StringIO()
    out.write("version 1\n")
    for comment in header_comments:
        out.write(comment + "\n")
    for cell in cells:
        hi = "*" if cell.batch_hi is None else str(cell.batch_hi)
        n = "-" if cell.n is None else str(cell.n)
        c = "-" if cell.c is None else str(cell.c)
        out.write(f"{cell.case_id.value} {cell.batch_lo} {hi} {repr(cell.aql)} {n} {c}\n")
    return out.getvalue()


def _load() -> tuple[list[_Cell], list[str]]:
    text = _DATA_PATH.read_text(encoding="utf-8")
    comments = [
        line for line in text.splitlines()[1:] if line.strip().startswith("#")
    ]
    return _parse_data(text), comments


_CELLS, _HEADER_COMMENTS = _load()

#: All non-blank cells, in table order.
PLAN_ENTRIES: tuple[AqlPlanEntry, ...] = tuple(
    AqlPlanEntry(
        batch_lo=cell.batch_lo,
        batch_hi=cell.batch_hi,
        aql=cell.aql,
        n=cell.n,
        c=cell.c,
        case_id=cell.case_id,
    )
    for cell in _CELLS
    if not cell.blank
)


def _canonical_aql(aql: float) -> float:
    for known in SUPPORTED_AQLS:
        if abs(aql - known) < 1e-9:
            return known
    raise InvalidParameterError(
        f"aql must be one of {SUPPORTED_AQLS}, got {aql!r}", field="aql"
    )


def lookup_plan(
    batch_size: int, aql: float, case_id: PlanCase
) -> tuple[int, int] | None:
    """Return the (n, c) cell whose batch range contains batch_size.

    Returns None where the table cell is blank; callers should fall back
    to the sample_size / threshold route.
    """
    if batch_size < 2:
        raise InvalidParameterError(
            f"batch_size must be >= 2, got {batch_size}", field="batch_size"
        )
    aql = _canonical_aql(aql)
    for cell in _CELLS:
        if cell.case_id is not case_id or cell.aql != aql:
            continue
        if cell.batch_lo <= batch_size and (
            cell.batch_hi is None or batch_size <= cell.batch_hi
        ):
            return None if cell.blank else (cell.n, cell.c)
    return None


def code_letter_size(letter: str) -> int:
    """Sample size for a MIL-STD-105E code letter (A..R, skipping I and O)."""
    key = letter.strip().upper()
    if key not in CODE_LETTER_SIZES:
        raise UnknownCodeLetterError(f"unknown sample-size code letter: {letter!r}")
    return CODE_LETTER_SIZES[key]


def export_plan_table_csv(case_id: PlanCase) -> str:
    """CSV dump of one case's table: header batch_lo,batch_hi,aql,n,c,case.

    Blank cells appear with empty n and c fields; open-ended batch ranges
    with an empty batch_hi. Output is byte-stable across calls.
    """
    lines = ["batch_lo,batch_hi,aql,n,c,case"]
    for cell in _CELLS:
        if cell.case_id is not case_id:
            continue
        hi = "" if cell.batch_hi is None else str(cell.batch_hi)
        n = "" if cell.n is None else str(cell.n)
        c = "" if cell.c is None else str(cell.c)
        lines.append(f"{cell.batch_lo},{hi},{repr(cell.aql)},{n},{c},{cell.case_id.value}")
    return "\n".join(lines) + "\n"


def data_file_round_trips() -> bool:
    """True when serializing the parsed table reproduces the data file byte-exactly."""
    original = _DATA_PATH.read_text(encoding="utf-8")
    return render_data_file(_CELLS, _HEADER_COMMENTS) == original
