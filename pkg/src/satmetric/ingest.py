"""Response-file ingestion and synthetic response generation.

Three CSV schemas are accepted, all UTF-8 with a header row and plain
integer cells:

* expectation / perception: ``respondent_id,q1,...,qk`` (k = item count)
* importance:  ``respondent_id,tangibles,reliability,responsiveness,assurance,empathy``
  where every row allocates 100 points in multiples of five

Parsing is a pure function of the file bytes; the returned ResponseSet is
immutable.  Rows that violate the schema are either dropped (listwise,
with a row-level diagnostic) or abort the parse, per MissingPolicy.
"""

from __future__ import annotations

import csv
import io
import math
import random
import re
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DataError
from .instrument import LikertScale, SurveyInstrument

#: Fixed importance-file column order (one column per dimension).
IMPORTANCE_COLUMNS: tuple[str, ...] = (
    "tangibles",
    "reliability",
    "responsiveness",
    "assurance",
    "empathy",
)

IMPORTANCE_TOTAL = 100
IMPORTANCE_STEP = 5


class ResponseKind(str, Enum):
    EXPECTATION = "expectation"
    PERCEPTION = "perception"
    IMPORTANCE = "importance"

    @property
    def is_likert(self) -> bool:
        return self is not ResponseKind.IMPORTANCE


class MissingPolicy(str, Enum):
    DROP_ROW = "drop_row"
    FAIL = "fail"


@dataclass(frozen=True)
class RowError:
    """One rejected row: 1-based data-row index, offending column, machine
    code, and a human-readable message."""

    row: int
    column: str
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    row_errors: tuple[RowError, ...]
    accepted_rows: int
    rejected_rows: int

    @property
    def total_rows(self) -> int:
        return self.accepted_rows + self.rejected_rows


@dataclass(frozen=True)
class ResponseSet:
    """Validated N x k integer response matrix of one kind.

    For Likert kinds k equals the instrument item count and every cell lies
    within the scale; for importance k is 5 and every row allocates exactly
    100 points in multiples of five.  ``values`` is read-only.
    """

    kind: ResponseKind
    instrument_ref: str
    values: np.ndarray
    respondent_ids: tuple[str, ...]

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.int64, copy=True)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if values.ndim != 2 or values.shape[0] < 1:
            raise DataError("response matrix must be N x k with N >= 1")
        if len(self.respondent_ids) != values.shape[0]:
            raise DataError("respondent_ids length must match row count")
        if self.kind is ResponseKind.IMPORTANCE:
            if values.shape[1] != len(IMPORTANCE_COLUMNS):
                raise DataError("importance matrix must have exactly 5 columns")
            for idx, row in enumerate(values, start=1):
                violation = validate_importance_row([int(v) for v in row])
                if violation is not None:
                    raise DataError(f"importance row {idx} violates {violation}")

    @property
    def n_respondents(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_columns(self) -> int:
        return int(self.values.shape[1])


def validate_importance_row(row: Sequence[int]) -> str | None:
    """Return None when the allocation is valid, else a violation code.

    Valid means: the five values sum to exactly 100 and each is a
    nonnegative multiple of five no greater than 100.
    """
    if len(row) != len(IMPORTANCE_COLUMNS):
        return "row_length"
    if sum(row) != IMPORTANCE_TOTAL:
        return "sum_not_100"
    for value in row:
        if value < 0 or value > IMPORTANCE_TOTAL:
            return "out_of_range"
    for value in row:
        if value % IMPORTANCE_STEP != 0:
            return "not_multiple_of_five"
    return None


def _expected_header(instrument: SurveyInstrument, kind: ResponseKind) -> list[str]:
    if kind.is_likert:
        return ["respondent_id"] + [f"q{item.id}" for item in instrument.items]
    return ["respondent_id", *IMPORTANCE_COLUMNS]


_INT_CELL = re.compile(r"[+-]?[0-9]+")


def _parse_int_cell(cell: str) -> int | None:
    """Strict ASCII integer parse; decimals, underscores, and other noise
    are rejected."""
    text = cell.strip()
    if not text or not _INT_CELL.fullmatch(text):
        return None
    return int(text, 10)


def parse_response_file(
    data: bytes | str,
    instrument: SurveyInstrument,
    kind: ResponseKind,
    policy: MissingPolicy = MissingPolicy.DROP_ROW,
) -> tuple[ResponseSet, ValidationReport]:
    """Parse one CSV response file into a validated ResponseSet.

    Returns the set built from accepted rows plus a report enumerating every
    rejection.  Raises DataError on malformed CSV, header mismatch, zero
    accepted rows, or (with policy=fail) the first bad row.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DataError(f"response file is not valid UTF-8: {exc}") from None
    else:
        text = data

    try:
        rows = list(csv.reader(io.StringIO(text, newline="")))
    except csv.Error as exc:
        raise DataError(f"malformed CSV: {exc}") from None
    if not rows:
        raise DataError("empty response file")

    header = [cell.strip() for cell in rows[0]]
    expected = _expected_header(instrument, kind)
    if header != expected:
        raise DataError(
            f"header mismatch for {kind.value} file: expected "
            f"{','.join(expected)!r}, got {','.join(header)!r}"
        )
    n_cols = len(expected) - 1

    scale = instrument.scale
    accepted: list[list[int]] = []
    ids: list[str] = []
    errors: list[RowError] = []

    def reject(row_idx: int, column: str, code: str, message: str) -> None:
        err = RowError(row=row_idx, column=column, code=code, message=message)
        if policy is MissingPolicy.FAIL:
            raise DataError(f"row {row_idx}, column {column}: {message} [{code}]")
        errors.append(err)

    for row_idx, raw in enumerate(rows[1:], start=1):
        if not raw or all(not cell.strip() for cell in raw):
            continue  # ignore blank trailing lines
        if len(raw) != len(expected):
            reject(row_idx, "*", "row_length",
                   f"expected {len(expected)} fields, got {len(raw)}")
            continue
        respondent_id = raw[0].strip()
        values: list[int] = []
        bad = False
        for col_name, cell in zip(expected[1:], raw[1:]):
            value = _parse_int_cell(cell)
            if value is None:
                code = "missing" if not cell.strip() else "not_an_integer"
                reject(row_idx, col_name, code,
                       f"cell {cell.strip()!r} is not a plain integer")
                bad = True
                break
            values.append(value)
        if bad:
            continue
        if kind.is_likert:
            for col_name, value in zip(expected[1:], values):
                if value < scale.min or value > scale.max:
                    reject(row_idx, col_name, "out_of_range",
                           f"value {value} outside scale [{scale.min}, {scale.max}]")
                    bad = True
                    break
            if bad:
                continue
        else:
            violation = validate_importance_row(values)
            if violation is not None:
                messages = {
                    "sum_not_100": f"allocation sums to {sum(values)}, expected 100",
                    "out_of_range": "allocation values must lie in [0, 100]",
                    "not_multiple_of_five": "allocation values must be multiples of five",
                    "row_length": f"expected {n_cols} allocation values",
                }
                reject(row_idx, "*", violation, messages[violation])
                continue
        accepted.append(values)
        ids.append(respondent_id)

    if not accepted:
        raise DataError(f"no valid rows in {kind.value} file "
                        f"({len(errors)} rejected)")

    response_set = ResponseSet(
        kind=kind,
        instrument_ref=instrument.fingerprint(),
        values=np.array(accepted, dtype=np.int64),
        respondent_ids=tuple(ids),
    )
    report = ValidationReport(
        row_errors=tuple(errors),
        accepted_rows=len(accepted),
        rejected_rows=len(errors),
    )
    return response_set, report


def serialize_response_set(rs: ResponseSet, instrument: SurveyInstrument) -> bytes:
    """Render a ResponseSet back to its canonical CSV bytes (round-trips
    bit-exactly through parse_response_file)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_expected_header(instrument, rs.kind))
    for respondent_id, row in zip(rs.respondent_ids, rs.values):
        writer.writerow([respondent_id, *map(int, row)])
    return buf.getvalue().encode("utf-8")


def generate_synthetic(
    targets: Sequence[float],
    n_respondents: int,
    scale: LikertScale,
    seed: int = 0,
    kind: ResponseKind = ResponseKind.EXPECTATION,
    instrument_ref: str = "synthetic",
) -> ResponseSet:
    """Generate an integer response matrix whose column means hit the
    targets exactly.

    Each column starts at floor(target) and the residual sum is distributed
    one unit at a time to seeded-pseudorandomly chosen cells still below the
    scale maximum, so the column sum equals round(n * target) exactly.
    Requires every n * target to be integral (within 1e-6) and within
    [n * scale.min, n * scale.max].  Deterministic for a given seed.
    """
    if n_respondents < 1:
        raise DataError("n_respondents must be >= 1")
    if kind is ResponseKind.IMPORTANCE:
        raise DataError("synthetic generation covers Likert kinds only")
    rng = random.Random(seed)
    columns: list[list[int]] = []
    for col_idx, target in enumerate(targets, start=1):
        exact_sum = target * n_respondents
        col_sum = round(exact_sum)
        if abs(exact_sum - col_sum) > 1e-6:
            raise DataError(
                f"target mean {target!r} for column {col_idx} is infeasible: "
                f"{n_respondents} x mean = {exact_sum!r} is not an integer"
            )
        if col_sum < n_respondents * scale.min or col_sum > n_respondents * scale.max:
            raise DataError(
                f"target mean {target!r} for column {col_idx} is outside "
                f"the scale [{scale.min}, {scale.max}]"
            )
        base = min(scale.max, math.floor(target))
        cells = [base] * n_respondents
        residual = col_sum - base * n_respondents
        open_cells = [i for i in range(n_respondents) if cells[i] < scale.max]
        for _ in range(residual):
            pick = rng.randrange(len(open_cells))
            i = open_cells[pick]
            cells[i] += 1
            if cells[i] >= scale.max:
                open_cells[pick] = open_cells[-1]
                open_cells.pop()
        columns.append(cells)
    values = np.array(columns, dtype=np.int64).T
    ids = tuple(f"r{i:03d}" for i in range(1, n_respondents + 1))
    return ResponseSet(kind=kind, instrument_ref=instrument_ref,
                       values=values, respondent_ids=ids)
