"""ODI match records: CSV ingestion, validation, four-case classification,
and venue summary tables.

A decisive full-length match contributes exactly two labeled score
observations: the winner's innings total and the loser's innings total, each
tagged by batting order. Ties, no-results, and reduced-overs matches are
excluded from every sample so the four cases stay comparable.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import math
import os
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable, Mapping, Sequence, Union

from .errors import (
    DuplicateMatchId,
    EmptyVenue,
    InconsistentOutcome,
    MalformedRow,
    UnknownVenue,
)

CSV_HEADER = (
    "match_id",
    "venue",
    "date",
    "first_innings_runs",
    "second_innings_runs",
    "outcome",
    "reduced_overs",
)

#: Sentinel venue key under which all venues are pooled. Reserved: input rows
#: may not use it as a venue name.
OVERALL_VENUE = "overall"


class Outcome(str, Enum):
    BAT_FIRST_WIN = "BatFirstWin"
    BAT_SECOND_WIN = "BatSecondWin"
    TIE = "Tie"
    NO_RESULT = "NoResult"


class CaseLabel(str, Enum):
    """The four experimental cases a decisive innings score falls into."""

    BAT_FIRST_WIN = "BatFirstWin"
    BAT_FIRST_LOSE = "BatFirstLose"
    BAT_SECOND_WIN = "BatSecondWin"
    BAT_SECOND_LOSE = "BatSecondLose"


@dataclass(frozen=True)
class MatchRecord:
    match_id: str
    venue: str
    date: dt.date | None
    first_innings_runs: int
    second_innings_runs: int
    outcome: Outcome
    reduced_overs: bool

    def __post_init__(self):
        if not self.match_id:
            raise MalformedRow("match_id must be non-empty")
        if not self.venue or self.venue != self.venue.strip():
            raise MalformedRow(f"venue must be non-empty and trimmed, got {self.venue!r}")
        if self.venue.casefold() == OVERALL_VENUE:
            raise MalformedRow(f"venue name {OVERALL_VENUE!r} is reserved for the pooled entry")
        if self.first_innings_runs < 0 or self.second_innings_runs < 0:
            raise MalformedRow("innings runs must be non-negative")
        first, second = self.first_innings_runs, self.second_innings_runs
        if self.outcome is Outcome.BAT_FIRST_WIN and not second < first:
            raise InconsistentOutcome(
                f"outcome {self.outcome.value} requires second innings ({second}) "
                f"below first ({first})"
            )
        if self.outcome is Outcome.BAT_SECOND_WIN and not second > first:
            raise InconsistentOutcome(
                f"outcome {self.outcome.value} requires second innings ({second}) "
                f"above first ({first})"
            )
        if self.outcome is Outcome.TIE and first != second:
            raise InconsistentOutcome(f"tie requires equal scores, got {first} and {second}")

    @property
    def decisive(self) -> bool:
        return self.outcome in (Outcome.BAT_FIRST_WIN, Outcome.BAT_SECOND_WIN)


@dataclass(frozen=True)
class CaseSample:
    """All scores observed for one case at one venue, stored sorted."""

    venue: str
    case: CaseLabel
    scores: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.scores)

    @property
    def mean(self) -> float:
        if not self.scores:
            return math.nan
        return sum(self.scores) / len(self.scores)


#: Map from venue (plus the pooled OVERALL_VENUE entry) to its four samples.
CategorizedScores = Mapping[str, Mapping[CaseLabel, CaseSample]]


@dataclass(frozen=True)
class SummaryRow:
    """One venue line of the summary table. Percentages and averages keep
    full precision; rounding happens only at display time."""

    venue: str
    total_matches: int
    pct_bat_first_win: float
    avg_bat_first_win: float
    avg_bat_second_lose: float
    pct_bat_second_win: float
    avg_bat_second_win: float
    avg_bat_first_lose: float


Source = Union[str, os.PathLike, IO[bytes], IO[str]]


def parse_matches(source: Source) -> list[MatchRecord]:
    """Parse match records from CSV.

    source may be a filesystem path or an open binary/text stream. Every row
    is validated against the record invariants; the first offending row
    raises MalformedRow, InconsistentOutcome, or DuplicateMatchId with its
    line number.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return _parse_stream(handle)
    if isinstance(source, io.TextIOBase):
        return _parse_stream(source)
    text = io.TextIOWrapper(source, encoding="utf-8", newline="")
    try:
        return _parse_stream(text)
    finally:
        text.detach()


def _parse_stream(stream: IO[str]) -> list[MatchRecord]:
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedRow("missing header", row=1) from None
    if tuple(header) != CSV_HEADER:
        raise MalformedRow(f"header must be exactly {','.join(CSV_HEADER)}", row=1)

    records: list[MatchRecord] = []
    seen: set[str] = set()
    for fields in reader:
        if not fields:
            continue
        line = reader.line_num
        record = _parse_row(fields, line)
        if record.match_id in seen:
            raise DuplicateMatchId(f"match_id {record.match_id!r} already seen", row=line)
        seen.add(record.match_id)
        records.append(record)
    return records


def _parse_row(fields: Sequence[str], line: int) -> MatchRecord:
    if len(fields) != len(CSV_HEADER):
        raise MalformedRow(f"expected {len(CSV_HEADER)} fields, got {len(fields)}", row=line)
    match_id, venue, date_text, first_text, second_text, outcome_text, reduced_text = fields

    date: dt.date | None = None
    if date_text:
        try:
            date = dt.date.fromisoformat(date_text)
        except ValueError:
            raise MalformedRow(f"date must be ISO-8601 or empty, got {date_text!r}", row=line)

    runs = []
    for label, text in (("first_innings_runs", first_text), ("second_innings_runs", second_text)):
        try:
            value = int(text)
        except ValueError:
            raise MalformedRow(f"{label} must be an integer, got {text!r}", row=line)
        if value < 0:
            raise MalformedRow(f"{label} must be non-negative, got {value}", row=line)
        runs.append(value)

    try:
        outcome = Outcome(outcome_text)
    except ValueError:
        raise MalformedRow(
            f"outcome must be one of {[o.value for o in Outcome]}, got {outcome_text!r}",
            row=line,
        )
    if reduced_text not in ("true", "false"):
        raise MalformedRow(f"reduced_overs must be true or false, got {reduced_text!r}", row=line)

    try:
        return MatchRecord(
            match_id=match_id,
            venue=venue.strip(),
            date=date,
            first_innings_runs=runs[0],
            second_innings_runs=runs[1],
            outcome=outcome,
            reduced_overs=reduced_text == "true",
        )
    except (MalformedRow, InconsistentOutcome) as exc:
        raise type(exc)(str(exc), row=line) from None


def serialize_matches(records: Iterable[MatchRecord]) -> str:
    """CSV text that parse_matches reads back into an identical record list."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(
            [
                rec.match_id,
                rec.venue,
                rec.date.isoformat() if rec.date else "",
                rec.first_innings_runs,
                rec.second_innings_runs,
                rec.outcome.value,
                "true" if rec.reduced_overs else "false",
            ]
        )
    return out.getvalue()


def categorize(records: Sequence[MatchRecord]) -> dict[str, dict[CaseLabel, CaseSample]]:
    """Classify innings scores into the four cases, per venue and pooled.

    Ties, no-results, and reduced-overs matches are excluded. Venues are
    matched case-insensitively after trimming; a venue seen only through
    excluded matches still appears, with empty samples. Scores are stored
    sorted, so the result is invariant under input permutation.
    """
    display: dict[str, str] = {}
    scores: dict[str, dict[CaseLabel, list[int]]] = {}
    for rec in records:
        key = rec.venue.casefold()
        prior = display.get(key)
        if prior is None or rec.venue < prior:
            display[key] = rec.venue  # deterministic spelling: lexicographic min
        scores.setdefault(key, {label: [] for label in CaseLabel})

    for rec in records:
        if not rec.decisive or rec.reduced_overs:
            continue
        venue_scores = scores[rec.venue.casefold()]
        if rec.outcome is Outcome.BAT_FIRST_WIN:
            venue_scores[CaseLabel.BAT_FIRST_WIN].append(rec.first_innings_runs)
            venue_scores[CaseLabel.BAT_SECOND_LOSE].append(rec.second_innings_runs)
        else:
            venue_scores[CaseLabel.BAT_SECOND_WIN].append(rec.second_innings_runs)
            venue_scores[CaseLabel.BAT_FIRST_LOSE].append(rec.first_innings_runs)

    dataset: dict[str, dict[CaseLabel, CaseSample]] = {}
    pooled: dict[CaseLabel, list[int]] = {label: [] for label in CaseLabel}
    for key in sorted(scores, key=lambda k: display[k]):
        name = display[key]
        dataset[name] = {
            label: CaseSample(name, label, tuple(sorted(values)))
            for label, values in scores[key].items()
        }
        for label, values in scores[key].items():
            pooled[label].extend(values)
    if records:
        dataset[OVERALL_VENUE] = {
            label: CaseSample(OVERALL_VENUE, label, tuple(sorted(values)))
            for label, values in pooled.items()
        }
    return dataset


def venue_names(dataset: CategorizedScores) -> list[str]:
    """Venue keys sorted by name, with the pooled entry last."""
    names = sorted(v for v in dataset if v != OVERALL_VENUE)
    if OVERALL_VENUE in dataset:
        names.append(OVERALL_VENUE)
    return names


def resolve_venue(dataset: CategorizedScores, venue: str) -> str:
    """Find the dataset key matching a venue name, case-insensitively."""
    wanted = venue.strip().casefold()
    for key in dataset:
        if key.casefold() == wanted:
            return key
    raise UnknownVenue(f"venue {venue!r} not present in the dataset")


def decisive_match_count(samples: Mapping[CaseLabel, CaseSample]) -> int:
    return samples[CaseLabel.BAT_FIRST_WIN].size + samples[CaseLabel.BAT_SECOND_WIN].size


def summarize(
    dataset: CategorizedScores, venues: Sequence[str] | None = None
) -> list[SummaryRow]:
    """Build summary rows (per venue plus pooled), sorted by venue name.

    With venues=None, venues without decisive matches are omitted; naming one
    explicitly raises EmptyVenue instead.
    """
    if venues is None:
        selected = venue_names(dataset)
        required = False
    else:
        selected = [resolve_venue(dataset, v) for v in venues]
        required = True

    rows = []
    for name in selected:
        samples = dataset[name]
        n_first = samples[CaseLabel.BAT_FIRST_WIN].size
        n_second = samples[CaseLabel.BAT_SECOND_WIN].size
        total = n_first + n_second
        if total == 0:
            if required:
                raise EmptyVenue(f"venue {name!r} has no decisive full-length matches")
            continue
        rows.append(
            SummaryRow(
                venue=name,
                total_matches=total,
                pct_bat_first_win=100.0 * n_first / total,
                avg_bat_first_win=samples[CaseLabel.BAT_FIRST_WIN].mean,
                avg_bat_second_lose=samples[CaseLabel.BAT_SECOND_LOSE].mean,
                pct_bat_second_win=100.0 * n_second / total,
                avg_bat_second_win=samples[CaseLabel.BAT_SECOND_WIN].mean,
                avg_bat_first_lose=samples[CaseLabel.BAT_FIRST_LOSE].mean,
            )
        )
    return rows


def round_half_away(x: float, ndigits: int = 0) -> float:
    """Round half away from zero, the convention used for displayed values."""
    scale = 10**ndigits
    if x >= 0:
        value = math.floor(x * scale + 0.5) / scale
    else:
        value = math.ceil(x * scale - 0.5) / scale
    return value if ndigits > 0 else int(value)


def _display_avg(x: float) -> int | None:
    return None if math.isnan(x) else round_half_away(x)


def _display_row(row: SummaryRow) -> dict:
    return {
        "venue": row.venue,
        "total_matches": row.total_matches,
        "pct_bat_first_win": round_half_away(row.pct_bat_first_win, 1),
        "avg_bat_first_win": _display_avg(row.avg_bat_first_win),
        "avg_bat_second_lose": _display_avg(row.avg_bat_second_lose),
        "pct_bat_second_win": round_half_away(row.pct_bat_second_win, 1),
        "avg_bat_second_win": _display_avg(row.avg_bat_second_win),
        "avg_bat_first_lose": _display_avg(row.avg_bat_first_lose),
    }


def summary_to_csv(rows: Sequence[SummaryRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_display_row(rows[0]).keys() if rows else SummaryRow.__dataclass_fields__)
    for row in rows:
        display = _display_row(row)
        writer.writerow(
            ["" if v is None else f"{v:.1f}" if isinstance(v, float) else v for v in display.values()]
        )
    return out.getvalue()


def summary_to_json(rows: Sequence[SummaryRow]) -> str:
    return json.dumps([_display_row(row) for row in rows], indent=2)
