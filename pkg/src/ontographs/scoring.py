"""Experiment metrics: four-category breakdowns, decision rate, correctness,
decision time, and per-statement exact binomial sign tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Iterable

from .logic import AnswerKey
from .world import FormatError

ANSWER_TRUE = "true"
ANSWER_FALSE = "false"
ANSWER_DONT_KNOW = "dont_know"
ANSWER_TIME_EXCEEDED = "time_exceeded"
ANSWERS = (ANSWER_TRUE, ANSWER_FALSE, ANSWER_DONT_KNOW, ANSWER_TIME_EXCEEDED)
DECISIONS = (ANSWER_TRUE, ANSWER_FALSE)


class ConsistencyError(ValueError):
    """The response log contradicts the answer key or its own invariants."""


@dataclass(frozen=True)
class ResponseRecord:
    session: str
    subject: str
    ontograph: str
    statement: str
    answer: str
    elapsed_ms: int | None = None


@dataclass(frozen=True)
class StatementScore:
    correct: int
    wrong: int
    dont_know: int
    time_exceeded: int
    p_value: float
    significant_at_05: bool


@dataclass(frozen=True)
class Aggregate:
    decision_rate: float
    correctness: float | None
    mean_decision_seconds: float | None
    n_subjects: int
    n_statements: int


@dataclass(frozen=True)
class ScoreReport:
    per_statement: dict[str, StatementScore]
    aggregate: Aggregate


def sign_test(correct: int, wrong: int, *, two_sided: bool = False) -> tuple[float, bool]:
    """Exact binomial sign test against a fair-coin null over decisions only.

    Default is one-sided (correct chosen more often than chance); pass
    two_sided=True for the doubled-tail variant.  No decisions means no
    evidence: p = 1.0.
    """
    if correct < 0 or wrong < 0:
        raise ValueError("counts must be nonnegative")
    n = correct + wrong
    if n == 0:
        return 1.0, False
    denom = 1 << n
    upper = sum(comb(n, k) for k in range(correct, n + 1))
    if two_sided:
        lower = sum(comb(n, k) for k in range(0, correct + 1))
        p = min(1.0, 2 * min(upper, lower) / denom)
    else:
        p = upper / denom
    return p, p < 0.05


def _check_record(record: ResponseRecord) -> None:
    if record.answer not in ANSWERS:
        raise ConsistencyError(f"bad answer {record.answer!r}")
    if record.answer == ANSWER_TIME_EXCEEDED:
        if record.elapsed_ms is not None:
            raise ConsistencyError("time_exceeded records carry no elapsed_ms")
    elif record.elapsed_ms is None or record.elapsed_ms < 0:
        raise ConsistencyError("answered records need a nonnegative elapsed_ms")


def score(responses: Iterable[ResponseRecord], key: AnswerKey,
          exclude: frozenset[str] | set[str] = frozenset(),
          *, two_sided: bool = False) -> ScoreReport:
    """Tally a response log against an answer key.

    Excluded statements contribute to neither the per-statement rows nor the
    aggregate figures.  A response naming a statement outside key+exclude, or
    a duplicate (subject, statement) pair, is a consistency error.
    """
    truths = key.truth_map()
    exclude = frozenset(exclude)
    counts: dict[str, dict[str, int]] = {
        sid: {"correct": 0, "wrong": 0, "dont_know": 0, "time_exceeded": 0}
        for sid, _ in key.entries if sid not in exclude
    }

    seen: set[tuple[str, str]] = set()
    subjects: set[str] = set()
    decisions = 0
    correct_total = 0
    slots = 0
    elapsed_total = 0
    for record in responses:
        _check_record(record)
        pair = (record.subject, record.statement)
        if pair in seen:
            raise ConsistencyError(f"duplicate answer: subject {record.subject!r} "
                                   f"statement {record.statement!r}")
        seen.add(pair)
        if record.statement in exclude:
            continue
        if record.statement not in truths:
            raise ConsistencyError(f"statement {record.statement!r} not in key or exclude set")
        slots += 1
        subjects.add(record.subject)
        row = counts[record.statement]
        if record.answer == ANSWER_DONT_KNOW:
            row["dont_know"] += 1
        elif record.answer == ANSWER_TIME_EXCEEDED:
            row["time_exceeded"] += 1
        else:
            decided_true = record.answer == ANSWER_TRUE
            if decided_true == truths[record.statement]:
                row["correct"] += 1
                correct_total += 1
            else:
                row["wrong"] += 1
            decisions += 1
            elapsed_total += record.elapsed_ms

    per_statement: dict[str, StatementScore] = {}
    for sid, row in counts.items():
        p, sig = sign_test(row["correct"], row["wrong"], two_sided=two_sided)
        per_statement[sid] = StatementScore(row["correct"], row["wrong"], row["dont_know"],
                                            row["time_exceeded"], p, sig)

    aggregate = Aggregate(
        decision_rate=decisions / slots if slots else 0.0,
        correctness=correct_total / decisions if decisions else None,
        mean_decision_seconds=elapsed_total / decisions / 1000.0 if decisions else None,
        n_subjects=len(subjects),
        n_statements=len(counts),
    )
    return ScoreReport(per_statement, aggregate)


# --- response log (newline-delimited JSON, append only) ----------------------------

_FIELDS = ("session", "subject", "ontograph", "statement", "answer", "elapsed_ms")


def response_to_dict(record: ResponseRecord) -> dict:
    doc = {
        "session": record.session,
        "subject": record.subject,
        "ontograph": record.ontograph,
        "statement": record.statement,
        "answer": record.answer,
    }
    if record.elapsed_ms is not None:
        doc["elapsed_ms"] = record.elapsed_ms
    return doc


def response_from_dict(doc: dict) -> ResponseRecord:
    if not isinstance(doc, dict):
        raise FormatError("response record: expected an object")
    for key in ("session", "subject", "ontograph", "statement", "answer"):
        if key not in doc or not isinstance(doc[key], str):
            raise FormatError(f"response record: missing or non-string {key!r}")
    for key in doc:
        if key not in _FIELDS:
            raise FormatError(f"response record: unknown key {key!r}")
    elapsed = doc.get("elapsed_ms")
    if elapsed is not None and (not isinstance(elapsed, int) or isinstance(elapsed, bool)):
        raise FormatError("response record: elapsed_ms must be an integer")
    return ResponseRecord(doc["session"], doc["subject"], doc["ontograph"],
                          doc["statement"], doc["answer"], elapsed)


def format_response_line(record: ResponseRecord) -> str:
    return json.dumps(response_to_dict(record), separators=(", ", ": ")) + "\n"


def read_response_log(path: str | Path) -> list[ResponseRecord]:
    out: list[ResponseRecord] = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"response log line {lineno}: invalid JSON: {exc}") from exc
        try:
            out.append(response_from_dict(doc))
        except FormatError as exc:
            raise FormatError(f"response log line {lineno}: {exc}") from exc
    return out


# --- report output -------------------------------------------------------------------

def report_to_dict(report: ScoreReport) -> dict:
    per = {}
    for sid, row in report.per_statement.items():
        per[sid] = {
            "correct": row.correct,
            "wrong": row.wrong,
            "dont_know": row.dont_know,
            "time_exceeded": row.time_exceeded,
            "p_value": row.p_value,
            "significant_at_05": row.significant_at_05,
        }
    agg: dict = {
        "decision_rate": report.aggregate.decision_rate,
        "n_subjects": report.aggregate.n_subjects,
        "n_statements": report.aggregate.n_statements,
    }
    if report.aggregate.correctness is not None:
        agg["correctness"] = report.aggregate.correctness
    if report.aggregate.mean_decision_seconds is not None:
        agg["mean_decision_seconds"] = report.aggregate.mean_decision_seconds
    return {"per_statement": per, "aggregate": agg}


def report_table(report: ScoreReport) -> str:
    """Tab-separated table, one statement per row, aggregate figures on the last line."""
    lines = ["statement\tcorrect\twrong\tdont_know\ttime_exceeded\tp_value\tsignificant"]
    for sid, row in report.per_statement.items():
        sig = "yes" if row.significant_at_05 else "no"
        lines.append(f"{sid}\t{row.correct}\t{row.wrong}\t{row.dont_know}"
                     f"\t{row.time_exceeded}\t{row.p_value:.6f}\t{sig}")
    agg = report.aggregate
    correctness = f"{agg.correctness:.4f}" if agg.correctness is not None else "NA"
    mean = f"{agg.mean_decision_seconds:.2f}" if agg.mean_decision_seconds is not None else "NA"
    lines.append(f"aggregate\tdecision_rate={agg.decision_rate:.4f}"
                 f"\tcorrectness={correctness}"
                 f"\tmean_decision_seconds={mean}"
                 f"\tn_subjects={agg.n_subjects}"
                 f"\tn_statements={agg.n_statements}")
    return "\n".join(lines) + "\n"
