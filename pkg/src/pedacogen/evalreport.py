"""Rating-study ingestion, descriptive statistics, and report tables.

Three CSV inputs: paired video ratings (participant x topic x condition x
item), usability scores (participant x item), and a demographics sidecar.
Reports follow the study's publication format: per-principle improvement
rows, per-topic rows for the overall-validity item, and two-group subgroup
comparisons.

A deliberate quirk, kept for fidelity with the published tables: the
printed improvement is the difference of the two already-rounded means,
not the rounded difference of the raw means.  The two disagree for several
rows, and only the former reproduces the published numbers.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from math import fsum

from .errors import DomainError
from .stats import (
    AllZeroDiffs,
    EmptyGroup,
    StatResult,
    mann_whitney_u,
    mean_sd,
    wilcoxon_signed_rank,
)

ITEMS = tuple(f"Q{i}" for i in range(1, 14))

ITEM_PRINCIPLES = {
    "Q1": "Multimedia",
    "Q2": "Coherence",
    "Q3": "Signaling",
    "Q4": "Redundancy",
    "Q5": "Spatial Contiguity",
    "Q6": "Temporal Contiguity",
    "Q7": "Segmenting",
    "Q8": "Pre-training",
    "Q9": "Modality",
    "Q10": "Personalization",
    "Q11": "Voice",
    "Q12": "Image",
    "Q13": "Overall Validity",
}

CONDITION_BASELINE = "baseline"
CONDITION_TREATMENT = "pedacogen"
CONDITIONS = (CONDITION_BASELINE, CONDITION_TREATMENT)

TOPICS = (1, 2, 3)
TOPIC_LABELS = {1: "causal", 2: "abstract", 3: "sequential"}

USABILITY_ITEMS = (
    "overall_satisfaction",
    "guide_validity",
    "intent_reflection",
    "production_efficiency",
    "intention_to_apply",
)

GENDERS = ("F", "M")
CAREER_BANDS = ("1+", "3+", "5+", "10+")
AI_USAGE_BANDS = ("rarely", "1-2/month", "1-2/week", "3+/week")

# two-group splits for the Mann-Whitney comparisons
PARTITIONS = {
    "gender": ("gender", {"F": "female", "M": "male"},
               ("female", "male"), lambda v: "female" if v == "F" else "male"),
    "career": ("career_band", None, ("junior", "senior"),
               lambda v: "junior" if v in ("1+", "3+") else "senior"),
    "ai_usage": ("ai_usage_band", None, ("infrequent", "frequent"),
                 lambda v: "infrequent" if v in ("rarely", "1-2/month") else "frequent"),
}

_TOKEN_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_-]*$")

RATINGS_HEADER = ("participant_id", "topic", "condition", "item", "score")
USABILITY_HEADER = ("participant_id", "item", "score")
DEMOGRAPHICS_HEADER = ("participant_id", "gender", "career_band", "ai_usage_band")


class EvalError(DomainError):
    code = "eval_error"


class BadHeader(EvalError):
    code = "bad_header"


class BadValue(EvalError):
    code = "bad_value"

    def __init__(self, message: str, row: int, column: str):
        super().__init__(message, detail={"row": row, "column": column})
        self.row = row
        self.column = column


class DuplicateRecord(EvalError):
    code = "duplicate_record"


class IncompleteDataset(EvalError):
    code = "incomplete_dataset"

    def __init__(self, message: str, missing: list):
        super().__init__(message, detail={"missing": missing})
        self.missing = missing


@dataclass(frozen=True, slots=True)
class RatingRecord:
    participant_id: str
    topic: int
    condition: str
    item: str
    score: int


@dataclass(frozen=True, slots=True)
class UsabilityRecord:
    participant_id: str
    item: str
    score: int


@dataclass(frozen=True, slots=True)
class DemographicRecord:
    participant_id: str
    gender: str
    career_band: str
    ai_usage_band: str


@dataclass(frozen=True, slots=True)
class DescriptiveRow:
    key: tuple
    mean: float
    sd: float
    n: int


@dataclass(frozen=True, slots=True)
class ImprovementRow:
    rank: int
    item: str
    principle: str
    baseline_mean: float
    treatment_mean: float
    improvement: float
    stat: StatResult | None  # None when every paired diff is zero


@dataclass(frozen=True, slots=True)
class TopicRow:
    topic: int
    label: str
    baseline_mean: float
    treatment_mean: float
    improvement: float
    stat: StatResult | None


@dataclass(frozen=True, slots=True)
class SubgroupRow:
    item: str
    group_a: str
    group_b: str
    n_a: int
    n_b: int
    stat: StatResult


def _rows(text: str, header: tuple[str, ...]):
    reader = csv.reader(io.StringIO(text))
    try:
        got = next(reader)
    except StopIteration:
        raise BadHeader("empty input; expected header " + ",".join(header))
    if [c.strip() for c in got] != list(header):
        raise BadHeader(
            f"expected header {','.join(header)}, got {','.join(got)}")
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            column = header[len(row)] if len(row) < len(header) else "extra"
            raise BadValue(f"row has {len(row)} fields, expected {len(header)}",
                           row=line, column=column)
        yield line, [c.strip() for c in row]


def _token(value: str, line: int, column: str) -> str:
    if not _TOKEN_RE.match(value):
        raise BadValue(f"{column} {value!r} is not a valid token",
                       row=line, column=column)
    return value


def _score(value: str, line: int) -> int:
    try:
        score = int(value)
    except ValueError:
        raise BadValue(f"score {value!r} is not an integer",
                       row=line, column="score")
    if not 1 <= score <= 5:
        raise BadValue(f"score {score} outside 1..5", row=line, column="score")
    return score


def _choice(value: str, allowed, line: int, column: str) -> str:
    if value not in allowed:
        raise BadValue(
            f"{column} {value!r} not one of {', '.join(allowed)}",
            row=line, column=column)
    return value


def ingest_ratings(text: str) -> tuple[RatingRecord, ...]:
    records = []
    seen = set()
    for line, row in _rows(text, RATINGS_HEADER):
        pid = _token(row[0], line, "participant_id")
        try:
            topic = int(row[1])
        except ValueError:
            raise BadValue(f"topic {row[1]!r} is not an integer",
                           row=line, column="topic")
        if topic not in TOPICS:
            raise BadValue(f"topic {topic} outside 1..3",
                           row=line, column="topic")
        condition = _choice(row[2], CONDITIONS, line, "condition")
        item = _choice(row[3], ITEMS, line, "item")
        score = _score(row[4], line)
        key = (pid, topic, condition, item)
        if key in seen:
            raise DuplicateRecord(
                f"duplicate rating for {pid} topic {topic} {condition} {item}",
                detail={"row": line})
        seen.add(key)
        records.append(RatingRecord(pid, topic, condition, item, score))
    return tuple(records)


def ingest_usability(text: str) -> tuple[UsabilityRecord, ...]:
    records = []
    seen = set()
    for line, row in _rows(text, USABILITY_HEADER):
        pid = _token(row[0], line, "participant_id")
        item = _choice(row[1], USABILITY_ITEMS, line, "item")
        score = _score(row[2], line)
        if (pid, item) in seen:
            raise DuplicateRecord(f"duplicate usability score for {pid} {item}",
                                  detail={"row": line})
        seen.add((pid, item))
        records.append(UsabilityRecord(pid, item, score))
    return tuple(records)


def ingest_demographics(text: str) -> tuple[DemographicRecord, ...]:
    records = []
    seen = set()
    for line, row in _rows(text, DEMOGRAPHICS_HEADER):
        pid = _token(row[0], line, "participant_id")
        gender = _choice(row[1], GENDERS, line, "gender")
        career = _choice(row[2], CAREER_BANDS, line, "career_band")
        usage = _choice(row[3], AI_USAGE_BANDS, line, "ai_usage_band")
        if pid in seen:
            raise DuplicateRecord(f"duplicate demographics for {pid}",
                                  detail={"row": line})
        seen.add(pid)
        records.append(DemographicRecord(pid, gender, career, usage))
    return tuple(records)


def descriptive(records, group_by) -> list[DescriptiveRow]:
    """Mean and sample SD per group; group_by names record fields."""
    if isinstance(group_by, str):
        group_by = (group_by,)
    groups: dict[tuple, list[int]] = {}
    for record in records:
        key = tuple(getattr(record, field) for field in group_by)
        groups.setdefault(key, []).append(record.score)
    rows = []
    for key in sorted(groups, key=lambda k: tuple(map(str, k))):
        scores = groups[key]
        mean, sd = mean_sd(scores)
        rows.append(DescriptiveRow(key=key, mean=mean, sd=sd, n=len(scores)))
    return rows


def round2(value: float) -> Decimal:
    # half away from zero; shortest-repr Decimal is exact for the rational
    # means that occur here (never within float error of a .xx5 boundary)
    return Decimal(str(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)


def format_mean(value: float) -> str:
    return str(round2(value))


def format_improvement(delta: Decimal) -> str:
    if delta == 0:
        return "0.00"
    return ("+" if delta > 0 else "") + str(delta)


def format_p(p: float) -> str:
    if p < 0.01:
        return "< .01"
    text = f"{p:.3f}"
    return text[1:] if text.startswith("0") else text


def format_r(r: float) -> str:
    text = f"{abs(r):.2f}"
    sign = "-" if r < 0 else ""
    return sign + (text[1:] if text.startswith("0") else text)


def _pivot(records) -> dict[str, dict[str, dict[str, dict[int, int]]]]:
    # participant -> item -> condition -> topic -> score
    table: dict = {}
    for r in records:
        table.setdefault(r.participant_id, {}).setdefault(
            r.item, {}).setdefault(r.condition, {})[r.topic] = r.score
    return table


def _require_complete(table, items) -> None:
    missing = []
    for pid in sorted(table):
        for item in items:
            for condition in CONDITIONS:
                present = table[pid].get(item, {}).get(condition, {})
                for topic in TOPICS:
                    if topic not in present:
                        missing.append(
                            {"participant_id": pid, "item": item,
                             "condition": condition, "topic": topic})
    if missing:
        raise IncompleteDataset(
            f"{len(missing)} rating cells missing", missing=missing)


def _paired_stat(diffs) -> StatResult | None:
    try:
        return wilcoxon_signed_rank(diffs)
    except AllZeroDiffs:
        return None


def improvement_table(records) -> tuple[ImprovementRow, ...]:
    """One row per item: means over every rating, test over participants.

    The test pairs each participant's per-condition mean across the three
    topics, so n pairs == number of participants.
    """
    table = _pivot(records)
    if not table:
        raise IncompleteDataset("no rating records", missing=[])
    _require_complete(table, ITEMS)
    participants = sorted(table)

    unranked = []
    for item in ITEMS:
        base_cells, treat_cells, diffs = [], [], []
        for pid in participants:
            base = [table[pid][item][CONDITION_BASELINE][t] for t in TOPICS]
            treat = [table[pid][item][CONDITION_TREATMENT][t] for t in TOPICS]
            base_cells.extend(base)
            treat_cells.extend(treat)
            diffs.append(fsum(treat) / 3 - fsum(base) / 3)
        base_mean = fsum(base_cells) / len(base_cells)
        treat_mean = fsum(treat_cells) / len(treat_cells)
        improvement = round2(treat_mean) - round2(base_mean)
        unranked.append((item, base_mean, treat_mean, improvement,
                         _paired_stat(diffs)))

    unranked.sort(key=lambda row: (-row[3], int(row[0][1:])))
    return tuple(
        ImprovementRow(
            rank=i,
            item=item,
            principle=ITEM_PRINCIPLES[item],
            baseline_mean=float(round2(base_mean)),
            treatment_mean=float(round2(treat_mean)),
            improvement=float(improvement),
            stat=stat,
        )
        for i, (item, base_mean, treat_mean, improvement, stat)
        in enumerate(unranked, start=1)
    )


def topic_table(records, item: str = "Q13") -> tuple[TopicRow, ...]:
    """One row per topic for a single item; pairs are raw per-topic scores."""
    if item not in ITEMS:
        raise BadValue(f"unknown item {item!r}", row=0, column="item")
    table = _pivot(records)
    if not table:
        raise IncompleteDataset("no rating records", missing=[])
    _require_complete(table, (item,))
    participants = sorted(table)

    rows = []
    for topic in TOPICS:
        base = [table[pid][item][CONDITION_BASELINE][topic]
                for pid in participants]
        treat = [table[pid][item][CONDITION_TREATMENT][topic]
                 for pid in participants]
        base_mean = fsum(base) / len(base)
        treat_mean = fsum(treat) / len(treat)
        improvement = round2(treat_mean) - round2(base_mean)
        diffs = [t - b for t, b in zip(treat, base)]
        rows.append(TopicRow(
            topic=topic,
            label=TOPIC_LABELS[topic],
            baseline_mean=float(round2(base_mean)),
            treatment_mean=float(round2(treat_mean)),
            improvement=float(improvement),
            stat=_paired_stat(diffs),
        ))
    return tuple(rows)


def subgroup_compare(records, demographics, partition: str,
                     condition: str = CONDITION_TREATMENT) -> tuple[SubgroupRow, ...]:
    """Mann-Whitney per item between the two demographic groups.

    Rating records contribute each participant's across-topic mean for the
    given condition; usability records contribute their single score.
    """
    if partition not in PARTITIONS:
        raise BadValue(f"unknown partition {partition!r}",
                       row=0, column="partition")
    field, _, (label_a, label_b), classify = PARTITIONS[partition]
    group_of = {d.participant_id: classify(getattr(d, field))
                for d in demographics}

    per_item: dict[str, dict[str, list[float]]] = {}
    records = list(records)
    if records and isinstance(records[0], RatingRecord):
        table = _pivot(records)
        for pid, items in table.items():
            if pid not in group_of:
                raise BadValue(f"participant {pid} missing from demographics",
                               row=0, column="participant_id")
            for item, conditions in items.items():
                scores = list(conditions.get(condition, {}).values())
                if not scores:
                    continue
                value = fsum(scores) / len(scores)
                per_item.setdefault(item, {}).setdefault(
                    group_of[pid], []).append(value)
        item_order = [i for i in ITEMS if i in per_item]
    else:
        for record in records:
            if record.participant_id not in group_of:
                raise BadValue(
                    f"participant {record.participant_id} missing from demographics",
                    row=0, column="participant_id")
            per_item.setdefault(record.item, {}).setdefault(
                group_of[record.participant_id], []).append(record.score)
        item_order = [i for i in USABILITY_ITEMS if i in per_item]

    rows = []
    for item in item_order:
        groups = per_item[item]
        a = groups.get(label_a, [])
        b = groups.get(label_b, [])
        if not a or not b:
            raise EmptyGroup(
                f"partition {partition} leaves an empty side for {item}")
        rows.append(SubgroupRow(
            item=item, group_a=label_a, group_b=label_b,
            n_a=len(a), n_b=len(b), stat=mann_whitney_u(a, b)))
    return tuple(rows)


def _stat_cells(stat: StatResult | None) -> tuple[str, str, str, str]:
    if stat is None:
        return "n.s.", "", "undefined", "undefined"
    return (format_p(stat.p_value), "*" if stat.significant else "",
            format_r(stat.effect_r), stat.effect_label)


def _render_columns(header: list[str], body: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in body:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = []
    for row in [header] + body:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def render_improvement_table(rows) -> str:
    header = ["Rank", "Principle", "Baseline", "PedaCo-Gen", "Improvement",
              "p", "Sig.", "r", "Effect"]
    body = []
    for row in rows:
        p, sig, r, label = _stat_cells(row.stat)
        body.append([
            str(row.rank), row.principle,
            format_mean(row.baseline_mean), format_mean(row.treatment_mean),
            format_improvement(round2(row.improvement)),
            p, sig, r, label,
        ])
    return _render_columns(header, body)


def render_topic_table(rows) -> str:
    header = ["Topic", "Type", "Baseline", "PedaCo-Gen", "Improvement",
              "p", "Sig."]
    body = []
    for row in rows:
        p, sig, _, _ = _stat_cells(row.stat)
        body.append([
            f"Topic {row.topic}", row.label,
            format_mean(row.baseline_mean), format_mean(row.treatment_mean),
            format_improvement(round2(row.improvement)), p, sig,
        ])
    return _render_columns(header, body)


def render_subgroup_table(rows) -> str:
    header = ["Item", "Groups", "n", "U", "p", "Sig.", "r", "Effect"]
    body = []
    for row in rows:
        p, sig, r, label = _stat_cells(row.stat)
        body.append([
            row.item, f"{row.group_a} vs {row.group_b}",
            f"{row.n_a}/{row.n_b}", format_mean(row.stat.statistic),
            p, sig, r, label,
        ])
    return _render_columns(header, body)


def render_descriptives(rows) -> str:
    header = ["Group", "M (SD)", "n"]
    body = [["/".join(map(str, row.key)),
             f"{format_mean(row.mean)} ({format_mean(row.sd)})",
             str(row.n)] for row in rows]
    return _render_columns(header, body)


def _stat_json(stat: StatResult | None) -> dict:
    if stat is None:
        return {"p_value": None, "p_display": "n.s.", "effect_r": None,
                "effect_label": "undefined", "significant": False,
                "note": "all_zero_diffs"}
    return {"p_value": stat.p_value, "p_display": format_p(stat.p_value),
            "effect_r": stat.effect_r, "effect_label": stat.effect_label,
            "significant": stat.significant, "method": stat.method,
            "statistic": stat.statistic, "n_effective": stat.n_effective}


def improvement_rows_json(rows) -> list[dict]:
    return [{
        "rank": row.rank, "item": row.item, "principle": row.principle,
        "baseline_mean": row.baseline_mean,
        "pedacogen_mean": row.treatment_mean,
        "improvement": row.improvement,
        "improvement_display": format_improvement(round2(row.improvement)),
        **_stat_json(row.stat),
    } for row in rows]


def topic_rows_json(rows) -> list[dict]:
    return [{
        "topic": row.topic, "label": row.label,
        "baseline_mean": row.baseline_mean,
        "pedacogen_mean": row.treatment_mean,
        "improvement": row.improvement,
        "improvement_display": format_improvement(round2(row.improvement)),
        **_stat_json(row.stat),
    } for row in rows]


def subgroup_rows_json(rows) -> list[dict]:
    return [{
        "item": row.item, "group_a": row.group_a, "group_b": row.group_b,
        "n_a": row.n_a, "n_b": row.n_b, **_stat_json(row.stat),
    } for row in rows]


def descriptive_rows_json(rows) -> list[dict]:
    return [{"key": list(row.key), "mean": row.mean, "sd": row.sd, "n": row.n}
            for row in rows]
