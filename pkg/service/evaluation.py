# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 17:05
# @File    : evaluation.py
# @Software: PyCharm
import enum
import os
from collections import Counter, OrderedDict, defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from config import config
from service.schema import (DOC_ID_COLUMN, ELAPSED_COLUMN, NOT_REPORTED, ExtractionRecord, ExtractionSchema, Value,
                            default_schema, format_value, read_table)
from service.statistics import (McNemarResult, MeanEstimate, NonInferiorityResult, PairedOutcomes, PairedTTestResult,
                                ProportionEstimate, mcnemar, mean_ci, noninferiority, paired_t_test, wilson_interval)
from utils.LogHandler import log
from utils.exceptions import (InputFormatError, LengthMismatch, NoDiscordantPairs, TooFewSamples, UnresolvedTruth,
                              WrongArity, ZeroVariance)

"""
评估：三名人工抽取员的共识 ground truth、准确率及置信区间、配对比较、时间统计和报告输出

datapoint 指 (doc_id, variable)，199 份报告 x 14 个变量 = 2786 个 datapoint
"""

Datapoint = Tuple[str, str]

ABSTRACTOR_COLUMN = 'abstractor_id'
VARIABLE_COLUMN = 'variable'
VALUE_COLUMN = 'value'
TRUTH_COLUMN = 'truth'
PROVENANCE_COLUMN = 'provenance'
LONG_COLUMNS = [ABSTRACTOR_COLUMN, DOC_ID_COLUMN, VARIABLE_COLUMN, VALUE_COLUMN, ELAPSED_COLUMN]


class Provenance(str, enum.Enum):
    UNANIMOUS = 'unanimous'
    MAJORITY = 'majority'
    ADJUDICATED = 'adjudicated'
    FOURTH_REVIEWER = 'fourth-reviewer'


@dataclass(frozen=True)
class AbstractorResponse:
    abstractor_id: str
    doc_id: str
    variable: str
    value: Value
    elapsed: Optional[float] = None


@dataclass(frozen=True)
class GroundTruthCell:
    """truth 为 None 表示三人意见都不同，等待第四名审阅者"""
    doc_id: str
    variable: str
    truth: Optional[Value]
    provenance: Provenance

    def __post_init__(self):
        if (self.truth is None) != (self.provenance is Provenance.FOURTH_REVIEWER):
            raise ValueError('truth is unresolved exactly when the cell waits for a fourth reviewer')

    @property
    def key(self) -> Datapoint:
        return self.doc_id, self.variable

    @property
    def resolved(self):
        return self.truth is not None


@dataclass
class Ratings:
    """一个评分者（人工或工具）的全部回答，times 为每份报告的用时"""
    rater_id: str
    values: Dict[Datapoint, Value] = field(default_factory=dict)
    times: Dict[str, float] = field(default_factory=dict)

    def value(self, key: Datapoint) -> Value:
        return self.values.get(key, NOT_REPORTED)

    @property
    def doc_ids(self) -> List[str]:
        return sorted({doc_id for doc_id, _ in self.values})


# ---------------------------------------------------------------------------
# 共识
# ---------------------------------------------------------------------------

def consensus(values: Sequence[Value], doc_id: str = '', variable: str = '') -> GroundTruthCell:
    if len(values) != 3:
        raise WrongArity(f'{doc_id}/{variable}: consensus needs 3 responses, got {len(values)}')
    value, count = Counter(values).most_common(1)[0]
    if count == 3:
        return GroundTruthCell(doc_id, variable, value, Provenance.UNANIMOUS)
    if count == 2:
        return GroundTruthCell(doc_id, variable, value, Provenance.MAJORITY)
    return GroundTruthCell(doc_id, variable, None, Provenance.FOURTH_REVIEWER)


def _ordered(keys, schema: ExtractionSchema):
    position = {name: i for i, name in enumerate(schema.names)}
    return sorted(keys, key=lambda k: (k[0], position.get(k[1], len(position)), k[1]))


def build_ground_truth(abstractors: Sequence[Ratings], overrides: Optional[Mapping[Datapoint, Value]] = None,
                       schema: Optional[ExtractionSchema] = None) -> 'OrderedDict[Datapoint, GroundTruthCell]':
    """三名抽取员逐个 datapoint 取共识，再用人工裁定文件覆盖"""
    if len(abstractors) != 3:
        raise WrongArity(f'consensus needs exactly 3 abstractors, got {len(abstractors)}')
    schema = schema or default_schema()
    overrides = dict(overrides or {})
    keys = set()
    for rater in abstractors:
        keys.update(rater.values)
    truth = OrderedDict()
    for key in _ordered(keys, schema):
        missing = [r.rater_id for r in abstractors if key not in r.values]
        if missing:
            raise WrongArity(f'{key[0]}/{key[1]}: no response from {", ".join(missing)}')
        cell = consensus([r.values[key] for r in abstractors], *key)
        if key in overrides:
            cell = GroundTruthCell(key[0], key[1], overrides.pop(key), Provenance.ADJUDICATED)
        truth[key] = cell
    for doc_id, variable in overrides:
        log.warning(f'裁定文件中的 {doc_id}/{variable} 不在任何抽取员的回答中，忽略')
    counts = Counter(cell.provenance.value for cell in truth.values())
    log.info(f'ground truth: {len(truth)} 个 datapoint, {dict(counts)}')
    return truth


def truth_from_ratings(ratings: Ratings, schema: Optional[ExtractionSchema] = None
                       ) -> 'OrderedDict[Datapoint, GroundTruthCell]':
    """直接给出 truth 文件时每个 datapoint 都视为已裁定"""
    schema = schema or default_schema()
    truth = OrderedDict()
    for key in _ordered(ratings.values, schema):
        truth[key] = GroundTruthCell(key[0], key[1], ratings.values[key], Provenance.ADJUDICATED)
    return truth


# ---------------------------------------------------------------------------
# 准确率与配对结果
# ---------------------------------------------------------------------------

def _check_aligned(*columns):
    lengths = {len(column) for column in columns}
    if len(lengths) != 1:
        raise LengthMismatch(f'columns have different lengths: {sorted(lengths)}')
    if lengths == {0}:
        raise LengthMismatch('no datapoints to score')


def _check_resolved(truth):
    if any(t is None for t in truth):
        raise UnresolvedTruth('ground truth still has unresolved cells')


def accuracy(predicted: Sequence[Value], truth: Sequence[Value], confidence: float = 0.95) -> ProportionEstimate:
    """NotReported 只和 NotReported 相等"""
    _check_aligned(predicted, truth)
    _check_resolved(truth)
    correct = sum(1 for p, t in zip(predicted, truth) if p == t)
    return wilson_interval(correct, len(truth), confidence)


def paired_outcomes(a: Sequence[Value], b: Sequence[Value], truth: Sequence[Value]) -> PairedOutcomes:
    _check_aligned(a, b, truth)
    _check_resolved(truth)
    cells = Counter((x == t, y == t) for x, y, t in zip(a, b, truth))
    return PairedOutcomes(n11=cells[(True, True)], n10=cells[(True, False)], n01=cells[(False, True)],
                          n00=cells[(False, False)])


# ---------------------------------------------------------------------------
# 报告
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RaterComparison:
    candidate: str
    comparator: str
    outcomes: PairedOutcomes
    mcnemar: Optional[McNemarResult]
    noninferiority: NonInferiorityResult
    superiority_alpha: float = config.superiority_alpha
    time_test: Optional[PairedTTestResult] = None
    time_note: str = ''

    @property
    def significant(self):
        return self.mcnemar is not None and self.mcnemar.p_value < self.superiority_alpha

    @property
    def label(self):
        return f'{self.candidate} vs {self.comparator}'


@dataclass
class EvalReport:
    datapoints: List[Datapoint]
    excluded: List[Datapoint]
    overall: Dict[str, ProportionEstimate]
    per_variable: Dict[str, Dict[str, ProportionEstimate]]
    above_threshold: Dict[str, int]
    comparisons: List[RaterComparison]
    timing: Dict[str, MeanEstimate]
    pooled_human_timing: Optional[MeanEstimate] = None
    speedup: Optional[float] = None
    threshold: float = config.accuracy_threshold
    truth: Mapping[Datapoint, GroundTruthCell] = field(default_factory=OrderedDict)

    @property
    def n(self):
        return len(self.datapoints)


def _timing(ratings: Ratings, doc_ids) -> Optional[MeanEstimate]:
    times = [ratings.times[d] for d in doc_ids if d in ratings.times]
    try:
        return mean_ci(times)
    except TooFewSamples:
        return None


def compare_ratings(candidate: Ratings, comparator: Ratings, keys: Sequence[Datapoint], truth: Sequence[Value],
                    margin: float = config.noninferiority_margin, alpha: float = config.noninferiority_alpha,
                    superiority_alpha: float = config.superiority_alpha) -> RaterComparison:
    outcomes = paired_outcomes([candidate.value(k) for k in keys], [comparator.value(k) for k in keys], truth)
    try:
        test = mcnemar(outcomes)
    except NoDiscordantPairs:
        test = None
    verdict = noninferiority(outcomes, margin=margin, alpha=alpha)

    time_test, note = None, ''
    doc_ids = sorted({d for d, _ in keys} & set(candidate.times) & set(comparator.times))
    try:
        time_test = paired_t_test([candidate.times[d] for d in doc_ids], [comparator.times[d] for d in doc_ids])
    except ZeroVariance as e:
        note = f'all {e.n} per-report time differences equal {e.mean_diff:.3f}s'
    except TooFewSamples:
        note = 'fewer than 2 reports timed by both raters'
    return RaterComparison(candidate.rater_id, comparator.rater_id, outcomes, test, verdict, superiority_alpha,
                           time_test, note)


def evaluate(candidate: Ratings, truth: Mapping[Datapoint, GroundTruthCell], comparators: Sequence[Ratings] = (),
             margin: float = config.noninferiority_margin, alpha: float = config.noninferiority_alpha,
             threshold: float = config.accuracy_threshold,
             superiority_alpha: float = config.superiority_alpha) -> EvalReport:
    """
    未解决的 datapoint 不参与统计并给出警告；
    候选者缺失的回答按 NotReported 计分
    """
    keys = [k for k, cell in truth.items() if cell.resolved]
    excluded = [k for k, cell in truth.items() if not cell.resolved]
    for doc_id, variable in excluded:
        log.warning(f'{doc_id}/{variable} 没有共识也没有裁定，不计入统计')
    if not keys:
        raise InputFormatError('ground truth has no resolved datapoints')
    truth_values = [truth[k].truth for k in keys]

    by_variable = defaultdict(list)
    for position, (_, variable) in enumerate(keys):
        by_variable[variable].append(position)

    overall, per_variable, above = OrderedDict(), OrderedDict(), OrderedDict()
    for rater in [candidate, *comparators]:
        predicted = [rater.value(k) for k in keys]
        overall[rater.rater_id] = accuracy(predicted, truth_values)
        per_variable[rater.rater_id] = OrderedDict(
            (variable, accuracy([predicted[i] for i in positions], [truth_values[i] for i in positions]))
            for variable, positions in by_variable.items())
        above[rater.rater_id] = sum(1 for est in per_variable[rater.rater_id].values() if est.proportion > threshold)

    comparisons = [compare_ratings(candidate, other, keys, truth_values, margin, alpha, superiority_alpha)
                   for other in comparators]

    doc_ids = sorted({d for d, _ in keys})
    timing = OrderedDict()
    for rater in [candidate, *comparators]:
        estimate = _timing(rater, doc_ids)
        if estimate is not None:
            timing[rater.rater_id] = estimate
    pooled = None
    human_times = [r.times[d] for r in comparators for d in doc_ids if d in r.times]
    if len(human_times) >= 2:
        pooled = mean_ci(human_times)
    speedup = None
    tool = timing.get(candidate.rater_id)
    if pooled is not None and tool is not None and tool.mean > 0:
        speedup = pooled.mean / tool.mean

    return EvalReport(datapoints=keys, excluded=excluded, overall=overall, per_variable=per_variable,
                      above_threshold=above, comparisons=comparisons, timing=timing, pooled_human_timing=pooled,
                      speedup=speedup, threshold=threshold, truth=truth)


# ---------------------------------------------------------------------------
# 读入评分文件
# ---------------------------------------------------------------------------

def _read_frame(path) -> pd.DataFrame:
    try:
        return pd.read_csv(os.fspath(path), dtype=str, keep_default_na=False, encoding='utf-8')
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InputFormatError(f'cannot read {path}: {e}') from e


def _parse_elapsed(text, source):
    text = text.strip()
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        raise InputFormatError(f'{source}: bad {ELAPSED_COLUMN} {text!r}') from None


def read_responses(path, schema: Optional[ExtractionSchema] = None) -> List[AbstractorResponse]:
    """长表: abstractor_id, doc_id, variable, value, elapsed_seconds"""
    schema = schema or default_schema()
    frame = _read_frame(path)
    missing = [c for c in LONG_COLUMNS[:4] if c not in frame.columns]
    if missing:
        raise InputFormatError(f'{path}: missing columns {missing}')
    responses = []
    for number, row in enumerate(frame.to_dict('records'), start=2):
        source = f'{path}:{number}'
        try:
            spec = schema.spec(row[VARIABLE_COLUMN].strip())
        except KeyError:
            raise InputFormatError(f'{source}: unknown variable {row[VARIABLE_COLUMN]!r}') from None
        responses.append(AbstractorResponse(
            abstractor_id=row[ABSTRACTOR_COLUMN].strip(),
            doc_id=row[DOC_ID_COLUMN].strip(),
            variable=spec.name,
            value=spec.parse_cell(row[VALUE_COLUMN]),
            elapsed=_parse_elapsed(row.get(ELAPSED_COLUMN, ''), source),
        ))
    return responses


def ratings_from_responses(responses: Sequence[AbstractorResponse]) -> 'OrderedDict[str, Ratings]':
    raters = OrderedDict()
    for r in responses:
        rater = raters.setdefault(r.abstractor_id, Ratings(r.abstractor_id))
        key = (r.doc_id, r.variable)
        if key in rater.values:
            raise InputFormatError(f'{r.abstractor_id}: duplicate answer for {r.doc_id}/{r.variable}')
        rater.values[key] = r.value
        if r.elapsed is not None:
            known = rater.times.setdefault(r.doc_id, r.elapsed)
            if known != r.elapsed:
                raise InputFormatError(f'{r.abstractor_id}: {r.doc_id} has conflicting elapsed times')
    return OrderedDict(sorted(raters.items()))


def ratings_from_records(records: Sequence[ExtractionRecord], rater_id: str, with_times: bool = True) -> Ratings:
    ratings = Ratings(rater_id)
    for record in records:
        for variable, value in record.values.items():
            ratings.values[(record.doc_id, variable)] = value
        if with_times:
            ratings.times[record.doc_id] = record.elapsed
    return ratings


def load_ratings(path, schema: Optional[ExtractionSchema] = None,
                 rater_id: Optional[str] = None) -> 'OrderedDict[str, Ratings]':
    """根据表头识别长表（抽取员回答）或宽表（工具输出）"""
    schema = schema or default_schema()
    columns = list(_read_frame(path).columns)
    if ABSTRACTOR_COLUMN in columns:
        return ratings_from_responses(read_responses(path, schema))
    if columns[:1] == [DOC_ID_COLUMN]:
        rater_id = rater_id or os.path.splitext(os.path.basename(os.fspath(path)))[0]
        records = read_table(path, schema)
        return OrderedDict([(rater_id, ratings_from_records(records, rater_id,
                                                            with_times=ELAPSED_COLUMN in columns))])
    raise InputFormatError(f'{path}: neither a response table nor an extraction table')


def load_single_rater(path, schema: Optional[ExtractionSchema] = None, rater_id: Optional[str] = None) -> Ratings:
    raters = load_ratings(path, schema, rater_id)
    if len(raters) != 1:
        raise InputFormatError(f'{path}: expected one rater, found {len(raters)}')
    return next(iter(raters.values()))


def read_overrides(path, schema: Optional[ExtractionSchema] = None) -> Dict[Datapoint, Value]:
    """人工裁定文件: doc_id, variable, truth"""
    schema = schema or default_schema()
    frame = _read_frame(path)
    if [c for c in (DOC_ID_COLUMN, VARIABLE_COLUMN, TRUTH_COLUMN) if c not in frame.columns]:
        raise InputFormatError(f'{path}: overrides need columns doc_id, variable, truth')
    overrides = {}
    for number, row in enumerate(frame.to_dict('records'), start=2):
        try:
            spec = schema.spec(row[VARIABLE_COLUMN].strip())
        except KeyError:
            raise InputFormatError(f'{path}:{number}: unknown variable {row[VARIABLE_COLUMN]!r}') from None
        overrides[(row[DOC_ID_COLUMN].strip(), spec.name)] = spec.parse_cell(row[TRUTH_COLUMN])
    log.info(f'载入 {len(overrides)} 条人工裁定')
    return overrides


# ---------------------------------------------------------------------------
# 输出
# ---------------------------------------------------------------------------

def accuracy_line(label: str, estimate: ProportionEstimate) -> str:
    level = round(estimate.confidence * 100)
    return (f'{label}: accuracy {estimate.proportion * 100:.1f}% ({level}% CI, {estimate.ci_lower * 100:.1f} to '
            f'{estimate.ci_upper * 100:.1f}%)')


def timing_line(label: str, estimate: MeanEstimate) -> str:
    return (f'{label}: mean {estimate.mean:.1f} seconds per report (95% CI, {estimate.ci_lower:.1f} to '
            f'{estimate.ci_upper:.1f} seconds; range {estimate.minimum:.1f} to {estimate.maximum:.1f}, '
            f'n={estimate.n})')


def comparison_lines(c: RaterComparison) -> List[str]:
    o, ni = c.outcomes, c.noninferiority
    lines = [f'{c.label}: n11={o.n11} n10={o.n10} n01={o.n01} n00={o.n00} (n={o.n})']
    if c.mcnemar is None:
        lines.append('  McNemar: no discordant pairs')
    else:
        m = c.mcnemar
        better = c.candidate if o.n10 > o.n01 else c.comparator
        direction = f', {better} more accurate' if c.significant and o.n10 != o.n01 else ''
        lines.append(f'  McNemar ({m.method}): statistic {m.statistic:.4f}, p = {m.p_value:.4g}'
                     f' ({"significant" if c.significant else "not significant"} at {c.superiority_alpha}{direction})')
    lines.append(f'  difference {ni.diff * 100:+.1f}% ({(1 - ni.alpha) * 100:.1f}% CI, {ni.ci_lower * 100:.1f} to '
                 f'{ni.ci_upper * 100:.1f}%), margin {ni.margin * 100:.0f}%: {ni.verdict}')
    if c.time_test is not None:
        t = c.time_test
        lines.append(f'  paired t-test on time: t = {t.t:.3f}, df = {t.df}, p = {t.p_value:.4g}, mean difference '
                     f'{t.mean_diff:.2f}s (95% CI, {t.ci_lower:.2f} to {t.ci_upper:.2f})')
    elif c.time_note:
        lines.append(f'  paired t-test on time: {c.time_note}')
    return lines


def render_report(report: EvalReport) -> str:
    lines = [f'datapoints: {report.n} ({len({d for d, _ in report.datapoints})} reports)']
    if report.excluded:
        lines.append(f'excluded (unresolved): {len(report.excluded)}')
    lines.append('')
    lines.append('[accuracy]')
    for rater, estimate in report.overall.items():
        lines.append(accuracy_line(rater, estimate))
        lines.append(f'  variables above {report.threshold * 100:.0f}%: {report.above_threshold[rater]} of '
                     f'{len(report.per_variable[rater])}')
    lines.append('')
    lines.append('[accuracy by variable]')
    for rater, variables in report.per_variable.items():
        lines.append(rater)
        for variable, estimate in variables.items():
            lines.append('  ' + accuracy_line(variable, estimate))
    if report.comparisons:
        lines.append('')
        lines.append('[comparisons]')
        for comparison in report.comparisons:
            lines.extend(comparison_lines(comparison))
    if report.timing:
        lines.append('')
        lines.append('[timing]')
        for rater, estimate in report.timing.items():
            lines.append(timing_line(rater, estimate))
        if report.pooled_human_timing is not None:
            lines.append(timing_line('abstractors pooled', report.pooled_human_timing))
        if report.speedup is not None:
            lines.append(f'speed-up: {report.speedup:.2f}x')
    return '\n'.join(lines) + '\n'


def statistics_frame(report: EvalReport) -> pd.DataFrame:
    """每个统计量一行: section, rater, comparator, variable, statistic, value"""
    rows = []

    def add(section, rater, statistic, value, comparator='', variable=''):
        rows.append((section, rater, comparator, variable, statistic, value))

    for rater, est in report.overall.items():
        for name in ('successes', 'n', 'proportion', 'ci_lower', 'ci_upper'):
            add('accuracy', rater, name, getattr(est, name))
        add('accuracy', rater, 'variables_above_threshold', report.above_threshold[rater])
    for rater, variables in report.per_variable.items():
        for variable, est in variables.items():
            for name in ('successes', 'n', 'proportion', 'ci_lower', 'ci_upper'):
                add('variable_accuracy', rater, name, getattr(est, name), variable=variable)
    for c in report.comparisons:
        for name in ('n11', 'n10', 'n01', 'n00'):
            add('paired_outcomes', c.candidate, name, getattr(c.outcomes, name), c.comparator)
        if c.mcnemar is not None:
            for name in ('statistic', 'p_value', 'chi_square_p', 'exact_p'):
                add('mcnemar', c.candidate, name, getattr(c.mcnemar, name), c.comparator)
        ni = c.noninferiority
        for name in ('diff', 'ci_lower', 'ci_upper', 'margin', 'alpha'):
            add('noninferiority', c.candidate, name, getattr(ni, name), c.comparator)
        add('noninferiority', c.candidate, 'non_inferior', int(ni.non_inferior), c.comparator)
        if c.time_test is not None:
            for name in ('t', 'df', 'p_value', 'mean_diff', 'ci_lower', 'ci_upper'):
                add('time_t_test', c.candidate, name, getattr(c.time_test, name), c.comparator)
    timing = list(report.timing.items())
    if report.pooled_human_timing is not None:
        timing.append(('abstractors pooled', report.pooled_human_timing))
    for rater, est in timing:
        for name in ('mean', 'ci_lower', 'ci_upper', 'minimum', 'maximum', 'n'):
            add('timing', rater, name, getattr(est, name))
    if report.speedup is not None:
        add('timing', '', 'speedup', report.speedup)
    return pd.DataFrame(rows, columns=['section', 'rater', 'comparator', 'variable', 'statistic', 'value'])


def ci_frame(report: EvalReport) -> pd.DataFrame:
    """非劣效区间，一行一个比较，用于外部作图"""
    rows = [(c.label, c.noninferiority.diff, c.noninferiority.ci_lower, c.noninferiority.ci_upper,
             c.noninferiority.margin, c.noninferiority.alpha, c.noninferiority.verdict) for c in report.comparisons]
    return pd.DataFrame(rows, columns=['comparison', 'diff', 'ci_lower', 'ci_upper', 'margin', 'alpha', 'verdict'])


def truth_frame(truth: Mapping[Datapoint, GroundTruthCell]) -> pd.DataFrame:
    rows = [(cell.doc_id, cell.variable, '' if cell.truth is None else format_value(cell.truth),
             cell.provenance.value) for cell in truth.values()]
    return pd.DataFrame(rows, columns=[DOC_ID_COLUMN, VARIABLE_COLUMN, TRUTH_COLUMN, PROVENANCE_COLUMN])


REPORT_FILES = {
    'report': 'report.txt',
    'statistics': 'statistics.csv',
    'ci_data': 'ci_data.csv',
    'ground_truth': 'ground_truth.csv',
}


def write_report(report: EvalReport, out_dir) -> Dict[str, str]:
    out_dir = os.fspath(out_dir)
    os.makedirs(out_dir, exist_ok=True)
    paths = {name: os.path.join(out_dir, filename) for name, filename in REPORT_FILES.items()}
    with open(paths['report'], 'w', encoding='utf-8', newline='\n') as f:
        f.write(render_report(report))
    statistics_frame(report).to_csv(paths['statistics'], index=False, encoding='utf-8', lineterminator='\n')
    ci_frame(report).to_csv(paths['ci_data'], index=False, encoding='utf-8', lineterminator='\n')
    truth_frame(report.truth).to_csv(paths['ground_truth'], index=False, encoding='utf-8', lineterminator='\n')
    log.info(f'评估报告写入 {out_dir}')
    return paths
