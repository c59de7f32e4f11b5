# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 11:02
# @File    : schema.py
# @Software: PyCharm
import enum
import functools
import math
import os
import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import pandas as pd

from config.config import NOT_REPORTED_TOKEN
from utils.LogHandler import log
from utils.exceptions import ConfigError, InputFormatError

"""
抽取的变量定义、模型回答的解析与标准化、结果表格的读写

所有变量的取值最终都落在各自的 domain 里，否则记为 NotReported
"""

NOT_REPORTED = 'NotReported'
FOUND_NOTHING = 'Found Nothing'

Value = Union[str, int, float]

# 整体等于这些说法时视为没有报告
NULL_ANSWERS = frozenset({
    '', 'found nothing', 'nothing found', 'n/a', 'na', 'none reported', 'not reported', 'not stated',
    'not mentioned', 'not specified', 'not available', 'not applicable', 'unknown', 'notreported', 'nr',
})

UNIT_SPELLINGS = {
    'g': ('grams', 'gram', 'gms', 'gm', 'g'),
    'mm': ('millimeters', 'millimetres', 'mm'),
    'cm': ('centimeters', 'centimetres', 'cm'),
}

_SEPARATORS = ':=-–—'
_BULLET = re.compile(r'^\s*(?:[-*•]+|\d+[.)])\s+')
_NUMBER = re.compile(r'\d+(?:\.\d+)?')
_GLEASON = re.compile(r'(?<![\d.])(\d)\s*\+\s*(\d)(?:\s*=\s*(\d+))?(?![\d.])')
_RATIO = re.compile(r'(?<![\d.])(\d+)\s*(?:/|out of|of)\s*(\d+)(?![\d.])')


class VariableKind(str, enum.Enum):
    CATEGORICAL = 'categorical'
    INTEGER = 'integer'
    DECIMAL = 'decimal'


class NumberRole(str, enum.Enum):
    """回答里出现多个数字时取哪一个"""
    PLAIN = 'plain'
    GLEASON_PRIMARY = 'gleason-primary'
    GLEASON_SECONDARY = 'gleason-secondary'
    GLEASON_SUM = 'gleason-sum'
    RATIO_PART = 'ratio-part'
    RATIO_WHOLE = 'ratio-whole'


def name_key(name: str) -> str:
    """大小写、标点、空白都不参与变量名匹配"""
    return re.sub(r'[^a-z0-9]', '', name.lower())


@functools.lru_cache(maxsize=None)
def _word_pattern(term: str):
    return re.compile(r'(?<![a-z0-9])' + re.escape(term) + r'(?![a-z0-9])')


@dataclass(frozen=True)
class VariableSpec:
    name: str
    kind: VariableKind
    domain: Tuple[str, ...] = ()
    value_range: Optional[Tuple[float, float]] = None
    synonyms: Mapping[str, Value] = field(default_factory=dict)
    unit: Optional[str] = None
    aliases: Tuple[str, ...] = ()
    role: NumberRole = NumberRole.PLAIN

    def __post_init__(self):
        if not self.name.strip():
            raise ConfigError('variable name must not be empty')
        if self.kind is VariableKind.CATEGORICAL:
            if not self.domain or NOT_REPORTED not in self.domain:
                raise ConfigError(f'{self.name}: categorical domain must be non-empty and include {NOT_REPORTED}')
        elif self.value_range is None or self.value_range[0] > self.value_range[1]:
            raise ConfigError(f'{self.name}: numeric variable needs a valid range')
        if self.kind is VariableKind.CATEGORICAL and self.role is not NumberRole.PLAIN:
            raise ConfigError(f'{self.name}: only numeric variables take a number role')
        object.__setattr__(self, 'synonyms', {k.lower(): v for k, v in self.synonyms.items()})
        for surface, value in self.synonyms.items():
            if value == NOT_REPORTED or not self.contains(value):
                raise ConfigError(f'{self.name}: synonym {surface!r} maps outside the domain ({value!r})')

    def contains(self, value) -> bool:
        if value == NOT_REPORTED:
            return True
        if self.kind is VariableKind.CATEGORICAL:
            return value in self.domain
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return False
        if self.kind is VariableKind.INTEGER and not isinstance(value, int):
            return False
        low, high = self.value_range
        return math.isfinite(value) and low <= value <= high

    def parse_cell(self, cell: str) -> Value:
        """表格中的单元格 -> 规范值，不接受 domain 之外的值"""
        cell = cell.strip()
        if cell in (NOT_REPORTED_TOKEN, NOT_REPORTED):
            return NOT_REPORTED
        try:
            if self.kind is VariableKind.INTEGER:
                value = int(cell)
            elif self.kind is VariableKind.DECIMAL:
                value = float(cell)
            else:
                value = cell
        except ValueError:
            raise InputFormatError(f'{self.name}: cannot read {cell!r}') from None
        if not self.contains(value):
            raise InputFormatError(f'{self.name}: {cell!r} is outside the domain')
        return value


@dataclass(frozen=True)
class ExtractionSchema:
    variables: Tuple[VariableSpec, ...]

    def __post_init__(self):
        if not self.variables:
            raise ConfigError('schema has no variables')
        keys = [name_key(v.name) for v in self.variables]
        if len(set(keys)) != len(keys):
            raise ConfigError('variable names must be unique (ignoring case and punctuation)')

    @property
    def names(self) -> List[str]:
        return [v.name for v in self.variables]

    def __len__(self):
        return len(self.variables)

    def __iter__(self):
        return iter(self.variables)

    def spec(self, name) -> VariableSpec:
        for variable in self.variables:
            if variable.name == name:
                return variable
        raise KeyError(name)


@dataclass(frozen=True)
class ExtractionRecord:
    doc_id: str
    values: Dict[str, Value]
    raw_answers: Dict[str, str] = field(default_factory=dict)
    elapsed: float = 0.0
    warnings: Tuple[str, ...] = ()


def _yes_no(name, aliases=()):
    return VariableSpec(
        name=name, kind=VariableKind.CATEGORICAL, domain=('Yes', 'No', NOT_REPORTED), aliases=aliases,
        synonyms={
            'not identified': 'No', 'absent': 'No', 'negative': 'No', 'no': 'No', 'not present': 'No',
            'no evidence': 'No', 'not seen': 'No', 'none': 'No', 'uninvolved': 'No', 'not involved': 'No',
            'present': 'Yes', 'identified': 'Yes', 'positive': 'Yes', 'yes': 'Yes', 'involved': 'Yes',
            'focal': 'Yes', 'extensive': 'Yes',
        })


def default_schema() -> ExtractionSchema:
    """
    根治性前列腺切除病理报告的 14 个变量，顺序与提示词中的顺序一致
    取值范围参照 CAP 根治性前列腺切除标本检查规范重建
    """
    t_stages = ('pT2', 'pT2a', 'pT2b', 'pT2c', 'pT3a', 'pT3b', 'pT4')
    n_stages = ('pN0', 'pN1', 'pNX')
    return ExtractionSchema(variables=(
        VariableSpec('pT-Stage', VariableKind.CATEGORICAL, domain=t_stages + (NOT_REPORTED,),
                     synonyms={s[1:].lower(): s for s in t_stages}, aliases=('Pathologic T Stage', 'T Stage')),
        VariableSpec('Primary Gleason Grade', VariableKind.INTEGER, value_range=(1, 5),
                     aliases=('Primary Gleason Pattern',), role=NumberRole.GLEASON_PRIMARY),
        VariableSpec('Secondary Gleason Grade', VariableKind.INTEGER, value_range=(1, 5),
                     aliases=('Secondary Gleason Pattern',), role=NumberRole.GLEASON_SECONDARY),
        VariableSpec('Gleason Sum Score', VariableKind.INTEGER, value_range=(2, 10),
                     aliases=('Gleason Score', 'Gleason Sum'), role=NumberRole.GLEASON_SUM),
        VariableSpec('Tertiary Gleason Pattern or Grade', VariableKind.CATEGORICAL,
                     domain=('3', '4', '5', 'None', NOT_REPORTED),
                     synonyms={'none': 'None', 'not identified': 'None', 'absent': 'None', 'no': 'None',
                               'not present': 'None'},
                     aliases=('Tertiary Gleason Pattern', 'Tertiary Gleason Grade', 'Tertiary Pattern')),
        _yes_no('Extraprostatic Extension', aliases=('EPE', 'Extraprostatic Extension (EPE)')),
        _yes_no('Seminal Vesical Invasion', aliases=('Seminal Vesicle Invasion', 'SVI')),
        _yes_no('Lymphovascular Invasion', aliases=('LVI', 'Lymph-Vascular Invasion', 'Angiolymphatic Invasion')),
        _yes_no('Perineural Invasion', aliases=('PNI',)),
        VariableSpec('Surgical Margin Status', VariableKind.CATEGORICAL,
                     domain=('Positive', 'Negative', NOT_REPORTED),
                     synonyms={'negative': 'Negative', 'free': 'Negative', 'clear': 'Negative',
                               'uninvolved': 'Negative', 'not involved': 'Negative', 'positive': 'Positive',
                               'involved': 'Positive'},
                     aliases=('Surgical Margins', 'Margin Status', 'Margins')),
        VariableSpec('pN-Stage', VariableKind.CATEGORICAL, domain=n_stages + (NOT_REPORTED,),
                     synonyms={s[1:].lower(): s for s in n_stages}, aliases=('Pathologic N Stage', 'N Stage')),
        VariableSpec('Number of Lymph Nodes Removed', VariableKind.INTEGER, value_range=(0, 99),
                     aliases=('Lymph Nodes Removed', 'Number of Lymph Nodes Examined', 'Lymph Nodes Examined'),
                     role=NumberRole.RATIO_WHOLE),
        VariableSpec('Number of Lymph Nodes Involved by Cancer', VariableKind.INTEGER, value_range=(0, 99),
                     synonyms={'none': 0},
                     aliases=('Lymph Nodes Involved', 'Number of Lymph Nodes Involved', 'Number of Positive Lymph Nodes'),
                     role=NumberRole.RATIO_PART),
        VariableSpec('Specific Prostate Weight in g', VariableKind.DECIMAL, value_range=(1.0, 500.0), unit='g',
                     aliases=('Prostate Weight', 'Specimen Weight', 'Prostate Weight in g')),
    ))


# ---------------------------------------------------------------------------
# schema 文件
#
#   name: Surgical Margin Status
#   kind: categorical
#   domain: Positive | Negative | NotReported
#   synonyms: free => Negative | involved => Positive
#   aliases: Margins
#   unit:
#   role: plain
#
# 一个变量一段，段之间空行分隔，数值变量的 domain 写成 "low..high"
# role 只对数值变量有意义: plain | gleason-primary | gleason-secondary | gleason-sum | ratio-part | ratio-whole
# ---------------------------------------------------------------------------

_SCHEMA_KEYS = ('name', 'kind', 'domain', 'synonyms', 'aliases', 'unit', 'role')


def _split_list(text):
    return [item.strip() for item in text.split('|') if item.strip()]


def _parse_block(lines, source):
    fields = {}
    for line in lines:
        key, sep, value = line.partition(':')
        key = key.strip().lower()
        if not sep or key not in _SCHEMA_KEYS:
            raise ConfigError(f'{source}: unexpected line {line!r}')
        fields[key] = value.strip()
    if 'name' not in fields or 'kind' not in fields:
        raise ConfigError(f'{source}: every variable block needs name and kind')
    try:
        kind = VariableKind(fields['kind'].lower())
    except ValueError:
        raise ConfigError(f'{source}: unknown kind {fields["kind"]!r}') from None
    try:
        role = NumberRole((fields.get('role') or NumberRole.PLAIN.value).lower())
    except ValueError:
        raise ConfigError(f'{source}: unknown role {fields["role"]!r}') from None

    def convert(value_text):
        if kind is VariableKind.INTEGER:
            return int(value_text)
        if kind is VariableKind.DECIMAL:
            return float(value_text)
        return value_text

    domain, value_range = (), None
    domain_text = fields.get('domain', '')
    try:
        if kind is VariableKind.CATEGORICAL:
            domain = tuple(_split_list(domain_text))
        else:
            low, _, high = domain_text.partition('..')
            value_range = (convert(low.strip()), convert(high.strip()))
        synonyms = {}
        for pair in _split_list(fields.get('synonyms', '')):
            surface, arrow, canonical = pair.partition('=>')
            if not arrow:
                raise ConfigError(f'{source}: synonym {pair!r} needs "surface => value"')
            synonyms[surface.strip()] = convert(canonical.strip())
    except ValueError as e:
        raise ConfigError(f'{source}: {fields["name"]}: {e}') from None
    return VariableSpec(name=fields['name'], kind=kind, domain=domain, value_range=value_range,
                        synonyms=synonyms, unit=fields.get('unit') or None,
                        aliases=tuple(_split_list(fields.get('aliases', ''))), role=role)


def load_schema(path) -> ExtractionSchema:
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise ConfigError(f'schema file not found: {path}')
    blocks, current = [], []
    with open(path, encoding='utf-8') as f:
        for line in f:
            stripped = line.strip()
            if stripped.startswith('#'):
                continue
            if not stripped:
                if current:
                    blocks.append(current)
                    current = []
                continue
            current.append(stripped)
    if current:
        blocks.append(current)
    schema = ExtractionSchema(variables=tuple(_parse_block(block, path) for block in blocks))
    log.info(f'载入 schema {path}: {len(schema)} 个变量')
    return schema


def _format_number(value):
    return str(value)


def dump_schema(schema: ExtractionSchema) -> str:
    blocks = []
    for spec in schema:
        if spec.kind is VariableKind.CATEGORICAL:
            domain = ' | '.join(spec.domain)
        else:
            domain = f'{_format_number(spec.value_range[0])}..{_format_number(spec.value_range[1])}'
        synonyms = ' | '.join(f'{k} => {v}' for k, v in spec.synonyms.items())
        blocks.append('\n'.join([
            f'name: {spec.name}',
            f'kind: {spec.kind.value}',
            f'domain: {domain}',
            f'synonyms: {synonyms}',
            f'aliases: {" | ".join(spec.aliases)}',
            f'unit: {spec.unit or ""}',
            f'role: {spec.role.value}',
        ]))
    return '\n\n'.join(blocks) + '\n'


# ---------------------------------------------------------------------------
# 解析模型回答
# ---------------------------------------------------------------------------

def _name_index(schema: ExtractionSchema) -> Dict[str, str]:
    index = {}
    for spec in schema:
        index.setdefault(name_key(spec.name), spec.name)
    for spec in schema:
        for alias in spec.aliases:
            index.setdefault(name_key(alias), spec.name)
    return index


def _match_line(line, index):
    line = _BULLET.sub('', line)
    for pos, char in enumerate(line):
        if char not in _SEPARATORS:
            continue
        key = name_key(line[:pos])
        if key and key in index:
            return index[key], line[pos + 1:].strip().strip('*_').strip()
    return None, None


def parse_response(raw: str, schema: ExtractionSchema) -> Dict[str, str]:
    """
    逐行查找 "<变量名>: <回答>"，变量名匹配忽略大小写和标点；
    重复的行以第一次出现为准，没有出现的变量记为 Found Nothing
    """
    index = _name_index(schema)
    answers: Dict[str, str] = {}
    for line in raw.splitlines():
        name, answer = _match_line(line, index)
        if name is not None and name not in answers:
            answers[name] = answer
    return {name: answers.get(name, FOUND_NOTHING) for name in schema.names}


# ---------------------------------------------------------------------------
# 标准化
# ---------------------------------------------------------------------------

def _strip_unit(text, unit):
    spellings = UNIT_SPELLINGS.get(unit.lower(), (unit.lower(),))
    pattern = r'(?<=\d)\s*(?:' + '|'.join(re.escape(s) for s in spellings) + r')(?![a-z])'
    return re.sub(pattern, '', text)


def _earliest_term(text, terms):
    """返回最早出现的整词，起点相同时取较长的"""
    best = None
    for term in terms:
        match = _word_pattern(term).search(text)
        if match and (best is None or (match.start(), -len(term)) < (best[0], -len(best[1]))):
            best = (match.start(), term)
    return best[1] if best else None


def _pick_number(text, role):
    """
    按 role 从回答中选出一个数字串，返回 (数字串, 问题说明)
    Gleason "a+b(=c)": primary 取 a，secondary 取 b，sum 取 a+b（与 c 不一致时拒绝）
    "x/y"、"x of y": ratio-part 取 x，ratio-whole 取 y
    其余情况只接受一个数字，出现多个不同的数字时拒绝
    """
    if role in (NumberRole.GLEASON_PRIMARY, NumberRole.GLEASON_SECONDARY, NumberRole.GLEASON_SUM):
        match = _GLEASON.search(text)
        if match:
            first, second, total = match.groups()
            if role is NumberRole.GLEASON_PRIMARY:
                return first, None
            if role is NumberRole.GLEASON_SECONDARY:
                return second, None
            pattern_sum = int(first) + int(second)
            if total is not None and int(total) != pattern_sum:
                return None, f'has an inconsistent Gleason sum {match.group(0)!r}'
            return str(pattern_sum), None
    if role in (NumberRole.RATIO_PART, NumberRole.RATIO_WHOLE):
        match = _RATIO.search(text)
        if match:
            return match.group(1 if role is NumberRole.RATIO_PART else 2), None
    numbers = _NUMBER.findall(text)
    if not numbers:
        return None, None
    if len({float(n) for n in numbers}) > 1:
        return None, f'has conflicting numbers {", ".join(numbers)}'
    return numbers[0], None


def _parse_number(digits, spec):
    try:
        number = float(digits)
    except ValueError:
        return None
    if spec.kind is VariableKind.INTEGER:
        if not math.isfinite(number) or number != int(number):
            return None
        return int(number)
    return number


def _out_of_domain(raw_answer, spec, warnings, reason):
    message = f'{spec.name}: {raw_answer!r} {reason}'
    log.debug(message)
    if warnings is not None:
        warnings.append(message)
    return NOT_REPORTED


def normalize(raw_answer: str, spec: VariableSpec, warnings: Optional[List[str]] = None) -> Value:
    """
    回答 -> 规范值；任何输入都不会抛异常，
    不在 domain 中的结果记为 NotReported 并写入 warnings
    """
    text = ' '.join(raw_answer.split()).lower().strip(' .;,')
    if spec.unit:
        text = _strip_unit(text, spec.unit).strip(' .;,')

    if text in spec.synonyms:
        return spec.synonyms[text]
    if text in NULL_ANSWERS or FOUND_NOTHING.lower() in text:
        return NOT_REPORTED

    if spec.kind is VariableKind.CATEGORICAL:
        for value in spec.domain:
            if value != NOT_REPORTED and text == value.lower():
                return value
        candidates = dict(spec.synonyms)
        for value in spec.domain:
            if value != NOT_REPORTED:
                candidates.setdefault(value.lower(), value)
        term = _earliest_term(text, candidates)
        if term is None:
            return _out_of_domain(raw_answer, spec, warnings, 'matches no allowed value')
        return candidates[term]

    digits, problem = _pick_number(text, spec.role)
    if problem is not None:
        return _out_of_domain(raw_answer, spec, warnings, problem)
    number = None if digits is None else _parse_number(digits, spec)
    if number is None:
        term = _earliest_term(text, spec.synonyms)
        if term is not None:
            return spec.synonyms[term]
        return _out_of_domain(raw_answer, spec, warnings, 'has no usable number')
    if not spec.contains(number):
        return _out_of_domain(raw_answer, spec, warnings, f'-> {number} is outside {spec.value_range}')
    return number


def normalize_answers(doc_id, answers: Mapping[str, str], schema: ExtractionSchema, elapsed=0.0) -> ExtractionRecord:
    warnings: List[str] = []
    values = {spec.name: normalize(answers.get(spec.name, FOUND_NOTHING), spec, warnings) for spec in schema}
    record = ExtractionRecord(doc_id=doc_id, values=values, raw_answers=dict(answers), elapsed=elapsed)
    warnings.extend(validate_record(record))
    return ExtractionRecord(doc_id=doc_id, values=values, raw_answers=dict(answers), elapsed=elapsed,
                            warnings=tuple(warnings))


def validate_record(record: ExtractionRecord) -> List[str]:
    """跨字段一致性检查，只给出提示，报告本身也可能前后矛盾"""
    values = record.values
    warnings = []
    grades = [values.get(name) for name in ('Primary Gleason Grade', 'Secondary Gleason Grade', 'Gleason Sum Score')]
    if all(isinstance(v, int) for v in grades) and grades[0] + grades[1] != grades[2]:
        warnings.append(f'{record.doc_id}: Gleason Sum Score {grades[2]} != {grades[0]} + {grades[1]}')
    removed = values.get('Number of Lymph Nodes Removed')
    involved = values.get('Number of Lymph Nodes Involved by Cancer')
    if isinstance(removed, int) and isinstance(involved, int) and involved > removed:
        warnings.append(f'{record.doc_id}: {involved} nodes involved but only {removed} removed')
    return warnings


# ---------------------------------------------------------------------------
# 输出表格
# ---------------------------------------------------------------------------

DOC_ID_COLUMN = 'doc_id'
ELAPSED_COLUMN = 'elapsed_seconds'


def format_value(value: Value) -> str:
    if value == NOT_REPORTED:
        return NOT_REPORTED_TOKEN
    return str(value)


def records_frame(records: Sequence[ExtractionRecord], schema: ExtractionSchema) -> pd.DataFrame:
    rows = []
    for record in sorted(records, key=lambda r: r.doc_id):
        if list(record.values) != schema.names:
            raise InputFormatError(f'{record.doc_id}: record variables do not match the schema')
        row = [record.doc_id] + [format_value(record.values[name]) for name in schema.names]
        rows.append(row + [f'{record.elapsed:.3f}'])
    return pd.DataFrame(rows, columns=[DOC_ID_COLUMN] + schema.names + [ELAPSED_COLUMN], dtype=str)


def write_table(records: Sequence[ExtractionRecord], path, schema: Optional[ExtractionSchema] = None,
                excel_path=None) -> None:
    """UTF-8 CSV，按 doc_id 排序；excel_path 不为空时另存一份 xlsx"""
    if not records:
        raise InputFormatError('no records to write')
    if schema is None:
        schema = default_schema()
    frame = records_frame(records, schema)
    path = os.fspath(path)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    frame.to_csv(path, index=False, encoding='utf-8', lineterminator='\n')
    log.info(f'写出 {len(frame)} 行到 {path}')
    if excel_path:
        frame.to_excel(os.fspath(excel_path), index=False, engine='openpyxl')
        log.info(f'写出 spreadsheet {excel_path}')


def read_table(path, schema: Optional[ExtractionSchema] = None) -> List[ExtractionRecord]:
    if schema is None:
        schema = default_schema()
    try:
        frame = pd.read_csv(os.fspath(path), dtype=str, keep_default_na=False, encoding='utf-8')
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InputFormatError(f'cannot read table {path}: {e}') from e
    expected = [DOC_ID_COLUMN] + schema.names
    columns = list(frame.columns)
    if columns[:len(expected)] != expected or columns[len(expected):] not in ([], [ELAPSED_COLUMN]):
        raise InputFormatError(f'{path}: header does not match the schema')
    records = []
    for row in frame.itertuples(index=False):
        row = list(row)
        values = {spec.name: spec.parse_cell(row[i + 1]) for i, spec in enumerate(schema)}
        elapsed = 0.0
        if len(row) > len(expected) and row[-1].strip():
            try:
                elapsed = float(row[-1])
            except ValueError:
                raise InputFormatError(f'{path}: bad elapsed_seconds {row[-1]!r}') from None
        records.append(ExtractionRecord(doc_id=row[0], values=values, elapsed=elapsed))
    return records
