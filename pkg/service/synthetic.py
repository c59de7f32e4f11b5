# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 17:50
# @File    : synthetic.py
# @Software: PyCharm
import os
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import pandas as pd

from service.evaluation import LONG_COLUMNS, AbstractorResponse
from service.schema import (ELAPSED_COLUMN, NOT_REPORTED, ExtractionRecord, Value, VariableKind,
                            default_schema, format_value, records_frame)
from utils.LogHandler import log

"""
合成根治性前列腺切除病理报告

先随机给 14 个变量定值（可以留空为 NotReported），再按固定句式写成报告正文，
句式与 data/mock_rules.tsv 对应，mock 后端应当能 100% 还原这些值
"""

PT_STAGES = ('pT2', 'pT2a', 'pT2b', 'pT2c', 'pT3a', 'pT3b', 'pT4')
YES_WORDS = ('present', 'identified', 'positive')
NO_WORDS = ('not identified', 'absent', 'negative')
YES_NO_LINES = (
    ('Extraprostatic Extension', 'Extraprostatic extension'),
    ('Seminal Vesical Invasion', 'Seminal vesicle invasion'),
    ('Lymphovascular Invasion', 'Lymphovascular invasion'),
    ('Perineural Invasion', 'Perineural invasion'),
)

GROSS_FILLER = (
    'The specimen is received fresh in a container labeled with the patient name.',
    'The external surface is inked and the specimen is serially sectioned from apex to base.',
    'Representative sections are submitted in twelve cassettes.',
    'The cut surface shows a firm tan nodular area in the posterior peripheral zone.',
)
MICRO_FILLER = (
    'Prostatic adenocarcinoma, acinar type.',
    'High grade prostatic intraepithelial neoplasia is also seen.',
    'Tumor is bilateral and multifocal.',
    'Benign prostatic hyperplasia in the transition zone.',
)


@dataclass(frozen=True)
class SyntheticReport:
    doc_id: str
    values: Dict[str, Value]
    text: str

    def record(self) -> ExtractionRecord:
        return ExtractionRecord(doc_id=self.doc_id, values=dict(self.values))


def plant_values(rng: random.Random, not_reported_rate: float = 0.1) -> Dict[str, Value]:
    """按默认 schema 的顺序给出一组互相一致的取值"""
    def omitted():
        return rng.random() < not_reported_rate

    values: Dict[str, Value] = {}
    values['pT-Stage'] = NOT_REPORTED if omitted() else rng.choice(PT_STAGES)
    if omitted():
        primary = secondary = total = NOT_REPORTED
    else:
        primary, secondary = rng.randint(3, 5), rng.randint(3, 5)
        total = primary + secondary
    values['Primary Gleason Grade'] = primary
    values['Secondary Gleason Grade'] = secondary
    values['Gleason Sum Score'] = total
    values['Tertiary Gleason Pattern or Grade'] = NOT_REPORTED if omitted() else rng.choice(('3', '4', '5', 'None'))
    for name, _ in YES_NO_LINES:
        values[name] = NOT_REPORTED if omitted() else rng.choice(('Yes', 'No'))
    values['Surgical Margin Status'] = NOT_REPORTED if omitted() else rng.choice(('Positive', 'Negative'))

    if omitted():
        removed = involved = NOT_REPORTED
        n_stage = NOT_REPORTED if omitted() else 'pNX'
    else:
        removed = rng.randint(1, 25)
        involved = rng.randint(0, min(3, removed)) if rng.random() < 0.4 else 0
        n_stage = NOT_REPORTED if omitted() else ('pN1' if involved else 'pN0')
    values['pN-Stage'] = n_stage
    values['Number of Lymph Nodes Removed'] = removed
    values['Number of Lymph Nodes Involved by Cancer'] = involved
    values['Specific Prostate Weight in g'] = NOT_REPORTED if omitted() else round(rng.uniform(20.0, 120.0), 1)
    return values


def render_report(doc_id: str, values: Dict[str, Value], rng: random.Random) -> str:
    lines = ['SURGICAL PATHOLOGY REPORT', f'Accession: {doc_id}',
             'Specimen: prostate and seminal vesicles, radical prostatectomy.']

    gross = [rng.choice(GROSS_FILLER)]
    weight = values['Specific Prostate Weight in g']
    if weight != NOT_REPORTED:
        gross.append(f'Prostate weight: {weight} g.')
    gross.append(rng.choice(GROSS_FILLER))
    lines.append('Gross description: ' + ' '.join(gross))

    lines.append('Microscopic diagnosis: ' + rng.choice(MICRO_FILLER))
    if values['Gleason Sum Score'] != NOT_REPORTED:
        lines.append(f'GLEASON SCORE: {values["Primary Gleason Grade"]}+{values["Secondary Gleason Grade"]}'
                     f'={values["Gleason Sum Score"]}.')
    tertiary = values['Tertiary Gleason Pattern or Grade']
    if tertiary != NOT_REPORTED:
        lines.append(f'Tertiary pattern: {"none" if tertiary == "None" else tertiary}.')
    for name, label in YES_NO_LINES:
        if values[name] != NOT_REPORTED:
            lines.append(f'{label}: {rng.choice(YES_WORDS if values[name] == "Yes" else NO_WORDS)}.')
    margin = values['Surgical Margin Status']
    if margin != NOT_REPORTED:
        word = rng.choice(('positive', 'involved')) if margin == 'Positive' else 'negative'
        lines.append(f'Margins: {word}.')

    removed = values['Number of Lymph Nodes Removed']
    involved = values['Number of Lymph Nodes Involved by Cancer']
    if removed != NOT_REPORTED:
        nodes = f'{removed} lymph nodes examined'
        if involved != NOT_REPORTED:
            nodes += f', {involved} involved'
        lines.append(nodes + '.')

    stage = [s for s in (values['pT-Stage'], values['pN-Stage']) if s != NOT_REPORTED]
    if stage:
        lines.append('Pathologic stage: ' + ' '.join(stage) + '.')
    lines.append(rng.choice(MICRO_FILLER))
    return '\n'.join(lines) + '\n'


def generate_reports(count: int, seed: int = 0, not_reported_rate: float = 0.1,
                     prefix: str = 'report') -> List[SyntheticReport]:
    rng = random.Random(seed)
    reports = []
    for i in range(1, count + 1):
        doc_id = f'{prefix}_{i:03d}'
        values = plant_values(rng, not_reported_rate)
        reports.append(SyntheticReport(doc_id, values, render_report(doc_id, values, rng)))
    return reports


def write_corpus(reports: Sequence[SyntheticReport], directory, truth_path: Optional[str] = None) -> None:
    """每份报告一个 .txt，truth_path 不为空时写出宽表形式的已知答案（没有用时列）"""
    directory = os.fspath(directory)
    os.makedirs(directory, exist_ok=True)
    for report in reports:
        with open(os.path.join(directory, f'{report.doc_id}.txt'), 'w', encoding='utf-8', newline='\n') as f:
            f.write(report.text)
    if truth_path:
        frame = records_frame([r.record() for r in reports], default_schema()).drop(columns=[ELAPSED_COLUMN])
        frame.to_csv(truth_path, index=False, encoding='utf-8', lineterminator='\n')
    log.info(f'写出 {len(reports)} 份合成报告到 {directory}')


def _wrong_value(value: Value, name: str, rng: random.Random) -> Value:
    spec = default_schema().spec(name)
    if spec.kind is VariableKind.CATEGORICAL:
        choices = [v for v in spec.domain if v != value]
    else:
        low, high = spec.value_range
        choices = [NOT_REPORTED] + [v for v in range(int(low), int(high) + 1) if v != value][:5]
        if spec.kind is VariableKind.DECIMAL and value != NOT_REPORTED:
            choices = [NOT_REPORTED, round(value + 1.0, 1)]
    return rng.choice([c for c in choices if c != value])


def simulate_abstractor(reports: Sequence[SyntheticReport], abstractor_id: str, error_rate: float, seed: int,
                        mean_seconds: float = 60.0) -> List[AbstractorResponse]:
    """模拟人工抽取员：按 error_rate 随机答错，每份报告一个用时"""
    rng = random.Random(f'{abstractor_id}:{seed}')
    responses = []
    for report in reports:
        elapsed = round(max(1.0, rng.gauss(mean_seconds, mean_seconds / 4)), 1)
        for name, value in report.values.items():
            answer = _wrong_value(value, name, rng) if rng.random() < error_rate else value
            responses.append(AbstractorResponse(abstractor_id, report.doc_id, name, answer, elapsed))
    return responses


def write_responses(responses: Sequence[AbstractorResponse], path) -> None:
    rows = [(r.abstractor_id, r.doc_id, r.variable, format_value(r.value),
             '' if r.elapsed is None else f'{r.elapsed:.1f}') for r in responses]
    frame = pd.DataFrame(rows, columns=LONG_COLUMNS)
    frame.to_csv(os.fspath(path), index=False, encoding='utf-8', lineterminator='\n')

