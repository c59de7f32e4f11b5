# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 21:40
# @File    : test_schema.py
# @Software: PyCharm
import random

import pytest
from hypothesis import given, settings, strategies as st

from service.schema import (ELAPSED_COLUMN, FOUND_NOTHING, NOT_REPORTED, ExtractionRecord, ExtractionSchema,
                            NumberRole, VariableKind, VariableSpec, default_schema, dump_schema, load_schema,
                            normalize, normalize_answers, parse_response, read_table, records_frame,
                            validate_record, write_table)
from utils.exceptions import ConfigError, InputFormatError

DEFAULT_NAMES = [
    'pT-Stage', 'Primary Gleason Grade', 'Secondary Gleason Grade', 'Gleason Sum Score',
    'Tertiary Gleason Pattern or Grade', 'Extraprostatic Extension', 'Seminal Vesical Invasion',
    'Lymphovascular Invasion', 'Perineural Invasion', 'Surgical Margin Status', 'pN-Stage',
    'Number of Lymph Nodes Removed', 'Number of Lymph Nodes Involved by Cancer', 'Specific Prostate Weight in g',
]

FUZZ_WORDS = (
    'pt2', 'pT3a', 'pn1', 'gleason', 'grade', 'not', 'identified', 'present', 'absent', 'negative', 'positive',
    'none', 'found', 'nothing', 'margin', 'involved', 'free', 'g', 'grams', 'mm', 'yes', 'no', 'NR', 'n/a',
    '0', '3', '4', '5', '7', '12', '45.5', '600', '-1', '1e9', '3+4=7', '=', ':', '-', '.', ',', '(', ')',
    'µ', '–', '\t', '\n', '',
)


def test_default_schema_order_and_kinds():
    schema = default_schema()
    assert schema.names == DEFAULT_NAMES
    assert len(schema) == 14
    kinds = {spec.name: spec.kind for spec in schema}
    assert kinds['Gleason Sum Score'] is VariableKind.INTEGER
    assert kinds['Specific Prostate Weight in g'] is VariableKind.DECIMAL
    assert kinds['Surgical Margin Status'] is VariableKind.CATEGORICAL
    assert all(NOT_REPORTED in spec.domain for spec in schema if spec.kind is VariableKind.CATEGORICAL)


def test_parse_response_matches_names_loosely(schema):
    raw = '\n'.join([
        'PT STAGE - pt2c',
        '- Primary Gleason Grade: 3',
        '2) secondary gleason grade = 4',
        'Gleason Score: 3+4=7',
        '**Seminal Vesicle Invasion**: Not identified.',
        'pN-Stage: pN0',
        'pN-Stage: pN1',
        'Some commentary the model added.',
    ])
    answers = parse_response(raw, schema)
    assert list(answers) == DEFAULT_NAMES
    assert answers['pT-Stage'] == 'pt2c'
    assert answers['Primary Gleason Grade'] == '3'
    assert answers['Secondary Gleason Grade'] == '4'
    assert answers['Gleason Sum Score'] == '3+4=7'
    assert answers['Seminal Vesical Invasion'] == 'Not identified.'
    assert answers['pN-Stage'] == 'pN0'
    assert answers['Perineural Invasion'] == FOUND_NOTHING


def test_parse_response_empty(schema):
    assert set(parse_response('', schema).values()) == {FOUND_NOTHING}


@pytest.mark.parametrize('name, raw, expected', [
    ('pT-Stage', 'pt2c', 'pT2c'),
    ('pT-Stage', 'T3b', 'pT3b'),
    ('pT-Stage', 'Found Nothing', NOT_REPORTED),
    ('Primary Gleason Grade', '4 (predominant pattern)', 4),
    ('Primary Gleason Grade', '7', NOT_REPORTED),
    ('Gleason Sum Score', '3+4=7', 7),
    ('Gleason Sum Score', '2.5', NOT_REPORTED),
    ('Gleason Sum Score', '3+4', 7),
    ('Gleason Sum Score', '7 (3 + 4)', 7),
    ('Gleason Sum Score', '3+4=8', NOT_REPORTED),
    ('Primary Gleason Grade', '3 (3+4=7)', 3),
    ('Secondary Gleason Grade', 'Gleason 4+3=7', 3),
    ('Secondary Gleason Grade', 'pattern 4 (grade group 2)', NOT_REPORTED),
    ('Tertiary Gleason Pattern or Grade', '5', '5'),
    ('Tertiary Gleason Pattern or Grade', 'not identified', 'None'),
    ('Extraprostatic Extension', 'Present, focal', 'Yes'),
    ('Seminal Vesical Invasion', 'Not identified.', 'No'),
    ('Perineural Invasion', 'not identified in sections examined', 'No'),
    ('Surgical Margin Status', 'Negative for carcinoma', 'Negative'),
    ('Surgical Margin Status', 'involved at the apex', 'Positive'),
    ('pN-Stage', 'PNX', 'pNX'),
    ('Number of Lymph Nodes Removed', '12 lymph nodes', 12),
    ('Number of Lymph Nodes Removed', 'twelve', NOT_REPORTED),
    ('Number of Lymph Nodes Removed', '0/12', 12),
    ('Number of Lymph Nodes Involved by Cancer', '0/12', 0),
    ('Number of Lymph Nodes Involved by Cancer', '2 of 15 nodes', 2),
    ('Number of Lymph Nodes Removed', '12 (left 5, right 7)', NOT_REPORTED),
    ('Specific Prostate Weight in g', '45 g (52 g with seminal vesicles)', NOT_REPORTED),
    ('Number of Lymph Nodes Involved by Cancer', 'none', 0),
    ('Specific Prostate Weight in g', '45 grams', 45.0),
    ('Specific Prostate Weight in g', '52.3 g', 52.3),
    ('Specific Prostate Weight in g', '0.5 g', NOT_REPORTED),
    ('Specific Prostate Weight in g', 'N/A', NOT_REPORTED),
])
def test_normalize_examples(schema, name, raw, expected):
    assert normalize(raw, schema.spec(name)) == expected


def test_normalize_records_out_of_domain_warnings(schema):
    warnings = []
    assert normalize('grade group 9', schema.spec('Primary Gleason Grade'), warnings) == NOT_REPORTED
    assert normalize('maybe', schema.spec('Surgical Margin Status'), warnings) == NOT_REPORTED
    assert len(warnings) == 2
    assert warnings[0].startswith('Primary Gleason Grade')


def test_normalize_warns_on_conflicting_numbers(schema):
    warnings = []
    assert normalize('3+4=8', schema.spec('Gleason Sum Score'), warnings) == NOT_REPORTED
    assert normalize('1.2 x 0.8 g', schema.spec('Specific Prostate Weight in g'), warnings) == NOT_REPORTED
    assert 'inconsistent Gleason sum' in warnings[0]
    assert 'conflicting numbers 1.2, 0.8' in warnings[1]


def test_number_roles_in_default_schema(schema):
    roles = {spec.name: spec.role for spec in schema if spec.role is not NumberRole.PLAIN}
    assert roles == {
        'Primary Gleason Grade': NumberRole.GLEASON_PRIMARY,
        'Secondary Gleason Grade': NumberRole.GLEASON_SECONDARY,
        'Gleason Sum Score': NumberRole.GLEASON_SUM,
        'Number of Lymph Nodes Removed': NumberRole.RATIO_WHOLE,
        'Number of Lymph Nodes Involved by Cancer': NumberRole.RATIO_PART,
    }
    with pytest.raises(ConfigError):
        VariableSpec('Margin', VariableKind.CATEGORICAL, domain=('Positive', NOT_REPORTED),
                     role=NumberRole.RATIO_PART)


def _fuzz_answer(rng):
    return ' '.join(rng.choice(FUZZ_WORDS) for _ in range(rng.randint(0, 6)))


def test_normalize_is_total_on_random_answers(schema):
    rng = random.Random(7)
    specs = list(schema)
    outside = []
    for _ in range(100_000):
        spec = rng.choice(specs)
        raw = _fuzz_answer(rng)
        value = normalize(raw, spec)
        if not spec.contains(value):
            outside.append((spec.name, raw, value))
    assert outside == []


@settings(max_examples=300, deadline=None)
@given(raw=st.text(max_size=80), index=st.integers(min_value=0, max_value=13))
def test_normalize_never_raises(raw, index):
    spec = default_schema().variables[index]
    assert spec.contains(normalize(raw, spec))


def test_normalize_answers_collects_warnings(schema):
    answers = parse_response('Primary Gleason Grade: 3\nSecondary Gleason Grade: 4\nGleason Sum Score: 8', schema)
    record = normalize_answers('doc_1', answers, schema, elapsed=1.5)
    assert record.values['Gleason Sum Score'] == 8
    assert record.elapsed == 1.5
    assert any('8 != 3 + 4' in w for w in record.warnings)


def test_validate_record_checks_nodes():
    record = ExtractionRecord('doc_1', {'Number of Lymph Nodes Removed': 2,
                                        'Number of Lymph Nodes Involved by Cancer': 3})
    assert validate_record(record) == ['doc_1: 3 nodes involved but only 2 removed']


def test_spec_validation():
    with pytest.raises(ConfigError):
        VariableSpec('Margin', VariableKind.CATEGORICAL, domain=('Positive', 'Negative'))
    with pytest.raises(ConfigError):
        VariableSpec('Margin', VariableKind.CATEGORICAL, domain=('Positive', NOT_REPORTED),
                     synonyms={'free': 'Negative'})
    with pytest.raises(ConfigError):
        VariableSpec('Count', VariableKind.INTEGER, value_range=(5, 1))
    spec = VariableSpec('Margin', VariableKind.CATEGORICAL, domain=('Positive', NOT_REPORTED))
    with pytest.raises(ConfigError):
        ExtractionSchema(variables=(spec, VariableSpec('margin', VariableKind.CATEGORICAL, domain=(NOT_REPORTED,))))


def test_schema_file_round_trip(tmp_path, schema):
    path = tmp_path / 'schema.txt'
    path.write_text(dump_schema(schema), encoding='utf-8')
    assert load_schema(path) == schema


def test_schema_file_subset(tmp_path):
    path = tmp_path / 'schema.txt'
    path.write_text('# two variables\n'
                    'name: Tumor Size\nkind: decimal\ndomain: 0..100\nunit: mm\n\n'
                    'name: Margin\nkind: categorical\ndomain: Positive | Negative | NotReported\n'
                    'synonyms: free => Negative\n', encoding='utf-8')
    schema = load_schema(path)
    assert schema.names == ['Tumor Size', 'Margin']
    assert normalize('12 millimeters', schema.spec('Tumor Size')) == 12.0
    assert normalize('free of tumor', schema.spec('Margin')) == 'Negative'


@pytest.mark.parametrize('text', [
    'name: X\n',
    'name: X\nkind: ordinal\n',
    'name: X\nkind: integer\ndomain: a..b\n',
    'name: X\nkind: categorical\ndomain: A | NotReported\nsynonyms: a -> A\n',
    'name: X\nkind: categorical\ndomain: A | NotReported\ncolour: red\n',
    'name: X\nkind: integer\ndomain: 0..9\nrole: median\n',
    'name: X\nkind: categorical\ndomain: A | NotReported\nrole: ratio-part\n',
])
def test_bad_schema_files(tmp_path, text):
    path = tmp_path / 'schema.txt'
    path.write_text(text, encoding='utf-8')
    with pytest.raises(ConfigError):
        load_schema(path)


def test_missing_schema_file(tmp_path):
    with pytest.raises(ConfigError):
        load_schema(tmp_path / 'nope.txt')


def _record(doc_id, schema, **values):
    filled = {name: NOT_REPORTED for name in schema.names}
    filled.update(values)
    return ExtractionRecord(doc_id, filled, elapsed=0.25)


def test_table_round_trip(tmp_path, schema):
    records = [
        _record('b', schema, **{'pT-Stage': 'pT3a', 'Gleason Sum Score': 7, 'Specific Prostate Weight in g': 52.3}),
        _record('a', schema),
    ]
    path = tmp_path / 'nested' / 'out.csv'
    write_table(records, path, schema)
    text = path.read_text(encoding='utf-8')
    lines = text.splitlines()
    assert lines[0] == ','.join(['doc_id'] + DEFAULT_NAMES + [ELAPSED_COLUMN])
    assert lines[1] == 'a,' + ','.join(['NR'] * 14) + ',0.250'
    back = read_table(path, schema)
    assert [r.doc_id for r in back] == ['a', 'b']
    assert back[1].values == records[0].values
    assert back[0].elapsed == 0.25


def test_table_excel_copy(tmp_path, schema):
    excel = tmp_path / 'out.xlsx'
    write_table([_record('a', schema)], tmp_path / 'out.csv', schema, excel_path=excel)
    assert excel.stat().st_size > 0


def test_write_table_rejects_bad_records(tmp_path, schema):
    with pytest.raises(InputFormatError):
        write_table([], tmp_path / 'out.csv', schema)
    with pytest.raises(InputFormatError):
        records_frame([ExtractionRecord('a', {'pT-Stage': 'pT2'})], schema)


def test_read_table_rejects_bad_files(tmp_path, schema):
    bad_header = tmp_path / 'header.csv'
    bad_header.write_text('doc_id,pT-Stage\na,pT2\n', encoding='utf-8')
    with pytest.raises(InputFormatError):
        read_table(bad_header, schema)

    path = tmp_path / 'value.csv'
    write_table([_record('a', schema)], path, schema)
    path.write_text(path.read_text(encoding='utf-8').replace('NR', '9', 2), encoding='utf-8')
    with pytest.raises(InputFormatError):
        read_table(path, schema)
