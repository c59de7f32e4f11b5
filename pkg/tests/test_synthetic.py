# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 23:05
# @File    : test_synthetic.py
# @Software: PyCharm
from service.schema import NOT_REPORTED, read_table, validate_record
from service.synthetic import generate_reports, simulate_abstractor, write_corpus


def test_reports_are_reproducible():
    assert generate_reports(5, seed=3) == generate_reports(5, seed=3)
    assert generate_reports(5, seed=3) != generate_reports(5, seed=4)


def test_planted_values_are_consistent(schema):
    for report in generate_reports(200, seed=1):
        record = report.record()
        assert list(record.values) == schema.names
        assert all(schema.spec(name).contains(value) for name, value in record.values.items())
        assert validate_record(record) == []
        if record.values['pN-Stage'] == 'pN1':
            assert record.values['Number of Lymph Nodes Involved by Cancer'] > 0


def test_not_reported_values_are_left_out_of_the_text():
    report = generate_reports(1, seed=0, not_reported_rate=1.0)[0]
    assert set(report.values.values()) == {NOT_REPORTED}
    assert 'GLEASON' not in report.text
    assert 'Pathologic stage' not in report.text


def test_write_corpus(tmp_path, schema):
    reports = generate_reports(4, seed=2)
    truth = tmp_path / 'truth.csv'
    write_corpus(reports, tmp_path / 'corpus', truth_path=truth)
    assert sorted(p.name for p in (tmp_path / 'corpus').iterdir()) == [f'report_00{i}.txt' for i in range(1, 5)]
    assert [r.values for r in read_table(truth, schema)] == [r.values for r in reports]


def test_simulated_abstractor_error_rate():
    reports = generate_reports(100, seed=5)
    perfect = simulate_abstractor(reports, 'a', error_rate=0.0, seed=1)
    assert all(r.value == reports[i // 14].values[r.variable] for i, r in enumerate(perfect))
    sloppy = simulate_abstractor(reports, 'b', error_rate=0.5, seed=1)
    wrong = sum(r.value != reports[i // 14].values[r.variable] for i, r in enumerate(sloppy))
    assert 500 < wrong < 900
