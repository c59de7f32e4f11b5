# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 22:55
# @File    : test_run_config.py
# @Software: PyCharm
import pytest

from config import config
from config.run_config import EMBEDDER_REMOTE, RunConfig, build_run_config, read_config_file
from service.completion import BackendConfig, BackendKind
from service.embedding import ChunkingConfig
from utils.exceptions import ConfigError

KEY_ENV = 'ABSTRACT_TEST_KEY'


def write(tmp_path, text):
    path = tmp_path / 'run.conf'
    path.write_text(text, encoding='utf-8')
    return path


def test_read_config_file(tmp_path):
    path = write(tmp_path, '# scanned batch\ninput = reports\nk = 7\nchunk-words = 120\ntimeout = 5.5\n\n')
    assert read_config_file(path) == {'input': 'reports', 'k': 7, 'chunk_words': 120, 'timeout': 5.5}


@pytest.mark.parametrize('line', ['api_key = sk-123', 'token = abc', 'openai_secret = x'])
def test_secrets_are_not_read_from_files(tmp_path, line):
    with pytest.raises(ConfigError, match='environment'):
        read_config_file(write(tmp_path, line + '\n'))


@pytest.mark.parametrize('line', ['colour = red', 'k = five', 'k'])
def test_bad_config_lines(tmp_path, line):
    with pytest.raises(ConfigError):
        read_config_file(write(tmp_path, line + '\n'))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        read_config_file(tmp_path / 'nope.conf')


def test_flags_override_file_over_defaults():
    run = build_run_config({'k': 3, 'model': None, 'input': 'in'}, {'k': 7, 'model': 'davinci', 'overlap': 20})
    assert run.k == 3
    assert run.backend.model_name == 'davinci'
    assert run.chunking == ChunkingConfig(config.words_per_chunk, 20)
    assert run.concurrency == config.concurrency
    assert run.backend.kind is BackendKind.MOCK_RULES
    assert run.input_dir == 'in'


def test_paper_mode_pins_parameters():
    run = build_run_config({'paper_mode': True, 'k': 9, 'chunk_words': 80, 'overlap': 10, 'template': 't.txt'})
    assert run.paper_mode
    assert run.k == 5
    assert run.chunking == ChunkingConfig(200, 50)
    assert run.temperature == 0.0
    assert run.template_file is None


@pytest.mark.parametrize('options', [
    {'backend': 'carrier-pigeon'},
    {'chunk_words': 50, 'overlap': 50},
    {'max_retries': -1},
])
def test_bad_values_become_config_errors(options):
    with pytest.raises(ConfigError):
        build_run_config(options)


def test_validate(tmp_path, monkeypatch):
    run = RunConfig(input_dir=str(tmp_path), output_path=str(tmp_path / 'out.csv'))
    assert run.validate() is run
    bad = [
        RunConfig(input_dir=str(tmp_path / 'missing'), output_path='out.csv'),
        RunConfig(input_dir=str(tmp_path), output_path=''),
        RunConfig(input_dir=str(tmp_path), output_path='out.csv', k=0),
        RunConfig(input_dir=str(tmp_path), output_path='out.csv', concurrency=0),
        RunConfig(input_dir=str(tmp_path), output_path='out.csv', schema_file=str(tmp_path / 'schema.txt')),
        RunConfig(input_dir=str(tmp_path), output_path='out.csv', embedder='bert'),
        RunConfig(input_dir=str(tmp_path), output_path='out.csv', embedder=EMBEDDER_REMOTE),
    ]
    for candidate in bad:
        with pytest.raises(ConfigError):
            candidate.validate()


def test_remote_backend_needs_key_in_environment(tmp_path, monkeypatch):
    run = RunConfig(input_dir=str(tmp_path), output_path='out.csv',
                    backend=BackendConfig(kind=BackendKind.REMOTE_API, api_key_env=KEY_ENV))
    monkeypatch.delenv(KEY_ENV, raising=False)
    with pytest.raises(ConfigError, match=KEY_ENV):
        run.validate()
    monkeypatch.setenv(KEY_ENV, 'sk-test')
    assert run.validate() is run


def test_rules_path_from_file_and_flag(tmp_path):
    rules = tmp_path / 'rules.tsv'
    rules.write_text('# version: 2\n', encoding='utf-8')
    run = build_run_config({'input': str(tmp_path), 'output': 'out.csv'},
                           read_config_file(write(tmp_path, f'rules = {rules}\n')))
    assert run.backend.rules_path == str(rules)
    assert run.validate() is run
    assert build_run_config({'rules': 'other.tsv'}, {'rules': str(rules)}).backend.rules_path == 'other.tsv'
    assert build_run_config({}).backend.rules_path == config.MOCK_RULES_PATH


def test_validate_rejects_missing_rules_file(tmp_path):
    run = build_run_config({'input': str(tmp_path), 'output': 'out.csv', 'rules': str(tmp_path / 'none.tsv')})
    with pytest.raises(ConfigError, match='mock rules'):
        run.validate()
