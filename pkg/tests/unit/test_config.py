"""Settings layering: defaults, config.json sections and environment variables"""

import json

import pytest

from pydantic import ValidationError

from iwasawa_lab.config import DEFAULT_CORPUS_DIR, get_settings, load_config_file, reset_settings
from iwasawa_lab.models.report import SuiteReport, Verdict, VerificationReport

pytestmark = pytest.mark.unit


def write_config(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_defaults():
    settings = get_settings()
    assert settings.corpus_dir == DEFAULT_CORPUS_DIR
    assert settings.default_height == 2
    assert settings.default_rmax == 3
    assert settings.log_level == "WARNING"


def test_config_file_sections(tmp_path, monkeypatch):
    path = write_config(tmp_path / "config.json", {"verify": {"height": 3, "max_workers": 2}, "logging": {"json": True}})
    monkeypatch.setenv("IWASAWA_LAB_CONFIG", str(path))
    reset_settings()
    settings = get_settings()
    assert settings.default_height == 3
    assert settings.max_workers == 2
    assert settings.log_json is True


def test_environment_beats_file(tmp_path, monkeypatch):
    path = write_config(tmp_path / "config.json", {"verify": {"height": 3}})
    monkeypatch.setenv("IWASAWA_LAB_CONFIG", str(path))
    monkeypatch.setenv("IWASAWA_LAB_DEFAULT_HEIGHT", "5")
    reset_settings()
    assert get_settings().default_height == 5


def test_env_references_in_file(tmp_path, monkeypatch):
    path = write_config(tmp_path / "config.json", {"corpus": {"dir": "env:MY_CORPUS"}})
    assert load_config_file(path) == {}
    monkeypatch.setenv("MY_CORPUS", str(tmp_path))
    assert load_config_file(path) == {"corpus_dir": str(tmp_path)}


def test_broken_config_file_is_ignored(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{not json", encoding="utf-8")
    assert load_config_file(path) == {}


def test_settings_are_cached():
    assert get_settings() is get_settings()


# ----------------------------------------------------------------- reports


def report(name, verdict):
    return VerificationReport(name=name, claim="c", reference="r", verdict=verdict, elapsed_ms=1.5)


def test_suite_verdict_precedence():
    assert SuiteReport(subject="s", reports=[report("a", Verdict.passed)]).exit_code == 0
    mixed = SuiteReport(subject="s", reports=[report("a", Verdict.malformed), report("b", Verdict.passed)])
    assert mixed.verdict is Verdict.malformed and mixed.exit_code == 2
    failing = SuiteReport(subject="s", reports=[report("a", Verdict.malformed), report("b", Verdict.failed)])
    assert failing.verdict is Verdict.failed and failing.exit_code == 1


def test_stable_dump_drops_timing():
    dumped = report("a", Verdict.passed).stable_dump()
    assert "elapsed_ms" not in dumped
    assert dumped["verdict"] == "pass"


def test_report_requires_a_reference():
    with pytest.raises(ValidationError):
        VerificationReport(name="a", claim="c", verdict=Verdict.passed)
    assert report("a", Verdict.passed).stable_dump()["reference"] == "r"
