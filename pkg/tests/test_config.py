import json
import logging
import os

from utils.common import parse_ordering, sanitize_filename, save_text_to_file
from utils.config import DEFAULT_CONFIG, load_config, save_config
from utils.logging_setup import LOG_FILE, clear_log_file, clear_session_logs, get_session_logs, logger, read_log_file


def test_missing_file_creates_defaults(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = load_config("settings.json")
    assert config["output_folder"] == os.path.join(str(tmp_path), "results")
    assert config["min_obdd_cap"] == DEFAULT_CONFIG["min_obdd_cap"]
    with open(tmp_path / "settings.json") as f:
        assert json.load(f) == config


def test_missing_keys_fall_back(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"workers": 4}))
    config = load_config(str(path))
    assert config["workers"] == 4
    assert config["growth_ratio_threshold"] == 1.5


def test_min_obdd_cap_is_clamped(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"min_obdd_cap": 40}))
    assert load_config(str(path))["min_obdd_cap"] == 16


def test_save_round_trip(tmp_path):
    path = str(tmp_path / "settings.json")
    config = dict(DEFAULT_CONFIG, workers=3)
    assert save_config(config, path)
    assert load_config(path) == config
    assert not save_config(config, str(tmp_path / "missing" / "settings.json"))


def test_common_helpers(tmp_path):
    assert sanitize_filename("prime:4:P2,0") == "prime_4_P2_0"
    assert parse_ordering(" 3,1,2 ") == [3, 1, 2]
    assert parse_ordering("") == []
    assert save_text_to_file(None, str(tmp_path / "none.txt")) is None
    path = save_text_to_file("a\nb\n", str(tmp_path / "sub" / "text.txt"))
    with open(path, 'rb') as f:
        assert f.read() == b"a\nb\n"


def test_session_logs(caplog):
    caplog.set_level(logging.INFO, logger=logger.name)
    clear_session_logs()
    logger.info("separation instance done")
    assert "separation instance done" in get_session_logs()
    clear_session_logs()
    assert get_session_logs() == ""


def test_log_file_is_fixed(tmp_path):
    assert LOG_FILE == "sddlab.log"
    assert "log_file" not in DEFAULT_CONFIG
    path = tmp_path / "run.log"
    path.write_text("first\nsecond\nthird\n", encoding="utf-8")
    assert read_log_file(str(path), last_n_lines=2) == "second\nthird\n"
    assert clear_log_file(str(path))
    assert path.read_text(encoding="utf-8") == ""
    assert read_log_file(str(tmp_path / "missing.log")).startswith("Error reading log file")
