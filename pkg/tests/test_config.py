from pathlib import Path

from lmatrix.config import find_config_env, load_config


def test_explicit_config_path_wins_even_when_missing(tmp_path, monkeypatch):
    home = tmp_path / "home"
    (home / ".lmatrix").mkdir(parents=True)
    (home / ".lmatrix" / "config.env").write_text("MAX_RANK=2\n", encoding="utf-8")
    monkeypatch.setattr(Path, "home", classmethod(lambda cls: home))
    target = tmp_path / "cfg" / "config.env"
    monkeypatch.setenv("LMATRIX_CONFIG", str(target))

    assert find_config_env() == target
    cfg = load_config()
    assert cfg.max_rank == 5
    assert cfg.run_log_path == tmp_path / "cfg" / "data" / "run_log.csv"


def test_explicit_config_file_is_read(tmp_path, monkeypatch):
    target = tmp_path / "config.env"
    target.write_text("# budgets\nMAX_LEN=3\nJOBS=0\nRUN_LOG=logs/runs.csv\n", encoding="utf-8")
    monkeypatch.setenv("LMATRIX_CONFIG", str(target))

    cfg = load_config()
    assert cfg.max_len == 3
    assert cfg.jobs == 1
    assert cfg.run_log_path == tmp_path / "logs" / "runs.csv"


def test_repo_local_data_dir_is_the_base(tmp_path, monkeypatch):
    monkeypatch.delenv("LMATRIX_CONFIG", raising=False)
    (tmp_path / "data").mkdir()
    (tmp_path / "data" / "config.env").write_text("TERM_CAP=7\n", encoding="utf-8")
    monkeypatch.chdir(tmp_path)

    assert find_config_env().resolve() == (tmp_path / "data" / "config.env").resolve()
    cfg = load_config()
    assert cfg.term_cap == 7
    assert cfg.base_dir.resolve() == tmp_path.resolve()
