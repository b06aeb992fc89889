from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional


def _explicit_env_path() -> Optional[Path]:
    p = (os.getenv("LMATRIX_CONFIG") or "").strip()
    return Path(p).expanduser() if p else None


def _default_env_paths() -> list[Path]:
    """Search order for config.env when LMATRIX_CONFIG is unset.

    Works both inside a checkout (repo-local data/config.env) and from a global
    install (~/.lmatrix or XDG).
    """
    local = Path.cwd() / "data" / "config.env"
    home = Path.home() / ".lmatrix" / "config.env"
    xdg = Path(os.getenv("XDG_CONFIG_HOME") or (Path.home() / ".config")) / "lmatrix" / "config.env"
    return [local, home, xdg]


def find_config_env() -> Path:
    # LMATRIX_CONFIG wins even when the file is missing; its directory still anchors data/.
    explicit = _explicit_env_path()
    if explicit is not None:
        return explicit
    for p in _default_env_paths():
        if p.exists():
            return p
    return Path.home() / ".lmatrix" / "config.env"


@dataclass(frozen=True)
class AppConfig:
    # Base directory for relative paths (data/)
    base_dir: Path

    # Harness budgets; CLI flags override these.
    max_rank: int = 5
    max_len: int = 7
    word_length_cap: int = 10_000
    term_cap: int = 100_000
    search_node_cap: int = 1_000_000

    jobs: int = 1
    run_log: str = "data/run_log.csv"

    @property
    def run_log_path(self) -> Path:
        p = Path(self.run_log)
        return p if p.is_absolute() else self.base_dir / p


def _load_envfile(path: Path) -> None:
    if not path.exists():
        return
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        k, v = line.split("=", 1)
        os.environ.setdefault(k.strip(), v.strip())


def load_config(env_path: Optional[Path] = None) -> AppConfig:
    env_path = env_path or find_config_env()
    _load_envfile(env_path)

    def geti(name: str, default: int) -> int:
        v = (os.getenv(name) or "").strip()
        if not v:
            return default
        try:
            return int(v)
        except ValueError:
            return default

    # - repo-local <base>/data/config.env => base=<base>
    # - otherwise the directory holding config.env (e.g. ~/.lmatrix)
    if env_path.name == "config.env" and env_path.parent.name == "data":
        base_dir = env_path.parent.parent
    else:
        base_dir = env_path.parent

    return AppConfig(
        base_dir=base_dir,
        max_rank=geti("MAX_RANK", AppConfig.max_rank),
        max_len=geti("MAX_LEN", AppConfig.max_len),
        word_length_cap=geti("WORD_LENGTH_CAP", AppConfig.word_length_cap),
        term_cap=geti("TERM_CAP", AppConfig.term_cap),
        search_node_cap=geti("SEARCH_NODE_CAP", AppConfig.search_node_cap),
        jobs=max(1, geti("JOBS", AppConfig.jobs)),
        run_log=(os.getenv("RUN_LOG") or AppConfig.run_log).strip(),
    )
