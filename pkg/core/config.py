import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

EMBEDDED_TABLE_PATH = (
    Path(__file__).resolve().parent.parent / "commute" / "data" / "witnesses.table"
)


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw.replace("_", ""))
    except ValueError:
        return default


class Config:
    BRUHAT_GUARD: int
    MAX_CLASSES: int
    MAX_STEPS: int
    FAMILY_MAX_RANK: int
    SCAN_MAX_LENGTH: int
    THREADS: int
    TABLE_PATH: Path
    LOG_LEVEL: str

    def __init__(self) -> None:
        self.BRUHAT_GUARD = _int_env("HECKE_BRUHAT_GUARD", 1_000_000)
        self.MAX_CLASSES = _int_env("HECKE_MAX_CLASSES", 10_000)
        self.MAX_STEPS = _int_env("HECKE_MAX_STEPS", 1_000_000)
        self.FAMILY_MAX_RANK = _int_env("HECKE_FAMILY_MAX_RANK", 8)
        self.SCAN_MAX_LENGTH = _int_env("HECKE_SCAN_MAX_LENGTH", 8)
        self.THREADS = max(1, _int_env("HECKE_THREADS", 1))

        table_path = os.getenv("HECKE_TABLE_PATH", "").strip()
        self.TABLE_PATH = Path(table_path) if table_path else EMBEDDED_TABLE_PATH

        self.LOG_LEVEL = os.getenv("HECKE_LOG_LEVEL", "INFO").upper()


application_config = Config()
