import os
import sys
from dotenv import load_dotenv

# Загружаем переменные из .env файла
load_dotenv()


def _env_int(name: str, default: int) -> int:
    """Читает int из окружения, при мусоре - дефолт + предупреждение"""
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except (ValueError, TypeError):
        print(f"[CONFIG] ⚠️ {name}={raw!r} не число, используем {default}", file=sys.stderr)
        return default


# ===========================================
# WORKER POOL
# ===========================================
# 1 = всё в одном процессе, без пула
WORKERS = max(1, _env_int("CDS_WORKERS", 1))

# ===========================================
# EXACT ORACLE
# ===========================================
ORACLE_MAX_N = _env_int("CDS_ORACLE_MAX_N", 20)

# ===========================================
# RUN DEFAULTS
# ===========================================
DEFAULT_SEED = _env_int("CDS_DEFAULT_SEED", 0)
TRACE_EVERY = max(0, _env_int("CDS_TRACE_EVERY", 0))

# ===========================================
# LOGGING
# ===========================================
LOG_LEVEL = os.getenv("CDS_LOG_LEVEL", "INFO").upper()
LOG_FILE = os.getenv("CDS_LOG_FILE", "")
LOG_TRACEBACKS = os.getenv("CDS_LOG_TRACEBACKS", "true").lower() == "true"


def describe_config() -> str:
    """Баннер с текущей конфигурацией (печатается по --show-config)"""
    lines = [
        "=" * 50,
        "📋 ЗАГРУЖЕННАЯ КОНФИГУРАЦИЯ",
        "=" * 50,
        f"Workers: {WORKERS}",
        f"Oracle max n: {ORACLE_MAX_N}",
        "-" * 50,
        f"Default seed: {DEFAULT_SEED}",
        f"Trace every: {TRACE_EVERY or 'off'}",
        "-" * 50,
        f"Log level: {LOG_LEVEL}",
        f"Log file: {LOG_FILE or '⚠️ не задан (только stderr)'}",
        f"Tracebacks: {LOG_TRACEBACKS}",
        "=" * 50,
    ]
    return "\n".join(lines)
