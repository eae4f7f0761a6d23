"""
Service Logger v2.0

Централизованное логирование:
- Всё пишется в stderr одной строкой (stdout занят отчётами CLI)
- Если задан CDS_LOG_FILE - дублируется в файл JSON-строками
- Записи ниже CDS_LOG_LEVEL отбрасываются

Использование:
    from service_logger import slog

    # Простой лог
    slog.error("GRAPH", "PARSE_ERROR", "Не удалось разобрать файл графа", extra={"path": path})

    # С доп. данными
    slog.warning("BENCH", "EA_WORSE", "SEMO хуже greedy больше чем на 1",
                 extra={"instance": "ba-n15-s0", "delta": 1.4})

    # Info
    slog.info("SYSTEM", "STARTUP", "bench запущен")
"""

import json
import sys
import traceback as tb_module
from datetime import datetime, timezone
from typing import Optional, Dict, Any


LEVELS = {"DEBUG": 10, "INFO": 20, "WARNING": 30, "ERROR": 40, "CRITICAL": 50}


class ServiceLogger:
    """
    Централизованный логгер.
    Пишет в stderr + опционально в JSON-lines файл.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        from config import LOG_LEVEL, LOG_FILE, LOG_TRACEBACKS

        self._threshold = LEVELS.get(LOG_LEVEL, LEVELS["INFO"])
        self._file_path = LOG_FILE or None
        self._tracebacks = LOG_TRACEBACKS
        self._initialized = True

    def configure(self, level: Optional[str] = None, file_path: Optional[str] = None):
        """Переопределяет уровень/файл в рантайме (CLI флаги, тесты)"""
        if level is not None:
            self._threshold = LEVELS.get(level.upper(), self._threshold)
        if file_path is not None:
            self._file_path = file_path or None

    def enabled_for(self, level: str) -> bool:
        return LEVELS.get(level, 0) >= self._threshold

    def _write_to_file(self, log_entry: dict):
        """Дописывает запись в JSON-lines файл"""
        try:
            with open(self._file_path, "a", encoding="utf-8") as f:
                f.write(json.dumps(log_entry, ensure_ascii=False, default=str) + "\n")
        except Exception as e:
            print(f"[SLOG] ✗ Ошибка записи лога в файл: {e}", file=sys.stderr)

    def log(
        self,
        level: str,
        category: str,
        event_type: str,
        message: str,
        duration_ms: int = None,
        extra: Dict[str, Any] = None,
        include_traceback: bool = False,
    ):
        """
        Основной метод логирования.

        Args:
            level: DEBUG, INFO, WARNING, ERROR, CRITICAL
            category: GRAPH, ENGINE, BASELINE, GEN, BENCH, CLI, SYSTEM
            event_type: PARSE_ERROR, RUN_DONE, ROW_FAIL, RATIO_VIOLATION, etc.
            message: Человекочитаемое сообщение
            duration_ms: Длительность в миллисекундах
            extra: Произвольные доп. данные
            include_traceback: Добавить текущий traceback
        """
        if not self.enabled_for(level):
            return

        now = datetime.now(timezone.utc)
        timestamp = now.strftime("%Y-%m-%d %H:%M:%S UTC")

        traceback_str = None
        if include_traceback and self._tracebacks:
            tb = tb_module.format_exc()
            if tb and tb != "NoneType: None\n":
                traceback_str = tb[-3000:]

        mark = {"DEBUG": "🔍", "INFO": "ℹ️", "WARNING": "⚠️", "ERROR": "🔴", "CRITICAL": "🚨"}.get(level, "📝")
        duration_str = f" {duration_ms}ms" if duration_ms is not None else ""
        extra_str = ""
        if extra:
            extra_str = " " + " ".join(f"{k}={v}" for k, v in extra.items())
        try:
            print(f"[{timestamp}] {mark} [{level}] [{category}] {event_type}: {message}{duration_str}{extra_str}",
                  file=sys.stderr)
            if traceback_str:
                print(traceback_str, file=sys.stderr)
        except Exception:
            pass

        if self._file_path:
            self._write_to_file({
                "timestamp": now.isoformat(),
                "level": level,
                "category": category,
                "event_type": event_type,
                "message": message,
                "duration_ms": duration_ms,
                "extra": extra,
                "traceback": traceback_str,
            })

    # ==========================================
    # Удобные обёртки
    # ==========================================

    def debug(self, category: str, event_type: str, message: str, **kwargs):
        self.log("DEBUG", category, event_type, message, **kwargs)

    def info(self, category: str, event_type: str, message: str, **kwargs):
        self.log("INFO", category, event_type, message, **kwargs)

    def warning(self, category: str, event_type: str, message: str, **kwargs):
        self.log("WARNING", category, event_type, message, **kwargs)

    def error(self, category: str, event_type: str, message: str, **kwargs):
        self.log("ERROR", category, event_type, message, **kwargs)

    def critical(self, category: str, event_type: str, message: str, **kwargs):
        self.log("CRITICAL", category, event_type, message, **kwargs)

    # ==========================================
    # Специализированные методы для частых кейсов
    # ==========================================

    def log_run_event(self, algorithm: str, n: int, report):
        """
        Логирует завершение прогона эволюционного алгоритма.
        Вызывается из evo_engine.run().
        """
        duration_ms = int(report.wall_time * 1000)
        if report.solution is not None:
            self.debug(
                "ENGINE", "RUN_DONE",
                f"{algorithm} n={n}: CDS размера {report.solution_size} за {report.iterations_used} итераций",
                duration_ms=duration_ms,
                extra={"first_feasible": report.first_feasible_iteration,
                       "archive": len(report.final_archive)},
            )
        else:
            self.debug(
                "ENGINE", "RUN_INFEASIBLE",
                f"{algorithm} n={n}: допустимого решения нет после {report.iterations_used} итераций",
                duration_ms=duration_ms,
                extra={"archive": len(report.final_archive)},
            )

    def log_bench_event(
        self,
        action: str,
        instance: str,
        solver: str,
        success: bool = True,
        error_msg: str = None,
        extra: dict = None,
    ):
        """Логирует события харнесса (строки, падения задач)"""
        if success:
            self.debug(
                "BENCH", f"{action.upper()}",
                f"{action}: instance={instance}, solver={solver}",
                extra=extra,
            )
        else:
            self.error(
                "BENCH", f"{action.upper()}_FAIL",
                f"{action} failed: instance={instance}, solver={solver}: {error_msg}",
                extra=extra,
            )


# Глобальный экземпляр
slog = ServiceLogger()
