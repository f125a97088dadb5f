from __future__ import annotations

import logging
import contextvars


class RunIdFilter(logging.Filter):
    run_id_var = contextvars.ContextVar("run_id", default="-")

    def filter(self, record: logging.LogRecord) -> bool:  # type: ignore[override]
        if not hasattr(record, "run_id"):
            try:
                record.run_id = self.run_id_var.get()
            except Exception:
                record.run_id = "-"
        return True


def configure_logging(level: str = "WARNING") -> logging.Logger:
    """Route all records to stderr, stamped with the current run id."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s | %(levelname)s | %(name)s | run=%(run_id)s | %(message)s",
    )
    root = logging.getLogger()
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))
    # child loggers propagate to root handlers, so the filter goes on the handlers
    for handler in root.handlers:
        if not any(isinstance(f, RunIdFilter) for f in handler.filters):
            handler.addFilter(RunIdFilter())
    return logging.getLogger("hyperam")
