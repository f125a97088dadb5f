from __future__ import annotations

import os
from fractions import Fraction
from dotenv import load_dotenv

load_dotenv()

DEFAULT_ORDER: int = int(os.getenv("HYPERAM_DEFAULT_ORDER", "200"))
MAX_ORDER: int = int(os.getenv("HYPERAM_MAX_ORDER", "5000"))
ESCALATION_CAP: int = int(os.getenv("HYPERAM_ESCALATION_CAP", "5000"))
DEFAULT_WORKERS: int = int(os.getenv("HYPERAM_WORKERS", str(os.cpu_count() or 1)))
LOG_LEVEL: str = os.getenv("HYPERAM_LOG_LEVEL", "WARNING")
EVAL_REL_TOL: float = float(os.getenv("HYPERAM_EVAL_REL_TOL", "1e-15"))
EVAL_TERM_CAP: int = int(os.getenv("HYPERAM_EVAL_TERM_CAP", "10000000"))
ENCLOSURE_EPS: Fraction = Fraction(os.getenv("HYPERAM_ENCLOSURE_EPS", "1/1000000"))
