"""
Configuration for the Collatz form-analysis toolkit.
Loads settings from environment variables or .env file.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load .env from the package directory
_env_path = Path(__file__).resolve().parent / ".env"
load_dotenv(_env_path)


# ── Step limits for numeric searches ─────────────────────────────────
STOPPING_TIME_MAX_STEPS = int(os.getenv("STOPPING_TIME_MAX_STEPS", "1000000"))
TOTAL_STOPPING_TIME_MAX_STEPS = int(
    os.getenv("TOTAL_STOPPING_TIME_MAX_STEPS", "10000000")
)
# Default truncation for plain sequence / column traces
SEQUENCE_MAX_STEPS = int(os.getenv("SEQUENCE_MAX_STEPS", "1000"))

# ── Reverse cascades ─────────────────────────────────────────────────
PMCS_MAX_ITER = int(os.getenv("PMCS_MAX_ITER", "1000"))

# ── Symbolic (composite form) stepping ───────────────────────────────
SYMBOLIC_STEP_LIMIT = int(os.getenv("SYMBOLIC_STEP_LIMIT", "10000"))

# ── Principal-form range scans ───────────────────────────────────────
SCAN_STEP_LIMIT = int(os.getenv("SCAN_STEP_LIMIT", "100000"))
SCAN_WINDOW = int(os.getenv("SCAN_WINDOW", "10000"))
SCAN_JOBS = int(os.getenv("SCAN_JOBS", "1"))
# Numbers per summary row of a scan
SCAN_BLOCK = int(os.getenv("SCAN_BLOCK", "1000000"))

# ── Expression parser ────────────────────────────────────────────────
# Upper bound on the bit length of any `^` result
MAX_EXPR_BITS = int(os.getenv("MAX_EXPR_BITS", str(1 << 22)))

# ── Excel export ─────────────────────────────────────────────────────
EXCEL_FILE_PATH = os.getenv(
    "EXCEL_FILE_PATH",
    str(Path(__file__).resolve().parent / "collatz_tables.xlsx"),
)
