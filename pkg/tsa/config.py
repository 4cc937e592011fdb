import os

class Config:
    """Configuration settings for the temporal spectrum toolkit"""

    TOOL_VERSION = "0.1.0"

    # Scenario defaults (used when the scenario file omits a value)
    DEFAULT_ALPHA = int(os.environ.get("TSA_ALPHA", "1"))
    DEFAULT_MIN_ELEVATION = float(os.environ.get("TSA_MIN_ELEVATION", "0.0"))

    # Visibility search
    COARSE_STEP_SECONDS = float(os.environ.get("TSA_COARSE_STEP", "30"))
    EPOCH_WARN_DAYS = float(os.environ.get("TSA_EPOCH_WARN_DAYS", "30"))

    # Eigensolvers
    JACOBI_TOLERANCE = 1e-12  # off-diagonal Frobenius norm relative to ||J||_F
    JACOBI_MAX_SWEEPS = 100
    QR_MAX_ITERATIONS = 60  # per deflated eigenvalue
    TIE_TOLERANCE = 1e-9  # relative, for station score comparisons

    # Execution settings
    DEFAULT_JOBS = int(os.environ.get("TSA_JOBS", str(os.cpu_count() or 1)))
    DEFAULT_OUTPUT_DIR = os.environ.get("TSA_OUTPUT_DIR", "out")
    LOG_LEVEL = os.environ.get("TSA_LOG_LEVEL", "INFO").upper()
