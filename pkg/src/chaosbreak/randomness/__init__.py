"""Statistical randomness testing of the chaotic keystream."""

from .battery import (
    TEST_NAMES,
    BatteryReport,
    TestParams,
    batch_experiment,
    batch_key,
    random_key,
    run_battery,
)
from .bits import BitSequence, extract_prns
from .nist import (
    NotApplicableError,
    TestResult,
    approximate_entropy_test,
    block_frequency_test,
    cumulative_sums_forward_test,
    fft_test,
    frequency_test,
    nonoverlapping_template_test,
    rank_test,
    runs_test,
    serial_test,
)
