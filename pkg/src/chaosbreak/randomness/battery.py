from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..chaos_maps import SecretKey
from . import nist
from .bits import BitSequence, extract_prns

TEST_NAMES = (
    "frequency",
    "block_frequency",
    "cumulative_sums_forward",
    "runs",
    "rank",
    "nonoverlapping_template",
    "serial",
    "approximate_entropy",
    "fft",
)


@dataclass(frozen=True)
class TestParams:
    __test__ = False

    block_frequency_m: int = 100
    template_m: int = 9
    template_B: str = "010000111"
    serial_m: int = 16
    apen_m: int = 10
    rank_rows_cols: tuple[int, int] = (32, 32)
    alpha: float = 0.01

    def __post_init__(self):
        if len(self.template_B) != self.template_m or set(self.template_B) - {"0", "1"}:
            raise ValueError(f"template {self.template_B!r} is not a {self.template_m}-bit pattern")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")

    def to_dict(self) -> dict:
        return {
            "block_frequency_m": self.block_frequency_m,
            "template_m": self.template_m,
            "template_B": self.template_B,
            "serial_m": self.serial_m,
            "apen_m": self.apen_m,
            "rank_rows_cols": list(self.rank_rows_cols),
            "alpha": self.alpha,
        }


@dataclass
class BatteryReport:
    """Per-test results for each sequence plus per-test pass counts.

    For a single sequence ``sequences`` has one entry and every pass count
    is 0 or 1.
    """

    params: TestParams
    sequences: list[list[nist.TestResult]] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.sequences)

    @property
    def results(self) -> list[nist.TestResult]:
        """Results of the first (or only) sequence."""
        return self.sequences[0]

    @property
    def pass_counts(self) -> dict[str, int]:
        counts = dict.fromkeys(TEST_NAMES, 0)
        for results in self.sequences:
            for r in results:
                counts[r.test_name] += int(r.passed)
        return counts

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "count": self.count,
            "pass_counts": self.pass_counts,
            "sequences": [[r.to_dict() for r in results] for results in self.sequences],
        }


def _battery_calls(params: TestParams):
    a = params.alpha
    rows, cols = params.rank_rows_cols
    return (
        ("frequency", lambda s: nist.frequency_test(s, alpha=a)),
        ("block_frequency", lambda s: nist.block_frequency_test(s, params.block_frequency_m, alpha=a)),
        ("cumulative_sums_forward", lambda s: nist.cumulative_sums_forward_test(s, alpha=a)),
        ("runs", lambda s: nist.runs_test(s, alpha=a)),
        ("rank", lambda s: nist.rank_test(s, rows, cols, alpha=a)),
        ("nonoverlapping_template",
         lambda s: nist.nonoverlapping_template_test(s, params.template_B, alpha=a)),
        ("serial", lambda s: nist.serial_test(s, params.serial_m, alpha=a)),
        ("approximate_entropy", lambda s: nist.approximate_entropy_test(s, params.apen_m, alpha=a)),
        ("fft", lambda s: nist.fft_test(s, alpha=a)),
    )


def _run_all(s: BitSequence, params: TestParams) -> list[nist.TestResult]:
    results = []
    for name, call in _battery_calls(params):
        try:
            results.append(call(s))
        except nist.NotApplicableError as exc:
            results.append(nist.TestResult.not_applicable(name, str(exc)))
    return results


def run_battery(s: BitSequence, params: TestParams | None = None) -> BatteryReport:
    """Run all nine tests on one sequence.

    A test the sequence is too short for is kept in the report with status
    ``"not_applicable"`` and counts as a failure.
    """
    params = params or TestParams()
    return BatteryReport(params, [_run_all(s, params)])


def random_key(rng: np.random.Generator) -> SecretKey:
    """Uniform over the legal key domain, with K sampled from (18, 418]."""
    while True:
        x0 = rng.uniform(0.0, 2 * math.pi)
        y0 = rng.uniform(0.0, 2 * math.pi)
        if x0 > 0.0 and y0 > 0.0:
            break
    K = 418.0 - rng.uniform(0.0, 400.0)
    L = int(rng.integers(101, 1100))
    return SecretKey(x0, y0, K, L)


def batch_key(master_seed: int, index: int) -> SecretKey:
    """Key ``index`` of a batch; independent of how the batch is scheduled."""
    return random_key(np.random.default_rng([master_seed, index]))


def _one_sequence(args) -> list[nist.TestResult]:
    master_seed, index, M, N, params = args
    s = extract_prns(batch_key(master_seed, index), M, N, "B")
    return _run_all(s, params)


def batch_experiment(count: int, M: int, N: int, master_seed: int,
                     params: TestParams | None = None, workers: int | None = None) -> BatteryReport:
    """Battery over ``count`` blue-channel keystreams from seeded random keys.

    Parameters
    ----------
    count : int
        Number of keys (sequences); each gives ``8*M*N`` bits.
    M, N : int
        Keystream image height and width.
    master_seed : int
        Seed; key ``i`` is drawn from ``default_rng([master_seed, i])``.
    params : TestParams, optional
        Test parameters, defaults to the full-scale settings.
    workers : int, optional
        Process count. ``None`` or 1 runs in-process. The report does not
        depend on this value.
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    params = params or TestParams()
    jobs = [(master_seed, i, M, N, params) for i in range(count)]
    if workers is None or workers <= 1:
        sequences = [_one_sequence(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            sequences = list(pool.map(_one_sequence, jobs))
    return BatteryReport(params, sequences)
