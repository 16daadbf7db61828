"""The nine SP 800-22 statistical tests used to judge the keystream.

Each test takes a :class:`BitSequence` and returns a :class:`TestResult`.
Tests raise :class:`NotApplicableError` when the sequence is too short for
the requested parameters. ``strict=False`` waives the recommended minimum
lengths so the short worked examples of SP 800-22 can be run; hard limits
(e.g. at least one full block) always apply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc, gammaincc, ndtr

from .bits import BitSequence

DEFAULT_ALPHA = 0.01


class NotApplicableError(ValueError):
    """The sequence cannot support the test at the requested parameters."""


@dataclass
class TestResult:
    """Outcome of one statistical test on one sequence.

    ``passed`` is true iff every P-value is at least ``alpha``. ``status`` is
    ``"ok"``, ``"prerequisite_failed"`` (runs test, reported with P = 0) or
    ``"not_applicable"`` (no P-values, counted as a failure).
    """

    __test__ = False  # not a pytest class

    test_name: str
    p_values: list[float]
    passed: bool
    status: str = "ok"
    statistics: dict = field(default_factory=dict)

    @classmethod
    def from_p_values(cls, name, p_values, alpha, status="ok", **statistics):
        ps = [float(min(max(p, 0.0), 1.0)) for p in p_values]
        return cls(name, ps, all(p >= alpha for p in ps), status, statistics)

    @classmethod
    def not_applicable(cls, name, reason):
        return cls(name, [], False, "not_applicable", {"reason": reason})

    def to_dict(self) -> dict:
        return {
            "test_name": self.test_name,
            "p_values": self.p_values,
            "pass": self.passed,
            "status": self.status,
            "statistics": {k: _plain(v) for k, v in self.statistics.items()},
        }


def _plain(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    return v


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise NotApplicableError(msg)


def igamc(a, x):
    """Regularized upper incomplete gamma ``Q(a, x)``."""
    return gammaincc(a, x)


def window_values(bits: np.ndarray, m: int, wrap: bool) -> np.ndarray:
    """Integer value of every ``m``-bit window, MSB first.

    With ``wrap`` the first ``m - 1`` bits are appended so there are ``n``
    windows; otherwise there are ``n - m + 1``.
    """
    b = np.asarray(bits, dtype=np.int64)
    if wrap:
        b = np.concatenate([b, b[: m - 1]])
    count = b.size - m + 1
    vals = np.zeros(count, dtype=np.int64)
    for j in range(m):
        vals = (vals << 1) | b[j: j + count]
    return vals


def frequency_test(s: BitSequence, alpha: float = DEFAULT_ALPHA, strict: bool = True) -> TestResult:
    n = s.n
    _require(not strict or n >= 100, f"frequency test needs n >= 100, got {n}")
    total = 2 * int(s.bits.sum()) - n
    s_obs = abs(total) / math.sqrt(n)
    p = erfc(s_obs / math.sqrt(2))
    return TestResult.from_p_values("frequency", [p], alpha, S_n=total, s_obs=s_obs)


def block_frequency_test(s: BitSequence, m: int = 100, alpha: float = DEFAULT_ALPHA,
                         strict: bool = True) -> TestResult:
    n = s.n
    _require(m >= 1 and n >= m, f"block frequency test needs n >= m (n={n}, m={m})")
    _require(not strict or n >= 100, f"block frequency test needs n >= 100, got {n}")
    blocks = n // m
    pi = s.bits[: blocks * m].reshape(blocks, m).sum(axis=1) / m
    chi2 = 4.0 * m * float(np.sum((pi - 0.5) ** 2))
    p = igamc(blocks / 2.0, chi2 / 2.0)
    return TestResult.from_p_values("block_frequency", [p], alpha, blocks=blocks, chi2=chi2)


def _tdiv(a: int, b: int) -> int:
    """Integer division truncating toward zero, as in C."""
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b > 0) else -q


def _cusum_p_value(n: int, z: int) -> float:
    tdiv = _tdiv
    sq = math.sqrt(n)
    k = np.arange(tdiv(tdiv(-n, z) + 1, 4), tdiv(tdiv(n, z) - 1, 4) + 1)
    sum1 = np.sum(ndtr((4 * k + 1) * z / sq) - ndtr((4 * k - 1) * z / sq))
    k = np.arange(tdiv(tdiv(-n, z) - 3, 4), tdiv(tdiv(n, z) - 1, 4) + 1)
    sum2 = np.sum(ndtr((4 * k + 3) * z / sq) - ndtr((4 * k + 1) * z / sq))
    return float(1.0 - sum1 + sum2)


def cumulative_sums_forward_test(s: BitSequence, alpha: float = DEFAULT_ALPHA,
                                 strict: bool = True) -> TestResult:
    n = s.n
    _require(not strict or n >= 100, f"cumulative sums test needs n >= 100, got {n}")
    walk = np.cumsum(2 * s.bits.astype(np.int64) - 1)
    z = int(np.max(np.abs(walk)))
    p = _cusum_p_value(n, z)
    return TestResult.from_p_values("cumulative_sums_forward", [p], alpha, z=z)


def runs_test(s: BitSequence, alpha: float = DEFAULT_ALPHA, strict: bool = True) -> TestResult:
    n = s.n
    _require(not strict or n >= 100, f"runs test needs n >= 100, got {n}")
    bits = s.bits
    pi = float(bits.sum()) / n
    tau = 2.0 / math.sqrt(n)
    if abs(pi - 0.5) >= tau:
        return TestResult.from_p_values("runs", [0.0], alpha, status="prerequisite_failed",
                                        pi=pi, tau=tau)
    v_obs = 1 + int(np.count_nonzero(bits[1:] != bits[:-1]))
    num = abs(v_obs - 2.0 * n * pi * (1.0 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi)
    p = erfc(num / den)
    return TestResult.from_p_values("runs", [p], alpha, pi=pi, V_n=v_obs)


def rank_probabilities(rows: int, cols: int) -> tuple[float, float, float]:
    """Probabilities that a uniform random ``rows x cols`` GF(2) matrix has
    full rank, rank one less than full, or lower rank."""

    def p_rank(r):
        prod = 1.0
        for i in range(r):
            prod *= (1 - 2.0 ** (i - rows)) * (1 - 2.0 ** (i - cols)) / (1 - 2.0 ** (i - r))
        return 2.0 ** (r * (rows + cols - r) - rows * cols) * prod

    full = min(rows, cols)
    p_full = p_rank(full)
    p_next = p_rank(full - 1)
    return p_full, p_next, 1.0 - p_full - p_next


def gf2_rank(matrices: np.ndarray) -> np.ndarray:
    """Rank over GF(2) of each 0/1 matrix in a ``(count, rows, cols)`` stack."""
    mats = np.asarray(matrices, dtype=np.uint8)
    count, rows, cols = mats.shape
    if cols > 64:
        raise ValueError("at most 64 columns supported")
    weights = np.uint64(1) << np.arange(cols - 1, -1, -1, dtype=np.uint64)
    packed = (mats.astype(np.uint64) * weights).sum(axis=2, dtype=np.uint64)
    used = np.zeros((count, rows), dtype=bool)
    rank = np.zeros(count, dtype=np.int64)
    idx = np.arange(count)
    for c in range(cols):
        bit = np.uint64(1) << np.uint64(cols - 1 - c)
        has_bit = (packed & bit) != 0
        cand = has_bit & ~used
        found = cand.any(axis=1)
        if not found.any():
            continue
        piv = np.argmax(cand, axis=1)
        piv_val = np.where(found, packed[idx, piv], np.uint64(0))
        used[idx[found], piv[found]] = True
        rank += found
        clear = has_bit & found[:, None]
        clear[idx[found], piv[found]] = False
        packed = np.where(clear, packed ^ piv_val[:, None], packed)
    return rank


def rank_test(s: BitSequence, rows: int = 32, cols: int = 32, alpha: float = DEFAULT_ALPHA,
              strict: bool = True) -> TestResult:
    n = s.n
    size = rows * cols
    count = n // size
    _require(count >= 1, f"rank test needs at least one {rows}x{cols} matrix, got n={n}")
    _require(not strict or count >= 38,
             f"rank test needs at least 38 matrices ({38 * size} bits), got n={n}")
    mats = s.bits[: count * size].reshape(count, rows, cols)
    ranks = gf2_rank(mats)
    full = min(rows, cols)
    f_full = int(np.count_nonzero(ranks == full))
    f_next = int(np.count_nonzero(ranks == full - 1))
    f_rest = count - f_full - f_next
    probs = rank_probabilities(rows, cols)
    chi2 = sum((f - p * count) ** 2 / (p * count)
               for f, p in zip((f_full, f_next, f_rest), probs) if p > 0)
    p = math.exp(-chi2 / 2.0)  # igamc(1, x) = exp(-x)
    return TestResult.from_p_values("rank", [p], alpha, matrices=count, full_rank=f_full,
                                    rank_minus_one=f_next, lower_rank=f_rest, chi2=chi2)


def count_nonoverlapping(bits: np.ndarray, template: np.ndarray) -> int:
    """Occurrences of ``template`` in ``bits``, skipping past each match."""
    m = template.size
    if bits.size < m:
        return 0
    target = int("".join(map(str, template.tolist())), 2)
    hits = np.flatnonzero(window_values(bits, m, wrap=False) == target)
    count, next_free = 0, 0
    for pos in hits.tolist():
        if pos >= next_free:
            count += 1
            next_free = pos + m
    return count


def _parse_template(template) -> np.ndarray:
    if isinstance(template, str):
        return BitSequence.from_bits(template).bits.copy()
    return np.asarray(template, dtype=np.uint8)


def nonoverlapping_template_test(s: BitSequence, template="010000111", blocks: int = 8,
                                 alpha: float = DEFAULT_ALPHA, strict: bool = True) -> TestResult:
    tpl = _parse_template(template)
    m = tpl.size
    n = s.n
    block_len = n // blocks
    _require(m >= 1 and blocks >= 1 and block_len >= m,
             f"template test needs blocks of at least {m} bits, got {block_len}")
    _require(not strict or n >= 100, f"template test needs n >= 100, got {n}")
    bits = s.bits
    counts = np.array([count_nonoverlapping(bits[j * block_len: (j + 1) * block_len], tpl)
                       for j in range(blocks)])
    mu = (block_len - m + 1) / 2.0 ** m
    var = block_len * (1.0 / 2.0 ** m - (2.0 * m - 1.0) / 2.0 ** (2 * m))
    chi2 = float(np.sum((counts - mu) ** 2) / var)
    p = igamc(blocks / 2.0, chi2 / 2.0)
    return TestResult.from_p_values("nonoverlapping_template", [p], alpha,
                                    template="".join(map(str, tpl.tolist())),
                                    counts=counts.tolist(), mu=mu, sigma2=var, chi2=chi2)


def pattern_counts(bits: np.ndarray, m: int) -> np.ndarray:
    """Counts of each of the ``2**m`` wrapped ``m``-bit patterns."""
    if m == 0:
        return np.array([bits.size])
    return np.bincount(window_values(bits, m, wrap=True), minlength=2 ** m)


def _psi_sq(bits: np.ndarray, m: int) -> float:
    if m <= 0:
        return 0.0
    n = bits.size
    nu = pattern_counts(bits, m).astype(np.float64)
    return float(2.0 ** m / n * np.sum(nu * nu) - n)


def serial_test(s: BitSequence, m: int = 16, alpha: float = DEFAULT_ALPHA,
                strict: bool = True) -> TestResult:
    n = s.n
    _require(1 <= m <= min(n, 30), f"serial test block length m={m} unusable for n={n}")
    _require(not strict or m < int(math.log2(n)) - 2,
             f"serial test needs m < floor(log2 n) - 2 (m={m}, n={n})")
    bits = s.bits
    psi = [_psi_sq(bits, m - d) for d in range(3)]
    d1 = psi[0] - psi[1]
    d2 = psi[0] - 2.0 * psi[1] + psi[2]
    p1 = igamc(2.0 ** (m - 2), d1 / 2.0)
    p2 = igamc(2.0 ** (m - 3), d2 / 2.0)
    return TestResult.from_p_values("serial", [p1, p2], alpha, psi_sq=psi, del1=d1, del2=d2)


def _phi(bits: np.ndarray, m: int) -> float:
    if m == 0:
        return 0.0
    c = pattern_counts(bits, m)
    c = c[c > 0] / bits.size
    return float(np.sum(c * np.log(c)))


def approximate_entropy_test(s: BitSequence, m: int = 10, alpha: float = DEFAULT_ALPHA,
                             strict: bool = True) -> TestResult:
    n = s.n
    _require(1 <= m and m + 1 <= min(n, 30), f"approximate entropy m={m} unusable for n={n}")
    _require(not strict or m < int(math.log2(n)) - 5,
             f"approximate entropy needs m < floor(log2 n) - 5 (m={m}, n={n})")
    bits = s.bits
    apen = _phi(bits, m) - _phi(bits, m + 1)
    chi2 = 2.0 * n * (math.log(2) - apen)
    p = igamc(2.0 ** (m - 1), chi2 / 2.0)
    return TestResult.from_p_values("approximate_entropy", [p], alpha, apen=apen, chi2=chi2)


def dft_magnitudes(s: BitSequence) -> np.ndarray:
    """``|DFT|`` of the +/-1 form of the sequence, first ``n // 2`` bins."""
    x = 2.0 * s.bits - 1.0
    return np.abs(np.fft.fft(x)[: s.n // 2])


def fft_test(s: BitSequence, alpha: float = DEFAULT_ALPHA, strict: bool = True) -> TestResult:
    n = s.n
    _require(n >= 2, f"spectral test needs n >= 2, got {n}")
    _require(not strict or n >= 1000, f"spectral test needs n >= 1000, got {n}")
    mags = dft_magnitudes(s)
    threshold = math.sqrt(math.log(1.0 / 0.05) * n)
    n0 = 0.95 * n / 2.0
    n1 = int(np.count_nonzero(mags < threshold))
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4.0)
    p = erfc(abs(d) / math.sqrt(2.0))
    return TestResult.from_p_values("fft", [p], alpha, N0=n0, N1=n1, d=d)
