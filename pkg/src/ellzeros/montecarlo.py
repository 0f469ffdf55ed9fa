"""Monte Carlo zero counting for Gaussian elliptic polynomials.

Sampling draws the n+1 standard normal coefficients from a counter-based
Philox generator keyed by (master seed, sample index), so every sample is
reproducible independently of execution order.  Zeros are counted on the
compactified axis: with x = tan(theta) the rescaled process

    Q_n(theta) = sum_j omega_j sqrt(C(n, j)) sin(theta)^j cos(theta)^(n-j)

has unit variance for every theta, its zeros are in bijection with the
zeros of the polynomial, and their mean spacing pi/sqrt(n) is uniform in
theta.  Counting is by sign changes on a uniform theta grid oversampled
relative to that spacing, verified by a second pass at doubled density;
each bracket is then refined by bisection, which can only flag anomalies
(exact zero hits), never change the bracket count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .intervals import ExtendedInterval, _check_degree

HALF_PI = math.pi / 2.0

# stand-in for log|sin(theta)| at exact grid zeros of sin; exp() of any
# j-multiple underflows to 0, which is the correct weight there
_LOG_ZERO = -800.0


@dataclass(frozen=True)
class EllipticSample:
    """Degree n plus the n+1 Gaussian coefficient draws."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.shape != (self.n + 1,) or not np.all(np.isfinite(coeffs)):
            raise ValueError("coeffs must be n+1 finite values")
        object.__setattr__(self, "coeffs", coeffs)


@dataclass(frozen=True)
class RefinementFlags:
    """Diagnostics from the counting passes."""

    doubling_changed: bool = False
    bracket_failures: int = 0

    def code(self) -> str:
        out = ""
        if self.doubling_changed:
            out += "D"
        if self.bracket_failures:
            out += f"B{self.bracket_failures}"
        return out or "ok"


@dataclass(frozen=True)
class ZeroCountRecord:
    sample_index: int
    count: int
    refinement_flags: RefinementFlags


@dataclass(frozen=True)
class SummaryStats:
    """k-statistics and central moments of a batch of zero counts.

    k2..k4 are the standard unbiased cumulant estimators; mu2..mu4 are
    plug-in central moments (biased at O(1/m)).  Standard errors come from
    the usual large-m formulas with plug-in moments.
    """

    m: int
    mean: float
    k2: float
    k3: float
    k4: float
    mu2: float
    mu3: float
    mu4: float
    se_mean: float
    se_k2: float
    se_k3: float


@dataclass(frozen=True)
class CountOptions:
    oversample: int = 20
    max_bisect: int = 60

    def __post_init__(self):
        if self.oversample < 1 or self.max_bisect < 0:
            raise ValueError("invalid counting options")


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def _generator(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence((int(seed), int(stream)))))


def sample_coefficients(n: int, seed: int, stream: int = 0) -> EllipticSample:
    """Draw the n+1 iid standard normal coefficients of one polynomial.

    A fixed (seed, stream) pair always yields the same sample, regardless
    of how many other streams were drawn or in which order.
    """
    n = _check_degree(n) if n != 0 else 0
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream must be nonnegative integers")
    rng = _generator(seed, stream)
    return EllipticSample(n, rng.standard_normal(n + 1))


# ---------------------------------------------------------------------------
# evaluation of the rescaled process
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _log_sqrt_binom(n: int) -> np.ndarray:
    lg = math.lgamma
    return np.array([0.5 * (lg(n + 1) - lg(j + 1) - lg(n - j + 1))
                     for j in range(n + 1)])


def _design_matrix(n: int, thetas: np.ndarray) -> np.ndarray:
    """Signed weight matrix W with W[i, j] = sqrt(C(n,j)) sin^j cos^(n-j).

    Computed in log space; the row maximum is at least 1/sqrt(n+1), so
    underflow only removes terms that are negligible anyway.
    """
    j = np.arange(n + 1)
    st = np.sin(thetas)
    ct = np.cos(thetas)
    with np.errstate(divide="ignore"):
        log_st = np.where(st == 0.0, _LOG_ZERO, np.log(np.abs(st)))
        log_ct = np.log(ct)
    with np.errstate(under="ignore"):
        w = np.exp(_log_sqrt_binom(n)[None, :]
                   + j[None, :] * log_st[:, None]
                   + (n - j)[None, :] * log_ct[:, None])
    odd = (j % 2 == 1)[None, :]
    neg = (st < 0.0)[:, None]
    return np.where(neg & odd, -w, w)


def _eval_with_matrix(matrix: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    # multiply + pairwise sum instead of BLAS dot: bit-reproducible at any
    # BLAS thread count
    return (matrix * coeffs[None, :]).sum(axis=1)


def eval_normalized(sample: EllipticSample, theta):
    """Evaluate the unit-variance rescaled process at theta in (-pi/2, pi/2)."""
    arr = np.atleast_1d(np.asarray(theta, dtype=float))
    if np.any(np.abs(arr) >= HALF_PI):
        raise ValueError("theta must lie in the open interval (-pi/2, pi/2)")
    vals = _eval_with_matrix(_design_matrix(sample.n, arr), sample.coeffs)
    return float(vals[0]) if np.ndim(theta) == 0 else vals


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

def _theta_range(interval: ExtendedInterval) -> Tuple[float, float]:
    # open endpoints: the polynomial has no zero at x = +-inf almost
    # surely, so clipping a 1e-9 fraction off each end is harmless
    lo = math.atan(interval.a)
    hi = math.atan(interval.b)
    delta = 1e-9 * (hi - lo)
    return lo + delta, hi - delta


def _grid(n: int, lo: float, hi: float, oversample: int,
          refine: int = 1) -> np.ndarray:
    spacing = (math.pi / math.sqrt(n)) / (oversample * refine)
    m = max(int(math.ceil((hi - lo) / spacing)) + 1, 2)
    return np.linspace(lo, hi, m)


def _signed_count(values: np.ndarray) -> Tuple[int, int, np.ndarray]:
    """Sign changes, exact-zero hits, and the bracket start indices."""
    signs = np.sign(values)
    zeros = int(np.sum(signs == 0.0))
    if zeros:
        # an exact grid hit is itself a zero; nudge its sign so the
        # neighbouring brackets stay countable and flag it below
        signs = np.where(signs == 0.0, 1.0, signs)
    flips = signs[:-1] * signs[1:] < 0
    return int(np.sum(flips)), zeros, np.nonzero(flips)[0]


def _scaled_coeffs(n: int) -> np.ndarray:
    # multipliers sqrt(C(n, j)); representable in doubles up to n ~ 2000
    with np.errstate(over="ignore"):
        mult = np.exp(_log_sqrt_binom(n))
    return mult


def _signed_poly_values(coeff_rows: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Values with the exact sign of Q at theta, one coefficient row each.

    Row b holds omega_j * sqrt(C(n, j)); the returned value is
    Q(theta) / cos(theta)^n for |tan| <= 1 and Q(theta) / |sin(theta)|^n
    otherwise, both positive rescalings of Q, evaluated by Horner.
    Only usable for sign decisions (bisection), not for Q itself.
    """
    npow = coeff_rows.shape[1]          # n + 1
    t = np.tan(theta)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        direct = np.abs(t) <= 1.0
        p = coeff_rows[:, npow - 1].copy()
        for j in range(npow - 2, -1, -1):
            p = p * t + coeff_rows[:, j]
        u = np.where(direct, 0.0, 1.0 / t)
        r = coeff_rows[:, 0].copy()
        for j in range(1, npow):
            r = r * u + coeff_rows[:, j]
        # Q = sin^n * R(cot); restore sign(sin)^n when n is odd
        if npow % 2 == 0:
            r = np.where(t < 0.0, -r, r)
    return np.where(direct, p, r)


def _bisect_bracket_batch(coeff_rows: np.ndarray, lo: np.ndarray,
                          hi: np.ndarray, sign_lo: np.ndarray,
                          depth: int) -> np.ndarray:
    """Refine sign-change brackets [lo, hi] in parallel.

    The count is already determined by the brackets; bisection confirms
    each bracket narrows onto a single crossing.  A midpoint value of
    exactly zero counts as converged (the root is located to machine
    precision).  Returns the mask of brackets that failed to shrink to
    float resolution within `depth` steps.
    """
    nb = lo.shape[0]
    if depth <= 0 or nb == 0:
        return np.zeros(nb, dtype=bool)
    lo = lo.copy()
    hi = hi.copy()
    active = np.ones(nb, dtype=bool)
    for _ in range(depth):
        if not np.any(active):
            break
        mid = 0.5 * (lo + hi)
        active &= (mid > lo) & (mid < hi)   # converged at float resolution
        if not np.any(active):
            break
        smid = np.sign(_signed_poly_values(coeff_rows, mid))
        hit = active & (smid == 0.0)        # converged on an exact zero
        active &= ~hit
        go_right = active & (smid == sign_lo)
        go_left = active & ~go_right
        lo[go_right] = mid[go_right]
        hi[go_left] = mid[go_left]
    return active


def count_zeros(sample: EllipticSample, interval: ExtendedInterval,
                opts: CountOptions = CountOptions(),
                _index: int = 0) -> ZeroCountRecord:
    """Count real zeros of the sample's polynomial inside the interval.

    Sign changes on a theta grid of spacing (pi/sqrt(n))/oversample are
    verified against a doubled-density pass; on disagreement the denser
    count wins and the record is flagged.
    """
    n = sample.n if sample.n >= 1 else 1
    lo, hi = _theta_range(interval)
    g1 = _grid(n, lo, hi, opts.oversample, 1)
    g2 = _grid(n, lo, hi, opts.oversample, 2)
    m1 = _design_matrix(sample.n, g1)
    m2 = _design_matrix(sample.n, g2)
    v1 = _eval_with_matrix(m1, sample.coeffs)
    v2 = _eval_with_matrix(m2, sample.coeffs)
    c1, z1, _ = _signed_count(v1)
    c2, z2, brackets2 = _signed_count(v2)
    changed = c1 != c2
    count = c2 if changed else c1

    rows = np.broadcast_to(sample.coeffs * _scaled_coeffs(sample.n),
                           (brackets2.size, sample.n + 1))
    fail = _bisect_bracket_batch(rows, g2[brackets2], g2[brackets2 + 1],
                                 np.sign(v2[brackets2]), opts.max_bisect)
    failures = z1 + z2 + int(np.sum(fail))
    return ZeroCountRecord(_index, count, RefinementFlags(changed, failures))


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

# cap on elements of one batched-bisection coefficient block (memory bound)
_BISECT_CHUNK_ELEMENTS = 5_000_000


def run_experiment(n: int, interval: ExtendedInterval, m: int, seed: int,
                   opts: CountOptions = CountOptions()
                   ) -> Tuple[List[ZeroCountRecord], SummaryStats]:
    """m independent zero counts with per-sample substreams, summarized.

    Outputs are a pure function of (n, interval, m, seed, opts); the
    per-sample streams make the aggregation order-independent.  Bracket
    bisection is batched across samples, which changes nothing about the
    per-bracket refinement sequence.
    """
    n = _check_degree(n)
    if m < 2:
        raise ValueError("need at least m = 2 samples for k-statistics")
    lo, hi = _theta_range(interval)
    g1 = _grid(n, lo, hi, opts.oversample, 1)
    g2 = _grid(n, lo, hi, opts.oversample, 2)
    m1 = _design_matrix(n, g1)
    m2 = _design_matrix(n, g2)
    mult = _scaled_coeffs(n)

    counts = np.empty(m, dtype=int)
    changed = np.empty(m, dtype=bool)
    grid_hits = np.zeros(m, dtype=int)
    bracket_lo, bracket_hi, bracket_sign, bracket_rows, bracket_sample = \
        [], [], [], [], []
    for i in range(m):
        sample = sample_coefficients(n, seed, i)
        v1 = _eval_with_matrix(m1, sample.coeffs)
        v2 = _eval_with_matrix(m2, sample.coeffs)
        c1, z1, _ = _signed_count(v1)
        c2, z2, brackets2 = _signed_count(v2)
        changed[i] = c1 != c2
        counts[i] = c2 if changed[i] else c1
        grid_hits[i] = z1 + z2
        if brackets2.size and opts.max_bisect > 0:
            bracket_lo.append(g2[brackets2])
            bracket_hi.append(g2[brackets2 + 1])
            bracket_sign.append(np.sign(v2[brackets2]))
            bracket_rows.append(np.tile(sample.coeffs * mult,
                                        (brackets2.size, 1)))
            bracket_sample.append(np.full(brackets2.size, i, dtype=int))

    bisect_failures = np.zeros(m, dtype=int)
    if bracket_lo:
        all_lo = np.concatenate(bracket_lo)
        all_hi = np.concatenate(bracket_hi)
        all_sign = np.concatenate(bracket_sign)
        all_rows = np.concatenate(bracket_rows, axis=0)
        all_sample = np.concatenate(bracket_sample)
        chunk = max(1, _BISECT_CHUNK_ELEMENTS // (n + 1))
        for start in range(0, all_lo.size, chunk):
            sl = slice(start, start + chunk)
            fail = _bisect_bracket_batch(all_rows[sl], all_lo[sl],
                                         all_hi[sl], all_sign[sl],
                                         opts.max_bisect)
            np.add.at(bisect_failures, all_sample[sl][fail], 1)

    records = [ZeroCountRecord(i, int(counts[i]),
                               RefinementFlags(bool(changed[i]),
                                               int(grid_hits[i]
                                                   + bisect_failures[i])))
               for i in range(m)]
    return records, k_statistics(counts.astype(float))


def k_statistics(counts) -> SummaryStats:
    """Unbiased cumulant estimates (k-statistics) of a count batch."""
    x = np.asarray(counts, dtype=float)
    m = x.size
    if m < 2:
        raise ValueError("k-statistics require at least 2 observations")
    mean = float(x.mean())
    d = x - mean
    mu2 = float((d ** 2).mean())
    mu3 = float((d ** 3).mean())
    mu4 = float((d ** 4).mean())
    mu6 = float((d ** 6).mean())

    k2 = m * mu2 / (m - 1)
    k3 = m * m * mu3 / ((m - 1) * (m - 2)) if m >= 3 else math.nan
    if m >= 4:
        k4 = (m * m * ((m + 1) * mu4 - 3 * (m - 1) * mu2 * mu2)
              / ((m - 1) * (m - 2) * (m - 3)))
    else:
        k4 = math.nan

    se_mean = math.sqrt(k2 / m)
    var_k2 = (mu4 - (m - 3) / (m - 1) * mu2 * mu2) / m
    se_k2 = math.sqrt(max(var_k2, 0.0))
    var_k3 = (mu6 - mu3 * mu3 - 6.0 * mu2 * mu4 + 9.0 * mu2 ** 3) / m
    se_k3 = math.sqrt(max(var_k3, 0.0))
    return SummaryStats(m, mean, k2, k3, k4, mu2, mu3, mu4,
                        se_mean, se_k2, se_k3)


# ---------------------------------------------------------------------------
# distributional diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CltDiagnostic:
    ks_distance: float
    standardized_moments: Tuple[float, float, float, float]
    m: int


def _normal_cdf(z: np.ndarray) -> np.ndarray:
    return np.array([0.5 * (1.0 + math.erf(t / math.sqrt(2.0))) for t in z])


def clt_diagnostic(counts, exact_mean: float, exact_var: float) -> CltDiagnostic:
    """Kolmogorov-Smirnov distance of the standardized counts to N(0, 1).

    Counts are standardized by the supplied exact mean and variance; the
    first four raw moments of the standardized values are reported with
    the distance.
    """
    x = np.asarray(counts, dtype=float)
    m = x.size
    if m < 1:
        raise ValueError("empty count batch")
    if not exact_var > 0:
        raise ValueError("exact_var must be positive")
    if np.all(x == x[0]):
        raise ValueError("degenerate input: all counts equal")
    z = np.sort((x - exact_mean) / math.sqrt(exact_var))
    cdf = _normal_cdf(z)
    i = np.arange(1, m + 1)
    d_plus = np.max(i / m - cdf)
    d_minus = np.max(cdf - (i - 1) / m)
    moments = tuple(float(np.mean(z ** p)) for p in (1, 2, 3, 4))
    return CltDiagnostic(float(max(d_plus, d_minus)), moments, m)


@dataclass(frozen=True)
class SllnRow:
    n: int
    mean_count: float
    expected: float
    ratio: float
    se_ratio: float


def slln_trace(n_list: Sequence[int], interval: ExtendedInterval, m,
               seed: int, opts: CountOptions = CountOptions()) -> List[SllnRow]:
    """Mean count over expected count along n_list; the ratio approaches 1.

    `m` is the sample count per degree: one integer applied to every n, or
    a sequence matching n_list (useful to shrink the standard error as n
    grows).  Each degree gets its own derived master seed.
    """
    from .variance import expected_zeros   # local import: no cycle at load

    if isinstance(m, int):
        m_list = [m] * len(n_list)
    else:
        m_list = list(m)
        if len(m_list) != len(n_list):
            raise ValueError("m must be an int or match n_list in length")
    rows = []
    for pos, (n, m_n) in enumerate(zip(n_list, m_list)):
        derived = int(seed) + 7919 * pos
        _, stats = run_experiment(n, interval, m_n, derived, opts)
        expected = expected_zeros(n, interval)
        rows.append(SllnRow(n, stats.mean, expected, stats.mean / expected,
                            stats.se_mean / expected))
    return rows


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def records_to_csv(records: Sequence[ZeroCountRecord]) -> str:
    lines = ["sample_index,count,flags"]
    for rec in records:
        lines.append(f"{rec.sample_index},{rec.count},{rec.refinement_flags.code()}")
    return "\n".join(lines) + "\n"


def summary_to_json(stats: SummaryStats, provenance: Optional[dict] = None) -> str:
    def clean(v):
        if isinstance(v, float) and math.isnan(v):
            return None
        return v

    doc = {}
    if provenance is not None:
        doc["provenance"] = provenance
    doc["summary"] = {
        "m": stats.m,
        "mean": stats.mean,
        "k2": clean(stats.k2),
        "k3": clean(stats.k3),
        "k4": clean(stats.k4),
        "mu2": stats.mu2,
        "mu3": stats.mu3,
        "mu4": stats.mu4,
        "se_mean": stats.se_mean,
        "se_k2": stats.se_k2,
        "se_k3": stats.se_k3,
    }
    return json.dumps(doc, indent=2)
