"""Block-bootstrap resampling over panels and the bootstrap distribution,
quantile, and p-value machinery.

Resampling is joint across the cross-section: one sequence of time indices
is drawn per replicate and applied to every series simultaneously, so
cross-sectional dependence survives resampling. The panel is row-demeaned
before blocks are drawn, and the statistic re-demeans each resample.

Reproducibility contract: replicate j draws from a PCG64 generator derived
as SeedSequence([seed, j]), so the draws vector is bit-identical for any
execution order, chunking, or worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _random
from .errors import DegenerateSeriesError, IndexOutOfRangeError, InvalidBlockLengthError
from .panel import Panel

__all__ = [
    "BootstrapScheme",
    "BootstrapDistribution",
    "RngSpec",
    "resample_indices",
    "resample_panel",
    "bootstrap_distribution",
    "p_value",
    "empirical_quantile",
    "quantile_rank",
]

_KINDS = ("nonoverlapping", "circular", "stationary")

# Replicates are evaluated in fixed-size chunks so the vectorized statistic
# sees identical array shapes regardless of worker count.
_CHUNK = 64


@dataclass(frozen=True)
class BootstrapScheme:
    """A resampling scheme: kind plus block length.

    kind : {"nonoverlapping", "circular", "stationary"}
        Non-overlapping blocks (the tail beyond the last full block is
        discarded), circular blocks (wrap around modulo T), or stationary
        resampling with geometric block lengths of mean ``block_length``.
    block_length : int
        Block length L >= 1 (for "stationary", the expected block length;
        the geometric success probability is 1/L).
    """

    kind: str
    block_length: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"scheme kind must be one of {_KINDS}, got {self.kind!r}")
        if int(self.block_length) < 1:
            raise InvalidBlockLengthError(self.block_length)
        object.__setattr__(self, "block_length", int(self.block_length))


@dataclass(frozen=True)
class RngSpec:
    """Master seed plus the stream-derivation rule for bootstrap replicates.

    The only supported rule is "pcg64-seedseq": replicate j uses
    ``Generator(PCG64(SeedSequence([seed, j])))``.
    """

    seed: int
    stream: str = "pcg64-seedseq"

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.stream != "pcg64-seedseq":
            raise ValueError(f"unknown stream derivation rule {self.stream!r}")
        object.__setattr__(self, "seed", int(self.seed))

    def generator_for(self, replicate: int) -> np.random.Generator:
        return _random.generator(self.seed, replicate)


@dataclass(frozen=True)
class BootstrapDistribution:
    """Vector of B bootstrap statistic replicates."""

    draws: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.draws, dtype=np.float64, copy=True)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("draws must be a non-empty vector")
        if not np.all(np.isfinite(arr)):
            raise ValueError("bootstrap draws must all be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "draws", arr)

    @property
    def b(self) -> int:
        return int(self.draws.size)


def _check_block(scheme: BootstrapScheme, t: int) -> int:
    length = scheme.block_length
    if not 1 <= length <= t:
        raise InvalidBlockLengthError(length, t)
    return length


def resample_length(scheme: BootstrapScheme, t: int) -> int:
    """Length T' of one resample: m*L for non-overlapping blocks, else T."""
    length = _check_block(scheme, t)
    if scheme.kind == "nonoverlapping":
        return (t // length) * length
    return t


def resample_indices(scheme: BootstrapScheme, t: int,
                     rng: np.random.Generator) -> np.ndarray:
    """Draw one replicate's time indices (0-based, length `resample_length`).

    nonoverlapping
        The m = floor(T/L) blocks starting at 0, L, 2L, ... are drawn m
        times uniformly with replacement and concatenated.
    circular
        ceil(T/L) block starts are drawn uniformly from 0..T-1; blocks wrap
        modulo T; the concatenation is truncated to T.
    stationary
        Blocks have independent geometric lengths with success probability
        1/L and uniform starts, wrap modulo T, truncated to T.
    """
    length = _check_block(scheme, t)
    if scheme.kind == "nonoverlapping":
        m = t // length
        picks = rng.integers(0, m, size=m)
        return (picks[:, None] * length + np.arange(length)).ravel()
    if scheme.kind == "circular":
        n_blocks = -(-t // length)
        starts = rng.integers(0, t, size=n_blocks)
        idx = (starts[:, None] + np.arange(length)) % t
        return idx.ravel()[:t]
    return _stationary_indices(t, length, rng)


def _stationary_indices(t: int, length: int, rng: np.random.Generator) -> np.ndarray:
    p = 1.0 / length
    starts: list[np.ndarray] = []
    lengths: list[np.ndarray] = []
    total = 0
    batch = max(8, -(-t // length))
    while total < t:
        s = rng.integers(0, t, size=batch)
        if length == 1:
            ln = np.ones(batch, dtype=np.int64)
        else:
            u = _random.uniform_open(rng, batch)
            ln = np.ceil(np.log1p(-u) / math.log1p(-p)).astype(np.int64)
        starts.append(s)
        lengths.append(ln)
        total += int(ln.sum())
    s = np.concatenate(starts)
    ln = np.concatenate(lengths)
    keep = int(np.searchsorted(np.cumsum(ln), t, side="left")) + 1
    s, ln = s[:keep], ln[:keep]
    offsets = np.arange(int(ln.sum())) - np.repeat(np.cumsum(ln) - ln, ln)
    return ((np.repeat(s, ln) + offsets) % t)[:t]


def resample_panel(panel: Panel, indices) -> Panel:
    """Apply one set of time indices to all series jointly."""
    idx = np.asarray(indices, dtype=np.int64)
    if idx.ndim != 1:
        raise ValueError("indices must be a 1-D integer vector")
    if idx.size and (idx.min() < 0 or idx.max() >= panel.n_time):
        raise IndexOutOfRangeError(
            f"indices must lie in [0, {panel.n_time}), got range "
            f"[{idx.min()}, {idx.max()}]"
        )
    return Panel(panel.values[:, idx])


def _statistic_scalar(statistic, values: np.ndarray) -> float:
    result = statistic(Panel(values))
    return float(getattr(result, "value", result))


def bootstrap_distribution(panel: Panel, statistic, scheme: BootstrapScheme,
                           b: int, rng: RngSpec, workers: int = 1
                           ) -> BootstrapDistribution:
    """Bootstrap distribution of a statistic under joint block resampling.

    The panel is row-demeaned once; replicate j then resamples it with
    indices from ``rng.generator_for(j)`` and re-evaluates the statistic
    (which re-demeans internally). Results are identical for any ``workers``.

    Parameters
    ----------
    panel : Panel
    statistic : callable
        Maps a Panel to a StatisticValue or float. Objects exposing a
        ``batch(values)`` method (stacked resamples of shape (R, N, T'))
        are evaluated on whole chunks at once.
    scheme : BootstrapScheme
    b : int
        Number of replicates, >= 1.
    rng : RngSpec
    workers : int
        Thread count; chunking is fixed so results do not depend on it.
    """
    if b < 1:
        raise ValueError(f"replicate count must be >= 1, got {b}")
    t = panel.n_time
    t_prime = resample_length(scheme, t)
    demeaned = panel.values - panel.values.mean(axis=1, keepdims=True)
    draws = np.empty(b, dtype=np.float64)
    batched = hasattr(statistic, "batch")

    def run_chunk(lo: int) -> None:
        hi = min(b, lo + _CHUNK)
        idx = np.empty((hi - lo, t_prime), dtype=np.int64)
        for j in range(lo, hi):
            idx[j - lo] = resample_indices(scheme, t, rng.generator_for(j))
        # contiguous copy so reductions run in the same order as on a single
        # (N, T') panel, keeping draws bit-identical to per-replicate evaluation
        stacked = np.ascontiguousarray(demeaned[:, idx].transpose(1, 0, 2))
        if batched:
            try:
                draws[lo:hi] = statistic.batch(stacked)
                return
            except DegenerateSeriesError:
                pass  # fall through to locate the failing replicate
        for j in range(lo, hi):
            try:
                draws[j] = _statistic_scalar(statistic, stacked[j - lo])
            except DegenerateSeriesError as exc:
                raise DegenerateSeriesError(
                    exc.series, f"bootstrap replicate {j}: {exc}"
                ) from exc

    chunk_starts = range(0, b, _CHUNK)
    if workers <= 1 or b <= _CHUNK:
        for lo in chunk_starts:
            run_chunk(lo)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # materialize to surface worker exceptions
            list(pool.map(run_chunk, chunk_starts))
    return BootstrapDistribution(draws)


def quantile_rank(q: float, b: int) -> int:
    """Order-statistic rank ceil(q*b), guarded against rounding at integers."""
    return int(math.ceil(round(q * b, 9)))


def empirical_quantile(dist: BootstrapDistribution, q: float) -> float:
    """The ceil(q*B)-th smallest draw."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile level must be in (0, 1), got {q}")
    k = quantile_rank(q, dist.b)
    return float(np.sort(dist.draws)[k - 1])


def p_value(dist: BootstrapDistribution, observed: float) -> float:
    """Finite-sample bootstrap p-value (1 + #{draws >= observed}) / (B + 1)."""
    count = int(np.count_nonzero(dist.draws >= observed))
    return (1 + count) / (dist.b + 1)
