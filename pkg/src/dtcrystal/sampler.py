"""Metropolis sampling of plane partitions with weight Q^|pi|.

Moves add or remove a single box. A move is proposed uniformly among the
n(pi) currently legal ones and accepted with probability
``min(1, Q^(dV) * n(pi) / n(pi'))``; the ratio of proposal counts makes
the chain reversible for ``Q^|pi|``.

Random numbers come from numpy's PCG64 seeded via ``SeedSequence(seed)``,
drawn in fixed-size blocks, so a seed reproduces the same chain on every
platform numpy supports.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .crystal.plane import PlanePartition
from .errors import ExtentCapError

__all__ = [
    "ChainConfig",
    "ChainResult",
    "run_chain",
    "run_chains",
    "integrated_autocorr_time",
    "exact_mean_volume",
    "export_rescaled_shape",
]

BLOCK = 1 << 16


@dataclass(frozen=True)
class ChainConfig:
    fugacity: float
    steps: int
    seed: int
    burnin: int = 10_000
    max_extent: int = 256
    # restrict to |pi| <= max_size (moves beyond are rejected); None for no limit
    max_size: int | None = None

    def __post_init__(self):
        if not 0 < self.fugacity < 1:
            raise ValueError("fugacity must lie in (0, 1)")
        if self.steps <= 0:
            raise ValueError("steps must be positive")
        if self.burnin < 0:
            raise ValueError("burnin must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class ChainResult:
    config: ChainConfig
    mean: float
    variance: float
    stderr: float
    tau_int: float
    acceptance: float
    final: PlanePartition
    volumes: np.ndarray = field(repr=False)
    state_ids: np.ndarray | None = field(default=None, repr=False)
    states: list | None = field(default=None, repr=False)

    def summary(self) -> dict:
        c = self.config
        return {
            "fugacity": c.fugacity,
            "steps": c.steps,
            "burnin": c.burnin,
            "seed": c.seed,
            "mean_volume": self.mean,
            "variance": self.variance,
            "stderr": self.stderr,
            "tau_int": self.tau_int,
            "acceptance": self.acceptance,
            "final_volume": self.final.size,
        }


class _MoveSet:
    """Set of grid cells with O(1) insert, delete and indexed access."""

    __slots__ = ("items", "pos")

    def __init__(self):
        self.items = []
        self.pos = {}

    def add(self, c):
        if c not in self.pos:
            self.pos[c] = len(self.items)
            self.items.append(c)

    def discard(self, c):
        i = self.pos.pop(c, None)
        if i is None:
            return
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i


class _Heightfield:
    def __init__(self, extent: int):
        self.E = extent
        # one spare row/column of zeros so h[i+1][j] is always readable
        self.h = [[0] * (extent + 2) for _ in range(extent + 2)]
        self.addable = _MoveSet()
        self.removable = _MoveSet()
        self.volume = 0
        self.addable.add((0, 0))

    def _refresh(self, i, j):
        if i < 0 or j < 0 or i > self.E or j > self.E:
            return
        h = self.h
        x = h[i][j]
        if (i == 0 or h[i - 1][j] > x) and (j == 0 or h[i][j - 1] > x):
            self.addable.add((i, j))
        else:
            self.addable.discard((i, j))
        if x > 0 and h[i + 1][j] < x and h[i][j + 1] < x:
            self.removable.add((i, j))
        else:
            self.removable.discard((i, j))

    def apply(self, i, j, delta):
        self.h[i][j] += delta
        self.volume += delta
        r = self._refresh
        r(i, j)
        r(i + 1, j)
        r(i, j + 1)
        r(i - 1, j)
        r(i, j - 1)

    def n_moves(self):
        return len(self.addable.items) + len(self.removable.items)

    def key(self):
        rows = []
        for row in self.h:
            if row[0] == 0:
                break
            k = len(row)
            while k and row[k - 1] == 0:
                k -= 1
            rows.append(tuple(row[:k]))
        return tuple(rows)

    def to_partition(self) -> PlanePartition:
        return PlanePartition(self.key())


def integrated_autocorr_time(x: np.ndarray, c: float = 5.0) -> float:
    """``1 + 2 sum_t rho(t)`` with Sokal's automatic window W >= c * tau(W)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 2:
        return 1.0
    y = x - x.mean()
    var = float(np.dot(y, y)) / n
    if var == 0:
        return 1.0
    m = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(y, m)
    acf = np.fft.irfft(f * np.conj(f), m)[:n] / (n * var)
    tau = 1.0
    for w in range(1, n):
        tau += 2 * acf[w]
        if w >= c * tau:
            break
    return max(float(tau), 1.0)


def run_chain(config: ChainConfig, track_states: bool = False) -> ChainResult:
    """Run one chain and return volume statistics over the post-burn-in steps."""
    Q = config.fugacity
    field_ = _Heightfield(config.max_extent)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed)))
    total = config.burnin + config.steps
    volumes = np.empty(config.steps, dtype=np.int64)
    state_ids = np.empty(config.steps, dtype=np.int64) if track_states else None
    index = {}
    states = []
    cap = config.max_size
    E = config.max_extent
    accepted = 0
    buf = rng.random(2 * BLOCK)
    b = 0
    for step in range(total):
        if b == 2 * BLOCK:
            buf = rng.random(2 * BLOCK)
            b = 0
        u1 = buf[b]
        u2 = buf[b + 1]
        b += 2
        add_items = field_.addable.items
        rem_items = field_.removable.items
        n_add = len(add_items)
        n = n_add + len(rem_items)
        r = int(u1 * n)
        if r < n_add:
            i, j = add_items[r]
            delta = 1
        else:
            i, j = rem_items[r - n_add]
            delta = -1
        # proposals leaving the restricted state space are rejected outright
        if not (delta == 1 and cap is not None and field_.volume >= cap):
            field_.apply(i, j, delta)
            ratio = (Q if delta == 1 else 1.0 / Q) * n / field_.n_moves()
            if ratio >= 1.0 or u2 < ratio:
                accepted += 1
                if delta == 1 and (i >= E or j >= E or field_.h[i][j] > E):
                    raise ExtentCapError(f"extent cap reached at cell ({i},{j}) height {field_.h[i][j]}")
            else:
                field_.apply(i, j, -delta)
        if step >= config.burnin:
            k = step - config.burnin
            volumes[k] = field_.volume
            if track_states:
                key = field_.key()
                sid = index.get(key)
                if sid is None:
                    sid = index[key] = len(states)
                    states.append(key)
                state_ids[k] = sid
    mean = float(volumes.mean())
    var = float(volumes.var())
    tau = float(integrated_autocorr_time(volumes))
    stderr = math.sqrt(var * tau / config.steps)
    return ChainResult(
        config=config,
        mean=mean,
        variance=var,
        stderr=stderr,
        tau_int=tau,
        acceptance=accepted / total,
        final=field_.to_partition(),
        volumes=volumes,
        state_ids=state_ids,
        states=[PlanePartition(s) for s in states] if track_states else None,
    )


def run_chains(configs, workers: int = 1) -> list[ChainResult]:
    """Run independent chains, results ordered by seed regardless of worker count."""
    configs = sorted(configs, key=lambda c: c.seed)
    if workers <= 1:
        return [run_chain(c) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_chain, configs))


def exact_mean_volume(Q: float, tail: float = 1e-12) -> float:
    """``E_3(Q) = sum_n n^2 Q^n / (1 - Q^n)``, the exact mean of |pi| under Q^|pi|.

    Summed until a rigorous bound on the remaining tail is below ``tail``.
    """
    u = -math.log(Q)
    terms = []
    n = 0
    while True:
        n += 1
        terms.append(n * n / math.expm1(n * u))
        # tail <= 1/(1-Q) * sum_{m>n} m^2 Q^m, and m^2 Q^m decays geometrically
        # with ratio rho once rho = ((n+2)/(n+1))^2 Q < 1
        rho = ((n + 2) / (n + 1)) ** 2 * Q
        if rho < 1:
            bound = (n + 1) ** 2 * Q ** (n + 1) / ((1 - rho) * (1 - Q))
            if bound < tail:
                return math.fsum(terms)


def export_rescaled_shape(pi: PlanePartition, Q: float) -> list[tuple[float, float, float]]:
    """Cells with positive height as (i r, j r, h r) with r = -ln Q."""
    r = -math.log(Q)
    return [
        (i * r, j * r, h * r)
        for i, row in enumerate(pi.heights)
        for j, h in enumerate(row)
        if h
    ]
