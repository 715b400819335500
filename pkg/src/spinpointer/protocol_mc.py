"""Monte Carlo run of the protocol: draw Bob's outcomes and average cos^2(chi/2).

Outcomes are drawn by rejection from a uniform proposal on [-1, 1] under a
flat envelope at the density's grid maximum times a small slack. A proposal
whose density pokes above the envelope raises EnvelopeBreach instead of
being clipped.

Draw order is fixed: proposals come in blocks of ``BLOCK`` (x then u for each
block) from one ``numpy.random.Generator`` seeded with ``seed``. Chunked runs
(``chunks > 1``) split the shots into contiguous chunks and seed chunk i with
``seed ^ i``, so they are reproducible but differ from the single-stream run.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .core import FidelityResult, ProblemSpec, SignalState
from .errors import EnvelopeBreach
from .optimal_state import optimal_fidelity
from .povm_check import OutcomeDensity

BLOCK = 8192


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    shots: int = 100_000
    envelope_grid: int = 4096
    envelope_slack: float = 1.000001

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.envelope_grid < 64:
            raise ValueError("envelope_grid must be >= 64")
        if not self.envelope_slack > 1:
            raise ValueError("envelope_slack must exceed 1")


@dataclass(frozen=True)
class SimulationReport:
    spec: ProblemSpec
    config: SamplerConfig
    mean_fidelity_estimate: float
    standard_error: float
    exact_fidelity: float
    accepted_fraction: float


class OutcomeSampler:
    """Rejection sampler for x = cos(chi) under a fixed signal state."""

    def __init__(self, density: OutcomeDensity, grid: int = 4096, slack: float = 1.000001):
        self.density = density
        xs = np.linspace(-1.0, 1.0, grid)
        vals = density(xs)
        i = int(np.argmax(vals))
        peak = float(vals[i])
        if 0 < i < grid - 1:
            # polish an interior maximum between its grid neighbours
            res = minimize_scalar(
                lambda t: -density(t), bounds=(xs[i - 1], xs[i + 1]), method="bounded",
                options={"xatol": 1e-14},
            )
            peak = max(peak, -float(res.fun))
        self.peak = peak
        self.envelope = peak * slack

    @classmethod
    def for_state(cls, state: SignalState, grid: int = 4096, slack: float = 1.000001):
        return cls(OutcomeDensity.from_state(state), grid, slack)

    def sample(self, rng: np.random.Generator, size: int) -> tuple[np.ndarray, int]:
        """``size`` outcomes and the number of proposals consumed to get them."""
        out = np.empty(size)
        filled = 0
        proposals = 0
        while filled < size:
            x = rng.uniform(-1.0, 1.0, BLOCK)
            u = rng.uniform(0.0, self.envelope, BLOCK)
            p = self.density(x)
            over = p > self.envelope
            if over.any():
                bad = float(x[np.argmax(over)])
                raise EnvelopeBreach(
                    f"p({bad:.6f}) = {self.density(bad):.9g} exceeds envelope {self.envelope:.9g}; "
                    "rebuild the sampler with a denser envelope grid or larger slack"
                )
            hits = np.flatnonzero(u < p)
            need = size - filled
            if len(hits) >= need:
                out[filled:] = x[hits[:need]]
                proposals += int(hits[need - 1]) + 1
                filled = size
            else:
                out[filled:filled + len(hits)] = x[hits]
                proposals += BLOCK
                filled += len(hits)
        return out, proposals


def sample_outcome(state: SignalState, rng: np.random.Generator, config: SamplerConfig | None = None) -> float:
    """A single x drawn from the outcome density of ``state``."""
    config = config or SamplerConfig()
    sampler = OutcomeSampler.for_state(state, config.envelope_grid, config.envelope_slack)
    return float(sampler.sample(rng, 1)[0][0])


def sample_direction(x: float, rng: np.random.Generator) -> tuple[float, float]:
    """(chi, phi) for an outcome; the azimuth is uniform by symmetry."""
    return math.acos(max(-1.0, min(1.0, x))), float(rng.uniform(0.0, 2 * math.pi))


def _run_chunk(sampler: OutcomeSampler, seed: int, shots: int):
    rng = np.random.default_rng(seed)
    x, proposals = sampler.sample(rng, shots)
    f = (1.0 + x) / 2.0
    return math.fsum(f), math.fsum(f * f), shots, proposals


def simulate_protocol(
    spec: ProblemSpec,
    config: SamplerConfig,
    exact: FidelityResult | None = None,
    chunks: int = 1,
    workers: int = 1,
) -> SimulationReport:
    exact = exact or optimal_fidelity(spec)
    sampler = OutcomeSampler.for_state(exact.state, config.envelope_grid, config.envelope_slack)
    if chunks <= 1:
        parts = [_run_chunk(sampler, config.seed, config.shots)]
    else:
        chunks = min(chunks, config.shots)
        sizes = [config.shots // chunks + (1 if i < config.shots % chunks else 0) for i in range(chunks)]
        jobs = [(config.seed ^ i, size) for i, size in enumerate(sizes)]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(lambda job: _run_chunk(sampler, *job), jobs))
        else:
            parts = [_run_chunk(sampler, *job) for job in jobs]

    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    shots = sum(p[2] for p in parts)
    proposals = sum(p[3] for p in parts)
    mean = total / shots
    if shots == 1:
        stderr = 0.0
    else:
        var = max(0.0, (total_sq - shots * mean * mean) / (shots - 1))
        stderr = math.sqrt(var / shots)
    return SimulationReport(
        spec=spec,
        config=config,
        mean_fidelity_estimate=mean,
        standard_error=stderr,
        exact_fidelity=exact.fidelity,
        accepted_fraction=shots / proposals,
    )
