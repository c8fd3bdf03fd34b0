"""Monte Carlo oracle for the CSP meta distribution.

Each realization drops MBSs and relays as independent PPPs on a square window
around a device at the origin, applies the biased max-power association, and
evaluates the CSP of the selected link in closed form over the interferer
distances (Rayleigh fading averaged out analytically). A relay-served device
gets the product of its second-hop CSP and the first-hop CSP of the serving
relay, computed at the relay's actual position toward its nearest MBS.

Realization ``i`` draws from its own counter-based Philox stream keyed by
``(master_seed, i)``, so statistics do not depend on chunking or on the number
of worker processes.
"""

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import DomainError, SimulationError
from .meta import MetaCurve

__all__ = [
    "SimWindow",
    "Realization",
    "SimulationStats",
    "realization_rng",
    "sample_ppp",
    "associate_device",
    "csp_link",
    "simulate_realization",
    "empirical_ccdf",
    "run_simulation",
    "run_threshold_sweep",
    "DEFAULT_X_GRID",
]

DEFAULT_X_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))
UNSTABLE_FLOOR = 1e-9
FIRST_HOP_MODES = ("coupled", "independent")
MAX_RESAMPLES = 100


@dataclass(frozen=True)
class SimWindow:
    """Square [-half_width, half_width]^2 in km centred on the typical device."""

    half_width: float

    def __post_init__(self):
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise DomainError(f"half_width must be positive, got {self.half_width}")

    @property
    def area(self):
        return (2.0 * self.half_width) ** 2

    @classmethod
    def default_for(cls, config):
        lam = min(config.tier1.density, config.tier2.density)
        return cls(max(10.0, 15.0 / math.sqrt(lam)))


@dataclass
class Realization:
    tier1_points: np.ndarray
    tier2_points: np.ndarray
    associated_tier: int
    csp_total: float
    csp_direct: Optional[float] = None
    csp_first_hop: Optional[float] = None
    csp_second_hop: Optional[float] = None

    def to_dict(self):
        return {
            "associated_tier": self.associated_tier,
            "csp_total": self.csp_total,
            "csp_direct": self.csp_direct,
            "csp_first_hop": self.csp_first_hop,
            "csp_second_hop": self.csp_second_hop,
            "tier1_points_km": self.tier1_points.tolist(),
            "tier2_points_km": self.tier2_points.tolist(),
        }

    def to_json(self):
        return json.dumps(self.to_dict())


@dataclass
class SimulationStats:
    n: int
    empirical_ccdf: MetaCurve
    empirical_moments: Dict[int, Tuple[float, float]]
    association_frequency: Dict[int, float]
    csp_total: np.ndarray
    tiers: np.ndarray

    def z_score(self, b, analytic):
        est, se = self.empirical_moments[b]
        return (est - analytic) / se if se > 0 else (0.0 if est == analytic else math.inf)


def realization_rng(master_seed, index):
    """Independent Philox stream for realization ``index``."""
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(seq))


def sample_ppp(density, window, rng):
    """Homogeneous PPP of ``density`` points per km^2 on ``window``; shape (n, 2)."""
    if not density > 0:
        raise DomainError(f"density must be positive, got {density}")
    n = rng.poisson(density * window.area)
    h = window.half_width
    return rng.uniform(-h, h, size=(n, 2))


def associate_device(tier1_points, tier2_points, config, device=(0.0, 0.0)):
    """Biased max-received-power association of a device.

    Returns ``(tier, index)`` with ``index`` the nearest point of the winning
    tier. Ties go to tier 1. Fading plays no role.
    """
    if len(tier1_points) == 0 or len(tier2_points) == 0:
        raise SimulationError("both tiers need at least one point for association")
    dev = np.asarray(device, dtype=float)
    d1 = np.sum((np.asarray(tier1_points) - dev) ** 2, axis=1)
    d2 = np.sum((np.asarray(tier2_points) - dev) ** 2, axis=1)
    i1, i2 = int(np.argmin(d1)), int(np.argmin(d2))
    return _associate(d1[i1], d2[i2], i1, i2, config)


def _associate(d1sq, d2sq, i1, i2, config):
    t1, t2 = config.tier1, config.tier2
    # Compare log biased powers; squared distances carry alpha/2.
    s1 = math.log(t1.power * t1.bias) - 0.5 * t1.path_loss_exponent * math.log(d1sq)
    s2 = math.log(t2.power * t2.bias) - 0.5 * t2.path_loss_exponent * math.log(d2sq)
    return (1, i1) if s1 >= s2 else (2, i2)


def csp_link(serving_distance, interferer_distances, theta, alpha):
    """Fading-averaged success probability prod_i 1 / (1 + theta (d / r_i)^alpha)."""
    d = float(serving_distance)
    r = np.asarray(interferer_distances, dtype=float)
    if d <= 0 or np.any(r <= 0):
        raise DomainError("distances must be positive")
    if theta == 0 or r.size == 0:
        return 1.0
    return math.exp(-float(np.sum(np.log1p(theta * (d / r) ** alpha))))


def _log_csp(sq_dist, serving, thetas, alpha):
    """log CSP for every threshold in ``thetas`` from squared distances."""
    ratio = np.delete(sq_dist, serving)
    if ratio.size == 0:
        return np.zeros(len(thetas))
    q = (sq_dist[serving] / ratio) ** (0.5 * alpha)
    return -np.array([np.sum(np.log1p(th * q)) if th > 0 else 0.0 for th in thetas])


def _sample_ring(density, inner, outer, rng):
    """PPP on the square ring between half-widths ``inner`` and ``outer``."""
    n = rng.poisson(density * (4.0 * outer * outer - 4.0 * inner * inner))
    kept = []
    while n > 0:
        pts = rng.uniform(-outer, outer, size=(2 * n + 16, 2))
        pts = pts[np.max(np.abs(pts), axis=1) > inner][:n]
        kept.append(pts)
        n -= len(pts)
    return np.concatenate(kept) if kept else np.empty((0, 2))


def _draw_geometry(config, window, rng):
    # Points inside the default window are drawn first, so a larger window
    # with the same stream extends the same inner geometry (paired runs).
    core = SimWindow(min(window.half_width, SimWindow.default_for(config).half_width))
    for _ in range(MAX_RESAMPLES):
        p1 = sample_ppp(config.tier1.density, core, rng)
        p2 = sample_ppp(config.tier2.density, core, rng)
        if window.half_width > core.half_width:
            h0, h = core.half_width, window.half_width
            p1 = np.concatenate([p1, _sample_ring(config.tier1.density, h0, h, rng)])
            p2 = np.concatenate([p2, _sample_ring(config.tier2.density, h0, h, rng)])
        if len(p1) and len(p2):
            return p1, p2
    raise SimulationError(f"a tier stayed empty after {MAX_RESAMPLES} resamples")


def _simulate(config, window, rng, thetas_d, thetas_2, first_hop="coupled"):
    p1, p2 = _draw_geometry(config, window, rng)
    d1 = np.einsum("ij,ij->i", p1, p1)
    d2 = np.einsum("ij,ij->i", p2, p2)
    i1, i2 = int(np.argmin(d1)), int(np.argmin(d2))
    tier, _ = _associate(d1[i1], d2[i2], i1, i2, config)
    a1 = config.tier1.path_loss_exponent
    if tier == 1:
        direct = _log_csp(d1, i1, thetas_d, a1)
        return p1, p2, tier, direct, None, None
    second = _log_csp(d2, i2, thetas_d, config.tier2.path_loss_exponent)
    if first_hop == "coupled":
        diff = p1 - p2[i2]
    else:
        # Typical-relay first hop: a fresh MBS field seen from a relay at the origin.
        diff = _draw_geometry(config, window, rng)[0]
    e = np.einsum("ij,ij->i", diff, diff)
    first = _log_csp(e, int(np.argmin(e)), thetas_2, a1)
    return p1, p2, tier, None, first, second


def simulate_realization(config, window, rng):
    """Draw one geometry and return its :class:`Realization`."""
    p1, p2, tier, direct, first, second = _simulate(
        config, window, rng, [config.theta_d], [config.theta_2]
    )
    if tier == 1:
        v = math.exp(direct[0])
        return Realization(p1, p2, 1, csp_total=v, csp_direct=v)
    f, s = math.exp(first[0]), math.exp(second[0])
    return Realization(p1, p2, 2, csp_total=f * s, csp_first_hop=f, csp_second_hop=s)


def _chunk_worker(args):
    config, window, master_seed, start, stop, thetas_d, thetas_2, first_hop = args
    n = stop - start
    tiers = np.empty(n, dtype=np.int8)
    csp = np.empty((n, len(thetas_d)))
    for row, index in enumerate(range(start, stop)):
        rng = realization_rng(master_seed, index)
        _, _, tier, direct, first, second = _simulate(
            config, window, rng, thetas_d, thetas_2, first_hop
        )
        tiers[row] = tier
        csp[row] = np.exp(direct) if tier == 1 else np.exp(first + second)
    return start, tiers, csp


def _run(config, window, n, master_seed, thetas_d, thetas_2, workers, chunk_size, first_hop):
    if n < 1:
        raise DomainError("n_realizations must be at least 1")
    if first_hop not in FIRST_HOP_MODES:
        raise DomainError(f"first_hop must be one of {FIRST_HOP_MODES}, got {first_hop!r}")
    window = window or SimWindow.default_for(config)
    tiers = np.empty(n, dtype=np.int8)
    csp = np.empty((n, len(thetas_d)))
    jobs = [
        (config, window, int(master_seed), s, min(n, s + chunk_size), thetas_d, thetas_2,
         first_hop)
        for s in range(0, n, chunk_size)
    ]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_chunk_worker, jobs))
    else:
        results = map(_chunk_worker, jobs)
    for start, t, c in results:
        tiers[start:start + len(t)] = t
        csp[start:start + len(t)] = c
    return tiers, csp


def empirical_ccdf(csp_values, xs):
    """Fraction of values strictly greater than each x (exact step function)."""
    v = np.sort(np.asarray(csp_values, dtype=float))
    if v.size == 0:
        raise DomainError("empirical ccdf needs at least one sample")
    xs = [float(x) for x in xs]
    above = v.size - np.searchsorted(v, xs, side="right")
    points = tuple((x, float(c) / v.size) for x, c in zip(xs, above))
    return MetaCurve(points=points, method="empirical")


def _moment(values, b):
    p = values ** b
    n = p.size
    mean = math.fsum(p) / n
    if n < 2:
        return mean, math.nan
    var = math.fsum((p - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def _stats(tiers, csp, xs):
    n = tiers.size
    moments = {1: _moment(csp, 1), 2: _moment(csp, 2)}
    if csp.min() > UNSTABLE_FLOOR:
        moments[-1] = _moment(csp, -1)
    freq1 = float(np.count_nonzero(tiers == 1)) / n
    return SimulationStats(
        n=n,
        empirical_ccdf=empirical_ccdf(csp, xs),
        empirical_moments=moments,
        association_frequency={1: freq1, 2: 1.0 - freq1},
        csp_total=csp,
        tiers=tiers,
    )


def run_simulation(
    config,
    window=None,
    n_realizations=10_000,
    master_seed=0,
    *,
    xs=DEFAULT_X_GRID,
    workers=1,
    chunk_size=2000,
    first_hop="coupled",
    dump_path=None,
):
    """Monte Carlo statistics of the total-network CSP.

    Parameters
    ----------
    config : NetworkConfig
    window : SimWindow, optional
        Defaults to :meth:`SimWindow.default_for`.
    n_realizations : int
    master_seed : int
    xs : sequence of float
        Grid of the empirical meta distribution.
    workers : int
        Worker processes; results are identical for any value.
    first_hop : {"coupled", "independent"}
        ``"coupled"`` evaluates the first hop at the serving relay's position in
        the same MBS field that drove association. ``"independent"`` draws a
        fresh MBS field around a typical relay, which is the hop-decoupled model
        behind the analytic moments.
    dump_path : path, optional
        Write every realization (points and CSPs) as JSON lines. Only sensible
        for small runs.
    """
    window = window or SimWindow.default_for(config)
    if dump_path is not None:
        with open(dump_path, "w", encoding="utf-8") as fh:
            for i in range(n_realizations):
                fh.write(simulate_realization(config, window, realization_rng(master_seed, i)).to_json())
                fh.write("\n")
    tiers, csp = _run(
        config, window, n_realizations, master_seed,
        [config.theta_d], [config.theta_2], workers, chunk_size, first_hop,
    )
    return _stats(tiers, csp[:, 0], xs)


def run_threshold_sweep(
    config,
    thetas,
    window=None,
    n_realizations=10_000,
    master_seed=0,
    *,
    xs=DEFAULT_X_GRID,
    workers=1,
    chunk_size=2000,
    first_hop="coupled",
):
    """Statistics for several equal thresholds theta_D = theta_2 = theta on
    shared geometries.

    Returns ``{theta: SimulationStats}``; each entry equals what
    :func:`run_simulation` gives for ``config.with_thresholds(theta)`` with the
    same seed.
    """
    thetas = [float(t) for t in thetas]
    tiers, csp = _run(
        config, window, n_realizations, master_seed, thetas, thetas, workers, chunk_size,
        first_hop,
    )
    return {th: _stats(tiers, csp[:, i], xs) for i, th in enumerate(thetas)}
