"""Randomized numerical certification of the entropy inequalities.

Each suite draws independent trials.  Trial ``i`` of a suite is generated
from its own seed, derived from the master seed, the suite's instance
family and ``i`` (:func:`trial_seed`), so any trial can be regenerated on
its own with :func:`replay`.  A trial's violation is the largest relative
violation over all of its checks; for Loewner checks that is
``max(0, -min eig(Y - X)) / (1 + max(|X|_max, |Y|_max))``.  Failures never
stop a suite.
"""

import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import __version__, _accel, linalg, scalar
from .generators import random_partition, random_prob_vector, random_spd
from .operators import OperatorPair

DEFAULT_LAMBDA_GRID = tuple(round(0.1 * i, 10) for i in range(1, 11))
SUITE_NAMES = ("scalar", "lemma21", "theorem21", "furuta", "prop31", "chains", "summed")
EXPLORATORY = "exploratory"

# fixed thresholds that do not scale with TrialConfig.tol
MONOTONE_SLACK = 1e-12
FINAL_GAP_MAX = 1e-5
RATIO_BAND = (400.0, 2500.0)
IDENTITY_TOL = 1e-10
HALVING_DEPTH = 20


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 42
    trials: int = 500
    dims: tuple = (1, 8)
    partition_sizes: tuple = (1, 5)
    vector_sizes: tuple = (2, 10)
    lambda_grid: tuple = DEFAULT_LAMBDA_GRID
    limit_lambdas: tuple = (1e-3, 1e-6)
    ladder_lambdas: tuple = (0.25, 0.5, 1.0)
    mu_grid: tuple = (-1.0, 0.0, 0.5, 1.0)
    k_max: int = 3
    tol: float = 1e-9
    condition_cap: float = 1e4

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        lo, hi = self.dims
        if not 1 <= lo <= hi <= 16:
            raise ValueError("dims must satisfy 1 <= lo <= hi <= 16")
        lo, hi = self.partition_sizes
        if not 1 <= lo <= hi:
            raise ValueError("partition_sizes must satisfy 1 <= lo <= hi")
        lo, hi = self.vector_sizes
        if not 1 <= lo <= hi:
            raise ValueError("vector_sizes must satisfy 1 <= lo <= hi")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.k_max < 0:
            raise ValueError("k_max must be >= 0")
        if self.condition_cap < 1:
            raise ValueError("condition_cap must be >= 1")
        if not all(0 < lam <= 1 for lam in self.lambda_grid + self.limit_lambdas):
            raise ValueError("lambda_grid and limit_lambdas must lie in (0, 1]")
        if not all(lam > 0 for lam in self.ladder_lambdas):
            raise ValueError("ladder_lambdas must be positive")

    def to_dict(self):
        d = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in d.items()})


class Outcome(NamedTuple):
    violation: float
    ok: bool
    metrics: dict


@dataclass
class SuiteResult:
    name: str
    trials: int
    passes: int
    failures: int
    worst_violation: float
    worst_instance_seed: int
    metrics: dict = field(default_factory=dict)
    exploratory: bool = False

    @property
    def passed(self):
        return self.failures == 0

    def to_dict(self):
        return asdict(self)


@dataclass
class VerificationReport:
    config: TrialConfig
    suites: list
    overall_pass: bool

    def suite(self, name):
        for s in self.suites:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_dict(self):
        return {
            "tool_version": __version__,
            "backend": _accel.backend_name(),
            "config": self.config.to_dict(),
            "suites": [s.to_dict() for s in self.suites],
            "overall_pass": self.overall_pass,
        }


class _Checker:
    """Accumulates relative violations of one trial."""

    def __init__(self, tol):
        self.tol = tol
        self.violation = 0.0
        self.ok = True
        self.metrics = {}

    def leq(self, x, y):
        """Loewner ``x <= y``."""
        res = linalg.loewner_leq(x, y, self.tol)
        self._record(res.relative_violation)

    def scalar_leq(self, x, y, tol=None):
        rel = max(0.0, x - y) / (1.0 + max(abs(x), abs(y)))
        self._record(rel, tol)

    def close(self, x, y, tol, metric):
        err = linalg.max_norm(x - y) / (1.0 + max(linalg.max_norm(x), linalg.max_norm(y)))
        self.metric(metric, err)
        if not err <= tol:
            self.ok = False

    def require(self, cond):
        if not cond:
            self.ok = False

    def metric(self, name, value):
        value = float(value)
        old = self.metrics.get(name)
        if old is None:
            self.metrics[name] = value
        else:
            self.metrics[name] = min(old, value) if name.startswith("min_") else max(old, value)

    def _record(self, rel, tol=None):
        tol = self.tol if tol is None else tol
        self.violation = max(self.violation, rel)
        if not rel <= tol:
            self.ok = False

    def outcome(self):
        return Outcome(self.violation, self.ok, self.metrics)


def _draw_dim(rng, cfg):
    lo, hi = cfg.dims
    return int(rng.integers(lo, hi + 1))


def _draw_partition_pair(rng, cfg):
    d = _draw_dim(rng, cfg)
    lo, hi = cfg.partition_sizes
    n = int(rng.integers(lo, hi + 1))
    a_blocks = random_partition(n, d, rng, cfg.condition_cap)
    b_blocks = random_partition(n, d, rng, cfg.condition_cap)
    return a_blocks, b_blocks


def _draw_spd_pair(rng, cfg):
    d = _draw_dim(rng, cfg)
    return random_spd(d, cfg.condition_cap, rng), random_spd(d, cfg.condition_cap, rng)


# -- scalar ---------------------------------------------------------------


def check_scalar(a, b, cfg):
    chk = _Checker(cfg.tol)
    kl = scalar.kl_lower_bound(a, b)
    for lam in cfg.lambda_grid:
        s = scalar.tsallis_relative(a, b, lam)
        chk.scalar_leq(kl, s)
        chk.scalar_leq(s, 0.0)
        chk.scalar_leq(scalar.prop2_lower_bound(a, b, lam), s)

    # gap to the lam -> 0 limit along lam = 2^-1 ... 2^-HALVING_DEPTH
    gaps = [scalar.tsallis_relative(a, b, 0.5**i) - kl for i in range(1, HALVING_DEPTH + 1)]
    rises = [max(0.0, g1 - g0) for g0, g1 in zip(gaps, gaps[1:])]
    chk.metric("max_monotone_breach", max(rises, default=0.0))
    chk.require(all(r <= MONOTONE_SLACK for r in rises))
    chk.metric("max_final_gap", gaps[-1])
    chk.require(gaps[-1] <= FINAL_GAP_MAX)

    lam_hi, lam_lo = max(cfg.limit_lambdas), min(cfg.limit_lambdas)
    g_hi = scalar.tsallis_relative(a, b, lam_hi) - kl
    g_lo = scalar.tsallis_relative(a, b, lam_lo) - kl
    if g_lo > 0 and lam_hi != lam_lo:
        # normalize to a thousand-fold reduction in lambda
        ratio = (g_hi / g_lo) ** (3.0 / math.log10(lam_hi / lam_lo))
        chk.metric("min_ratio", ratio)
        chk.metric("max_ratio", ratio)
        chk.require(RATIO_BAND[0] <= ratio <= RATIO_BAND[1])
        chk.metric("max_limit_gap", g_lo)
        chk.require(g_lo <= FINAL_GAP_MAX)
    return chk.outcome()


def _trial_scalar(rng, cfg):
    lo, hi = cfg.vector_sizes
    n = int(rng.integers(lo, hi + 1))
    return check_scalar(random_prob_vector(n, rng), random_prob_vector(n, rng), cfg)


# -- lemma 2.1: (t^lam - 1)/lam <= t - 1 ----------------------------------


def _trial_lemma21(rng, cfg):
    chk = _Checker(cfg.tol)
    jitter = 10.0 ** rng.uniform(-0.05, 0.05)
    t = np.append(np.logspace(-3.0, 3.0, 61) * jitter, 1.0)
    logt = np.log(t)
    for lam in cfg.lambda_grid + cfg.limit_lambdas:
        lhs = np.expm1(lam * logt) / lam
        rel = np.maximum(0.0, lhs - (t - 1.0)) / (1.0 + t)
        chk._record(float(rel.max()))
    return chk.outcome()


# -- theorem 2.1 and the Furuta corollary over identity partitions ------------


def _sandwich_sum(a_blocks, b_blocks):
    # sum_j A_j B_j^{-1} A_j
    return sum(linalg.symmetrize(a @ np.linalg.solve(b, a)) for a, b in zip(a_blocks, b_blocks))


def check_theorem21(a_blocks, b_blocks, cfg, lambdas=None, relaxed=False):
    chk = _Checker(cfg.tol)
    lambdas = cfg.lambda_grid if lambdas is None else lambdas
    pairs = [OperatorPair(a, b) for a, b in zip(a_blocks, b_blocks)]
    r = _sandwich_sum(a_blocks, b_blocks)
    eig_r = linalg.eigh(r)
    log_r = np.log(eig_r.eigenvalues)
    zero = np.zeros_like(r)
    for lam in lambdas:
        total = sum(p.tsallis(lam, relaxed=relaxed) for p in pairs)
        lower = linalg.from_spectrum(eig_r, np.expm1(-lam * log_r) / lam)
        chk.leq(total, zero)
        chk.leq(lower, total)
    return chk.outcome()


def check_furuta(a_blocks, b_blocks, cfg):
    chk = _Checker(cfg.tol)
    total = sum(OperatorPair(a, b).relative_entropy() for a, b in zip(a_blocks, b_blocks))
    r = _sandwich_sum(a_blocks, b_blocks)
    chk.leq(total, np.zeros_like(r))
    chk.leq(-linalg.logm(r), total)
    return chk.outcome()


def _trial_theorem21(rng, cfg):
    return check_theorem21(*_draw_partition_pair(rng, cfg), cfg)


def _trial_furuta(rng, cfg):
    return check_furuta(*_draw_partition_pair(rng, cfg), cfg)


# -- proposition 3.1 ladders ------------------------------------------------


def check_prop31(a, b, cfg, ks=None):
    chk = _Checker(cfg.tol)
    pair = OperatorPair(a, b)
    cache = {}

    def s(nu):
        if nu not in cache:
            cache[nu] = pair.generalized_relative_entropy(nu)
        return cache[nu]

    ks = range(cfg.k_max + 1) if ks is None else ks
    for lam in cfg.ladder_lambdas:
        for mu in cfg.mu_grid:
            for k in ks:
                down = pair.generalized_tsallis(mu, k + 1, -lam)
                chk.leq(s(mu - (k + 1) * lam), down)
                chk.leq(down, s(mu - k * lam))
                up = pair.generalized_tsallis(mu, k + 1, lam)
                chk.leq(s(mu + k * lam), up)
                chk.leq(up, s(mu + (k + 1) * lam))
    return chk.outcome()


def _trial_prop31(rng, cfg):
    return check_prop31(*_draw_spd_pair(rng, cfg), cfg)


# -- closed-form chains -------------------------------------------------------


def closed_forms(a, b):
    """The four rational links, computed with linear solves, not spectra.

    Returns ``(A B^-1 A - A B^-1 A B^-1 A, A - A B^-1 A, B - A, B A^-1 B - B)``.
    """
    aba = linalg.symmetrize(a @ np.linalg.solve(b, a))
    ababa = linalg.symmetrize(aba @ np.linalg.solve(b, a))
    bab = linalg.symmetrize(b @ np.linalg.solve(a, b))
    return aba - ababa, a - aba, b - a, bab - b


def check_chain(a, b, cfg):
    chk = _Checker(cfg.tol)
    pair = OperatorPair(a, b)
    c_m2, c_m1, c_p1, c_p2 = closed_forms(a, b)
    s = {nu: pair.generalized_relative_entropy(nu) for nu in (-2, -1, 0, 1, 2)}
    chain = [s[-2], c_m2, s[-1], c_m1, s[0], c_p1, s[1], c_p2, s[2]]
    for lo, hi in zip(chain, chain[1:]):
        chk.leq(lo, hi)
    for closed, (k, lam) in zip((c_m2, c_m1, c_p1, c_p2), ((2, -1), (1, -1), (1, 1), (2, 1))):
        chk.close(closed, pair.generalized_tsallis(0.0, k, lam), IDENTITY_TOL, "max_identity_error")
    return chk.outcome()


def _trial_chains(rng, cfg):
    return check_chain(*_draw_spd_pair(rng, cfg), cfg)


def check_summed_chain(a_blocks, b_blocks, cfg):
    chk = _Checker(cfg.tol)
    pairs = [OperatorPair(a, b) for a, b in zip(a_blocks, b_blocks)]
    s = {nu: sum(p.generalized_relative_entropy(nu) for p in pairs) for nu in (-2, -1, 0, 1, 2)}
    eye = np.eye(a_blocks[0].shape[0])
    third = sum(closed_forms(a, b)[0] for a, b in zip(a_blocks, b_blocks))
    r = _sandwich_sum(a_blocks, b_blocks)
    bab = sum(linalg.symmetrize(b @ np.linalg.solve(a, b)) for a, b in zip(a_blocks, b_blocks))
    chain = [s[-2], third, s[-1], eye - r, s[0], np.zeros_like(eye), s[1], bab - eye, s[2]]
    for lo, hi in zip(chain, chain[1:]):
        chk.leq(lo, hi)
    return chk.outcome()


def _trial_summed(rng, cfg):
    return check_summed_chain(*_draw_partition_pair(rng, cfg), cfg)


# -- exploratory: outside the stated hypotheses, never part of overall_pass ---


def _trial_exploratory(rng, cfg):
    a_blocks, b_blocks = _draw_partition_pair(rng, cfg)
    outside = check_theorem21(a_blocks, b_blocks, cfg, lambdas=(1.5, 2.0, 3.0), relaxed=True)
    a, b = _draw_spd_pair(rng, cfg)
    negative_k = check_prop31(a, b, cfg, ks=(-3, -2, -1))
    metrics = {"theorem21_lambda_gt_1": outside.violation, "prop31_negative_k": negative_k.violation}
    return Outcome(
        max(outside.violation, negative_k.violation), outside.ok and negative_k.ok, metrics
    )


class _Suite(NamedTuple):
    family: str
    trial: Callable


_SUITES = {
    "scalar": _Suite("prob-vector-pairs", _trial_scalar),
    "lemma21": _Suite("scalar-grid", _trial_lemma21),
    "theorem21": _Suite("partition-pairs", _trial_theorem21),
    "furuta": _Suite("partition-pairs", _trial_furuta),
    "prop31": _Suite("spd-pairs", _trial_prop31),
    "chains": _Suite("spd-pairs", _trial_chains),
    "summed": _Suite("summed-partition-pairs", _trial_summed),
    EXPLORATORY: _Suite("exploratory", _trial_exploratory),
}


def trial_seed(master_seed, family, index):
    """Seed of trial ``index`` within an instance family.

    Suites sharing a family (``theorem21``/``furuta``, ``prop31``/``chains``)
    see identical instances.
    """
    ss = np.random.SeedSequence([int(master_seed), zlib.crc32(family.encode()), int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


def replay(name, seed, cfg):
    """Regenerate and re-check one trial from its seed."""
    return _SUITES[name].trial(np.random.default_rng(seed), cfg)


def run_suite(name, cfg, threads=1):
    if name not in _SUITES:
        raise KeyError(f"unknown suite {name!r}")
    suite = _SUITES[name]
    seeds = [trial_seed(cfg.seed, suite.family, i) for i in range(cfg.trials)]

    def one(seed):
        return suite.trial(np.random.default_rng(seed), cfg)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(one, seeds))
    else:
        outcomes = [one(seed) for seed in seeds]

    passes = sum(o.ok for o in outcomes)
    # worst trial: failing trials first, then largest violation, then earliest
    worst = max(range(len(outcomes)), key=lambda i: (not outcomes[i].ok, outcomes[i].violation, -i))
    metrics = {}
    for o in outcomes:
        for key, value in o.metrics.items():
            if key not in metrics:
                metrics[key] = value
            else:
                metrics[key] = min(metrics[key], value) if key.startswith("min_") else max(metrics[key], value)
    return SuiteResult(
        name=name,
        trials=len(outcomes),
        passes=passes,
        failures=len(outcomes) - passes,
        worst_violation=float(outcomes[worst].violation),
        worst_instance_seed=seeds[worst],
        metrics=dict(sorted(metrics.items())),
        exploratory=name == EXPLORATORY,
    )


def suite_scalar_props(cfg, threads=1):
    return run_suite('scalar', cfg, threads)


def suite_lemma21(cfg, threads=1):
    return run_suite('lemma21', cfg, threads)


def suite_theorem21(cfg, threads=1):
    return run_suite('theorem21', cfg, threads)


def suite_furuta_corollary(cfg, threads=1):
    return run_suite('furuta', cfg, threads)


def suite_prop31(cfg, threads=1):
    return run_suite('prop31', cfg, threads)


def suite_chain_corollaries(cfg, threads=1):
    return run_suite('chains', cfg, threads)


def suite_summed_chains(cfg, threads=1):
    return run_suite('summed', cfg, threads)


def run_all(cfg, suites=None, threads=1):
    """Run the named suites (default: every certified suite) and aggregate.

    The exploratory suite may be requested but never affects ``overall_pass``.
    """
    names = SUITE_NAMES if suites is None else tuple(suites)
    results = [run_suite(name, cfg, threads) for name in names]
    overall = all(r.passed for r in results if not r.exploratory)
    return VerificationReport(cfg, results, overall)
