"""Seeded AWGN Monte-Carlo engine.

Estimates end-to-end word error rates under exhaustive-ML or Chase-type
decoding, and the two-sided simulation sandwich on the ML WER: the
probability that a wrong codeword inside a radius-r* sphere around the
received vector beats the transmitted one (estimated by simulation over
accepted trials) combined with the closed-form probability that the noise
escapes the sphere.

Reproducibility contract: every trial draws from its own counter-based
stream keyed by (seed, trial index), and stop rules are evaluated only at
fixed block boundaries, so results are bit-identical no matter how trials
are sharded across workers.  Per-trial draw order is: message symbols,
then (in random-mapping mode) one permutation per position, then the
noise vector.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import rs
from .bounds import NoiseModel, sphere_escape_probability
from .constellation import MappingRule, make_constellation
from .gf import Field

_MASK64 = (1 << 64) - 1


class AcceptanceRateError(RuntimeError):
    """The in-sphere acceptance rate is below the configured floor."""


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based stream for one trial; sharding cannot change it."""
    key = np.array([seed & _MASK64, trial & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def awgn_sample(dim: int, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. zero-mean Gaussian vector with per-component variance sigma2."""
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    return rng.standard_normal(dim) * math.sqrt(sigma2)


@dataclass
class SimConfig:
    """One Monte-Carlo experiment.

    mapping: "specific" (identity table, fixed) or "random" (fresh uniform
    per-position permutations for every transmitted word).
    decoder: "exhaustive-ml" or "chase".
    Stop rule: stop at the first block boundary where errors >= min_errors
    or trials >= max_trials (trials means accepted trials in sandwich
    mode); at least one of the two must be positive.
    """

    q: int
    n: int
    k: int
    constellation: str
    mapping: str = "specific"
    decoder: str = "exhaustive-ml"
    sigma2: float = 1.0
    seed: int = 0
    min_errors: int = 200
    max_trials: int = 100_000_000
    block_size: int = 1024
    eta: int = 3
    mu: int = 2
    r_star: float | None = None
    acceptance_floor: float = 1e-6
    fixed_message: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.mapping not in ("specific", "random"):
            raise ValueError(f"mapping must be 'specific' or 'random', got {self.mapping!r}")
        if self.decoder not in ("exhaustive-ml", "chase"):
            raise ValueError(
                f"decoder must be 'exhaustive-ml' or 'chase', got {self.decoder!r}"
            )
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be positive")
        if self.min_errors <= 0 and self.max_trials <= 0:
            raise ValueError("at least one stop bound (min_errors, max_trials) must be positive")
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")
        if self.fixed_message is not None and len(self.fixed_message) != self.k:
            raise ValueError("fixed_message length must equal k")


@dataclass
class WerEstimate:
    """Monte-Carlo estimate with a 95% normal-approximation half-width."""

    trials: int
    errors: int
    wer: float
    ci_radius: float
    mode: str
    generated: int | None = None  # sandwich mode: total trials drawn

    @staticmethod
    def from_counts(trials: int, errors: int, mode: str, generated: int | None = None) -> "WerEstimate":
        wer = errors / trials if trials else 0.0
        ci = 1.96 * math.sqrt(wer * (1.0 - wer) / trials) if trials else 0.0
        return WerEstimate(trials, errors, wer, ci, mode, generated)


def clopper_pearson_interval(errors: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Exact binomial confidence interval (optional alternative to the
    normal approximation in WerEstimate)."""
    from scipy.stats import beta

    if trials <= 0:
        raise ValueError("trials must be positive")
    alpha = 1.0 - confidence
    lo = 0.0 if errors == 0 else float(beta.ppf(alpha / 2.0, errors, trials - errors + 1))
    hi = 1.0 if errors == trials else float(beta.isf(alpha / 2.0, errors + 1, trials - errors))
    return lo, hi


@dataclass
class SandwichResult:
    """Two-sided simulation bounds on the ML word error rate.

    lower = in-sphere error rate; upper adds the closed-form escape
    probability of the noise from the radius-r* sphere.
    """

    escape_prob: float
    in_sphere: WerEstimate
    lower: float
    upper: float


class _Engine:
    """Immutable per-experiment state shared by all trials."""

    def __init__(self, cfg: SimConfig):
        m = cfg.q.bit_length() - 1
        if 1 << m != cfg.q:
            raise ValueError(f"q={cfg.q} is not a power of two")
        self.cfg = cfg
        self.field = Field(m)
        self.code = rs.RsCode(self.field, cfg.n, cfg.k)
        self.constellation = make_constellation(cfg.constellation)
        if self.constellation.q != cfg.q:
            raise ValueError(
                f"constellation {cfg.constellation!r} has {self.constellation.q} points, "
                f"code field has q={cfg.q}"
            )
        self.sigma = math.sqrt(cfg.sigma2)
        self.dim = self.constellation.ell * cfg.n
        self.identity_mapping = MappingRule.identity(cfg.q, cfg.n)
        self.exhaustive = cfg.decoder == "exhaustive-ml"
        if self.exhaustive:
            self.codebook = self.code.codebook()
            self.signals_specific = rs._signal_matrix(
                self.code, self.constellation, self.identity_mapping
            )
        else:
            self.codebook = None
            self.signals_specific = None

    # -- per-trial pieces --------------------------------------------------

    def _draw(self, rng: np.random.Generator):
        cfg = self.cfg
        if cfg.fixed_message is not None:
            msg = np.asarray(cfg.fixed_message, dtype=np.int64)
        else:
            msg = rng.integers(0, cfg.q, size=cfg.k)
        if cfg.mapping == "random":
            tables = np.stack([rng.permutation(cfg.q) for _ in range(cfg.n)])
            mapping = MappingRule(tables)
        else:
            mapping = self.identity_mapping
        z = rng.standard_normal(self.dim) * self.sigma
        return msg, mapping, z

    def _transmit(self, msg: np.ndarray, mapping: MappingRule):
        if self.codebook is not None:
            idx = self.code.message_index(msg)
            symbols = self.codebook[idx]
        else:
            idx = -1
            symbols = np.asarray(self.code.encode([int(s) for s in msg]).symbols)
        pts = self.constellation.points[mapping.tables[np.arange(self.cfg.n), symbols]]
        return idx, symbols, pts.reshape(-1)

    def _mapped_codebook(self, mapping: MappingRule) -> np.ndarray:
        if mapping is self.identity_mapping and self.signals_specific is not None:
            return self.signals_specific
        return rs._signal_matrix(self.code, self.constellation, mapping)

    def _ml_error(self, signals: np.ndarray, y: np.ndarray, idx: int) -> bool:
        d2 = rs._metrics(signals, y)
        dt = d2[idx]
        mn = d2.min()
        if mn < dt:
            return True
        ties = np.flatnonzero(d2 == dt)
        if len(ties) > 1:
            # break ties toward the lexicographically smallest symbol sequence
            return rs._lex_min_row(self.codebook, ties) != idx
        return False

    def wer_trial(self, trial: int) -> int:
        cfg = self.cfg
        rng = trial_rng(cfg.seed, trial)
        msg, mapping, z = self._draw(rng)
        idx, symbols, s = self._transmit(msg, mapping)
        y = s + z
        if self.exhaustive:
            return int(self._ml_error(self._mapped_codebook(mapping), y, idx))
        results = rs.chase_list_decode(
            self.code, self.constellation, mapping, y, cfg.eta, cfg.mu
        )
        if not results:
            return 1
        return int(results[0].codeword.symbols != tuple(int(v) for v in symbols))

    def sphere_trial(self, trial: int) -> tuple[int, int]:
        """(accepted, error) for one generated trial of the sandwich loop."""
        cfg = self.cfg
        rng = trial_rng(cfg.seed, trial)
        msg, mapping, z = self._draw(rng)
        if float(z @ z) > cfg.r_star**2:
            return 0, 0
        idx, symbols, s = self._transmit(msg, mapping)
        y = s + z
        if __debug__:
            assert math.sqrt(float(z @ z)) <= cfg.r_star
        # error iff the best in-sphere codeword differs from the transmitted
        # one; since the transmitted word is in the sphere, that is exactly
        # the ML error event on this trial
        if self.exhaustive:
            return 1, int(self._ml_error(self._mapped_codebook(mapping), y, idx))
        results = rs.chase_list_decode(
            self.code, self.constellation, mapping, y, cfg.eta, cfg.mu
        )
        in_sphere = [r for r in results if r.metric <= cfg.r_star**2]
        if not in_sphere:
            return 1, 1
        return 1, int(in_sphere[0].codeword.symbols != tuple(int(v) for v in symbols))


def _thread_count(threads: int | None) -> int:
    env = os.environ.get("RSCM_THREADS")
    if env is not None:
        return max(1, int(env))
    return max(1, threads or 1)


def _run_indices(fn, indices: Sequence[int], shards: int, threads: int):
    """Sum fn(i) over indices, partitioned round-robin into shards.

    The per-trial streams make the sum independent of the partitioning,
    which is asserted by the determinism tests.
    """
    parts = [indices[s::shards] for s in range(shards)] if shards > 1 else [indices]

    def run_part(part):
        acc = None
        for i in part:
            out = fn(i)
            if acc is None:
                acc = list(out) if isinstance(out, tuple) else [out]
            elif isinstance(out, tuple):
                for j, v in enumerate(out):
                    acc[j] += v
            else:
                acc[0] += out
        return acc or [0, 0]

    if threads > 1 and len(parts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_part, parts))
    else:
        results = [run_part(p) for p in parts]
    width = max(len(r) for r in results)
    totals = [0] * width
    for r in results:
        for j, v in enumerate(r):
            totals[j] += v
    return totals


def simulate_wer(cfg: SimConfig, shards: int = 1, threads: int | None = None) -> WerEstimate:
    """End-to-end WER: encode a uniform message, map, add noise, decode,
    and count word errors until the stop rule fires."""
    engine = _Engine(cfg)
    threads = _thread_count(threads)
    errors = 0
    generated = 0
    max_trials = cfg.max_trials if cfg.max_trials > 0 else None
    while True:
        hi = generated + cfg.block_size
        if max_trials is not None:
            hi = min(hi, max_trials)
        totals = _run_indices(engine.wer_trial, range(generated, hi), shards, threads)
        errors += totals[0]
        generated = hi
        if cfg.min_errors > 0 and errors >= cfg.min_errors:
            break
        if max_trials is not None and generated >= max_trials:
            break
    mode = "ml-wer" if cfg.decoder == "exhaustive-ml" else "chase-wer"
    return WerEstimate.from_counts(generated, errors, mode)


def estimate_in_sphere_wer(cfg: SimConfig, shards: int = 1, threads: int | None = None) -> WerEstimate:
    """Error rate of the best-in-sphere decoder over accepted trials.

    Draws (codeword, noise) pairs, keeps only trials whose noise stays
    inside the radius-r* sphere, and within those counts the trials where
    some other in-sphere codeword beats the transmitted one.  The returned
    rate conditions on acceptance; together with the closed-form escape
    probability it sandwiches the ML WER (conditioning on small noise can
    only lower the error rate, so the lower bound remains valid).  The
    total number of generated trials is reported alongside.
    """
    if cfg.r_star is None or not cfg.r_star > 0:
        raise ValueError("sandwich estimation requires r_star > 0")
    engine = _Engine(cfg)
    threads = _thread_count(threads)
    predicted_acceptance = 1.0 - sphere_escape_probability(
        cfg.r_star, NoiseModel(cfg.sigma2, engine.dim)
    )
    if predicted_acceptance < cfg.acceptance_floor:
        raise AcceptanceRateError(
            f"predicted acceptance rate {predicted_acceptance:.3e} for r*={cfg.r_star} "
            f"is below the floor {cfg.acceptance_floor:.1e}; increase r_star"
        )
    errors = 0
    accepted = 0
    generated = 0
    max_accepted = cfg.max_trials if cfg.max_trials > 0 else None
    while True:
        hi = generated + cfg.block_size
        acc, err = _run_indices(engine.sphere_trial, range(generated, hi), shards, threads)
        accepted += acc
        errors += err
        generated = hi
        if cfg.min_errors > 0 and errors >= cfg.min_errors:
            break
        if max_accepted is not None and accepted >= max_accepted:
            break
        if generated >= 1_000_000 and accepted < cfg.acceptance_floor * generated:
            raise AcceptanceRateError(
                f"observed acceptance rate {accepted / generated:.3e} after "
                f"{generated} generated trials is below the floor {cfg.acceptance_floor:.1e}"
            )
    return WerEstimate.from_counts(accepted, errors, "pr_e2", generated=generated)


def early_exit_ml_error(code, constellation, mapping, y, transmitted) -> bool:
    """Genie-aided error check: scan candidates and flag an error as soon as
    any codeword beats the transmitted one, without finishing the search.
    Agrees with the full decoder's error verdict on every input."""
    y = np.asarray(y, dtype=float).ravel()
    cb = code.codebook()
    symbols = tuple(getattr(transmitted, "symbols", transmitted))
    s = constellation.points[
        mapping.tables[np.arange(code.n), np.asarray(symbols, dtype=np.int64)]
    ].reshape(-1)
    dt = float(rs._metrics(s[None, :], y)[0])
    signals = rs._signal_matrix(code, constellation, mapping)
    chunk = 256
    for lo in range(0, len(cb), chunk):
        d2 = rs._metrics(signals[lo : lo + chunk], y)
        better = np.flatnonzero(d2 < dt)
        if len(better):
            return True
        for r in np.flatnonzero(d2 == dt):
            row = tuple(int(v) for v in cb[lo + r])
            if row < symbols:
                return True
    return False


def sandwich_bounds(cfg: SimConfig, shards: int = 1, threads: int | None = None) -> SandwichResult:
    """Combine the closed-form escape probability with the simulated
    in-sphere error rate into lower/upper bounds on the ML WER."""
    if cfg.r_star is None or not cfg.r_star > 0:
        raise ValueError("sandwich mode requires r_star > 0")
    engine_dim = make_constellation(cfg.constellation).ell * cfg.n
    noise = NoiseModel(cfg.sigma2, engine_dim)
    escape = sphere_escape_probability(cfg.r_star, noise)
    est = estimate_in_sphere_wer(cfg, shards=shards, threads=threads)
    lower = est.wer
    upper = min(1.0, escape + est.wer)
    if lower > upper:
        raise AssertionError("sandwich bounds inverted")
    return SandwichResult(escape_prob=escape, in_sphere=est, lower=lower, upper=upper)
