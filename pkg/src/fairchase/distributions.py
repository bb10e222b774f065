"""Score distribution families and their fitting routines.

Three families model innings totals: a negative binomial evaluated through
log-gamma (the primary count model), plus normal and logistic comparators
fitted by moments. All evaluation functions are pure; fitted distributions
are immutable values safe to share across threads.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import betainc, gammaln, logit, ndtr, ndtri

from .errors import (
    DegenerateQuantileWarning,
    InsufficientSample,
    InvalidParams,
    UnderdispersedSample,
    ZeroVariance,
)

DEFAULT_QUANTILE_CAP = 2000


class Family(str, Enum):
    NEGBIN = "negbin"
    NORMAL = "normal"
    LOGISTIC = "logistic"


@dataclass(frozen=True)
class NegBinParams:
    """Count-model parameters: dispersion n > 0 and probability 0 < p < 1.

    The mean is n * (1 - p) / p; libraries disagree on which probability is
    called p, so this parameterization is fixed here and everywhere below.
    """

    n: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.n) and self.n > 0):
            raise InvalidParams(f"dispersion n must be finite and positive, got {self.n}")
        if not (0.0 < self.p < 1.0):
            raise InvalidParams(f"probability p must lie in (0, 1), got {self.p}")

    @property
    def mean(self) -> float:
        return self.n * (1.0 - self.p) / self.p

    @property
    def variance(self) -> float:
        return self.mean / self.p


@dataclass(frozen=True)
class NormalParams:
    mu: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidParams(f"sigma must be finite and positive, got {self.sigma}")
        if not math.isfinite(self.mu):
            raise InvalidParams(f"mu must be finite, got {self.mu}")


@dataclass(frozen=True)
class LogisticParams:
    mu: float
    s: float

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s > 0):
            raise InvalidParams(f"scale s must be finite and positive, got {self.s}")
        if not math.isfinite(self.mu):
            raise InvalidParams(f"mu must be finite, got {self.mu}")


Params = Union[NegBinParams, NormalParams, LogisticParams]

_PARAMS_BY_FAMILY = {
    Family.NEGBIN: NegBinParams,
    Family.NORMAL: NormalParams,
    Family.LOGISTIC: LogisticParams,
}


@dataclass(frozen=True)
class FittedDist:
    """One fitted (or hand-specified) score distribution.

    sample_size is 0 for distributions built directly from parameters rather
    than from data. degenerate marks fits where the dispersion search hit its
    bound and the parameters should not be trusted.
    """

    family: Family
    params: Params
    sample_size: int = 0
    log_likelihood: float = 0.0
    degenerate: bool = False

    def __post_init__(self):
        expected = _PARAMS_BY_FAMILY[self.family]
        if not isinstance(self.params, expected):
            raise InvalidParams(
                f"family {self.family.value} requires {expected.__name__}, "
                f"got {type(self.params).__name__}"
            )
        if not math.isfinite(self.log_likelihood):
            raise InvalidParams("log_likelihood must be finite")
        if self.sample_size < 0:
            raise InvalidParams("sample_size must be non-negative")

    @classmethod
    def negbin(cls, n: float, p: float) -> "FittedDist":
        return cls(Family.NEGBIN, NegBinParams(n, p))

    @classmethod
    def normal(cls, mu: float, sigma: float) -> "FittedDist":
        return cls(Family.NORMAL, NormalParams(mu, sigma))

    @classmethod
    def logistic(cls, mu: float, s: float) -> "FittedDist":
        return cls(Family.LOGISTIC, LogisticParams(mu, s))

    @property
    def mean(self) -> float:
        if isinstance(self.params, NegBinParams):
            return self.params.mean
        return self.params.mu


@dataclass(frozen=True)
class FitConfig:
    """Knobs for the fitting routines, with the documented defaults.

    underdispersed selects what fit_nb does when variance <= mean: "raise"
    signals UnderdispersedSample, "clamp" returns the n_upper-bound fit with
    the degenerate flag set.
    """

    min_sample_size: int = 10
    n_lower: float = 1e-3
    n_upper: float = 1e6
    rel_tol: float = 1e-8
    quantile_cap: int = DEFAULT_QUANTILE_CAP
    underdispersed: str = "raise"


DEFAULT_FIT_CONFIG = FitConfig()


def nb_logpmf(x: int, params: NegBinParams) -> float:
    """Log of the count pmf at x, evaluated through log-gamma for stability."""
    if x < 0:
        return -math.inf
    return float(
        gammaln(x + params.n)
        - gammaln(params.n)
        - gammaln(x + 1)
        + params.n * math.log(params.p)
        + x * math.log1p(-params.p)
    )


def nb_pmf(x: int, params: NegBinParams) -> float:
    """P(X = x) for the negative binomial count model; 0 for x < 0."""
    if x < 0:
        return 0.0
    return math.exp(nb_logpmf(x, params))


def cdf(dist: FittedDist, x: int) -> float:
    """P(X <= x). Scores are non-negative, so any x < 0 returns 0.

    The negative binomial uses the regularized incomplete beta, which equals
    the partial pmf sum from 0 to x. The continuous families evaluate their
    analytic CDF directly at integer x, with no continuity correction.
    """
    if x < 0:
        return 0.0
    p = dist.params
    if isinstance(p, NegBinParams):
        return float(betainc(p.n, x + 1, p.p))
    if isinstance(p, NormalParams):
        return float(ndtr((x - p.mu) / p.sigma))
    z = (x - p.mu) / p.s
    # logistic CDF, written to avoid overflow for large |z|
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def survival(dist: FittedDist, x: int) -> float:
    """P(X > x), the complement of cdf."""
    return 1.0 - cdf(dist, x)


def pmf(dist: FittedDist, x: int) -> float:
    """Probability mass at integer x.

    Exact for the negative binomial; for the continuous comparators this is
    the unit-step mass cdf(x) - cdf(x - 1), which is the resolution limit of
    any integer-valued inversion.
    """
    if isinstance(dist.params, NegBinParams):
        return nb_pmf(x, dist.params)
    return cdf(dist, x) - cdf(dist, x - 1)


def quantile(dist: FittedDist, q: float, cap: int = DEFAULT_QUANTILE_CAP) -> int:
    """Smallest integer score x >= 0 with cdf(x) >= q.

    The negative binomial is inverted exactly via bracketed binary search on
    its CDF; the continuous families take the ceiling of the analytic inverse
    CDF (so the returned score never understates the probability), floored at
    0. q = 1 cannot be reached on unbounded support: the hard cap is returned
    and a DegenerateQuantileWarning is issued. The same applies whenever the
    true quantile exceeds the cap.
    """
    if not (0.0 <= q <= 1.0):
        raise InvalidParams(f"quantile probability must lie in [0, 1], got {q}")
    if q == 0.0:
        return 0
    if q == 1.0:
        warnings.warn(
            f"quantile at probability 1 is unbounded; returning cap {cap}",
            DegenerateQuantileWarning,
            stacklevel=2,
        )
        return cap

    p = dist.params
    if isinstance(p, NormalParams):
        raw = p.mu + p.sigma * float(ndtri(q))
        return _clip_to_cap(math.ceil(raw), cap)
    if isinstance(p, LogisticParams):
        raw = p.mu + p.s * float(logit(q))
        return _clip_to_cap(math.ceil(raw), cap)

    if cdf(dist, 0) >= q:
        return 0
    lo, hi = 0, 1
    while cdf(dist, hi) < q:
        lo, hi = hi, hi * 2
        if hi >= cap:
            if cdf(dist, cap) < q:
                warnings.warn(
                    f"quantile({q}) exceeds the hard cap {cap}",
                    DegenerateQuantileWarning,
                    stacklevel=2,
                )
                return cap
            hi = cap
            break
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if cdf(dist, mid) >= q:
            hi = mid
        else:
            lo = mid
    return hi


def _clip_to_cap(x: int, cap: int) -> int:
    if x < 0:
        return 0
    if x > cap:
        warnings.warn(
            f"quantile exceeds the hard cap {cap}", DegenerateQuantileWarning, stacklevel=3
        )
        return cap
    return x


def _as_score_array(scores: Sequence[int], config: FitConfig) -> np.ndarray:
    xs = np.asarray(scores, dtype=float)
    if xs.size < max(2, config.min_sample_size):
        raise InsufficientSample(
            f"need at least {max(2, config.min_sample_size)} scores, got {xs.size}"
        )
    if xs.size and xs.min() < 0:
        raise InvalidParams("scores must be non-negative")
    return xs


def _nb_profile_loglik(n: float, xs: np.ndarray, xbar: float) -> float:
    # p profiled out at its conditional maximum p(n) = n / (n + mean)
    p = n / (n + xbar)
    size = xs.size
    return float(
        np.sum(gammaln(xs + n))
        - size * gammaln(n)
        - np.sum(gammaln(xs + 1))
        + size * n * math.log(p)
        + xs.sum() * math.log1p(-p)
    )


def fit_nb(scores: Sequence[int], config: FitConfig = DEFAULT_FIT_CONFIG) -> FittedDist:
    """Maximum-likelihood negative binomial fit.

    p is profiled out analytically, which pins the fitted mean to the sample
    mean; the dispersion n is then found by a one-dimensional search on
    log(n) over [n_lower, n_upper]. A coarse log-grid scan runs first so that
    a likelihood flat to tolerance resolves to the smallest (heaviest-tailed)
    n before local refinement.
    """
    xs = _as_score_array(scores, config)
    xbar = float(xs.mean())
    var = float(xs.var(ddof=1))

    if var <= xbar:
        if config.underdispersed != "clamp" or xbar == 0.0:
            raise UnderdispersedSample(
                f"sample variance {var:.3f} <= mean {xbar:.3f}; "
                "the count model cannot represent this sample"
            )
        n = config.n_upper
        params = NegBinParams(n, n / (n + xbar))
        ll = _nb_profile_loglik(n, xs, xbar)
        return FittedDist(Family.NEGBIN, params, xs.size, ll, degenerate=True)

    log_lo, log_hi = math.log(config.n_lower), math.log(config.n_upper)
    grid = np.exp(np.linspace(log_lo, log_hi, 64))
    values = np.array([_nb_profile_loglik(g, xs, xbar) for g in grid])
    best = float(values.max())
    flat = values >= best - 1e-9 * max(1.0, abs(best))
    i = int(np.nonzero(flat)[0][0])  # smallest n among ties

    bracket_lo = math.log(grid[max(i - 1, 0)])
    bracket_hi = math.log(grid[min(i + 1, grid.size - 1)])
    result = minimize_scalar(
        lambda t: -_nb_profile_loglik(math.exp(t), xs, xbar),
        bounds=(bracket_lo, bracket_hi),
        method="bounded",
        options={"xatol": config.rel_tol},
    )
    n_hat = math.exp(float(result.x))
    if -float(result.fun) < best:
        n_hat = float(grid[i])

    params = NegBinParams(n_hat, n_hat / (n_hat + xbar))
    ll = _nb_profile_loglik(n_hat, xs, xbar)
    degenerate = n_hat >= 0.999 * config.n_upper
    return FittedDist(Family.NEGBIN, params, int(xs.size), ll, degenerate=degenerate)


def fit_normal(scores: Sequence[int], config: FitConfig = DEFAULT_FIT_CONFIG) -> FittedDist:
    """Moment fit: mu = sample mean, sigma = sample standard deviation (N-1)."""
    xs = _as_score_array(scores, config)
    var = float(xs.var(ddof=1))
    if var == 0.0:
        raise ZeroVariance("all scores identical; normal fit undefined")
    params = NormalParams(float(xs.mean()), math.sqrt(var))
    z = (xs - params.mu) / params.sigma
    ll = float(-0.5 * np.sum(z**2) - xs.size * math.log(params.sigma * math.sqrt(2 * math.pi)))
    return FittedDist(Family.NORMAL, params, int(xs.size), ll)


def fit_logistic(scores: Sequence[int], config: FitConfig = DEFAULT_FIT_CONFIG) -> FittedDist:
    """Moment fit: mu = sample mean, s = sqrt(3 * variance) / pi."""
    xs = _as_score_array(scores, config)
    var = float(xs.var(ddof=1))
    if var == 0.0:
        raise ZeroVariance("all scores identical; logistic fit undefined")
    params = LogisticParams(float(xs.mean()), math.sqrt(3.0 * var) / math.pi)
    z = (xs - params.mu) / params.s
    ll = float(np.sum(-z - 2.0 * np.logaddexp(0.0, -z)) - xs.size * math.log(params.s))
    return FittedDist(Family.LOGISTIC, params, int(xs.size), ll)


_FITTERS = {
    Family.NEGBIN: fit_nb,
    Family.NORMAL: fit_normal,
    Family.LOGISTIC: fit_logistic,
}


def fit(scores: Sequence[int], family: Family, config: FitConfig = DEFAULT_FIT_CONFIG) -> FittedDist:
    """Fit the requested family to the scores."""
    return _FITTERS[family](scores, config)


def fitted_to_dict(dist: FittedDist, venue: str, case: str) -> dict:
    """JSON-ready document for one labeled fit."""
    params = dist.params
    if isinstance(params, NegBinParams):
        param_doc = {"n": params.n, "p": params.p}
    elif isinstance(params, NormalParams):
        param_doc = {"mu": params.mu, "sigma": params.sigma}
    else:
        param_doc = {"mu": params.mu, "s": params.s}
    return {
        "venue": venue,
        "case": case,
        "family": dist.family.value,
        "params": param_doc,
        "sample_size": dist.sample_size,
        "log_likelihood": dist.log_likelihood,
        "degenerate_flag": dist.degenerate,
    }


def fitted_from_dict(doc: dict) -> tuple[str, str, FittedDist]:
    """Inverse of fitted_to_dict; re-validates all parameter invariants."""
    try:
        family = Family(doc["family"])
        params_cls = _PARAMS_BY_FAMILY[family]
        params = params_cls(**doc["params"])
        dist = FittedDist(
            family,
            params,
            int(doc["sample_size"]),
            float(doc["log_likelihood"]),
            bool(doc.get("degenerate_flag", False)),
        )
        return str(doc["venue"]), str(doc["case"]), dist
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParams(f"malformed fitted-distribution document: {exc}") from exc


def fitted_to_json(entries: Sequence[tuple[str, str, FittedDist]]) -> str:
    """Serialize labeled fits to a JSON array (venue, case, dist triples)."""
    return json.dumps(
        [fitted_to_dict(dist, venue, case) for venue, case, dist in entries],
        indent=2,
    )


def fitted_from_json(text: str) -> list[tuple[str, str, FittedDist]]:
    return [fitted_from_dict(doc) for doc in json.loads(text)]

