"""Gaussian quadrant probability and stability-versus-quadrant reports.

The quadrant probability of correlation rho at volume mu is the chance that
two rho-correlated standard Gaussians both land below the mu-quantile:

    Lambda_rho(mu) = Pr[z1 <= t and z2 <= t],   Phi(t) = mu.

Computed as the single integral of Phi((t - rho z)/sqrt(1 - rho^2)) against
the Gaussian density over z <= t, which adaptive quadrature resolves to
well below the 1e-9 default tolerance.  Among [0,1]-valued functions with
no dominant coordinate, noise stability cannot exceed this quantity by
much; ``mist_slack`` reports the gap for one function, and
``check_quasi_mist`` assembles the certified leaf-wise upper bound that the
regularity decomposition yields for quasirandom functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad
from scipy.special import ndtri

from .boolfn import PM_ONE, ZERO_ONE, BooleanFunction, wht
from .dtree import leaves
from .errors import PreconditionError
from .noise import INFLUENCE_SLACK, expansion_influences, stability
from .quasirandom import is_quasirandom
from .regularity import RegularityParams, decompose

DEFAULT_QUAD_TOL = 1e-9

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _std_cdf(t: float) -> float:
    return 0.5 * math.erfc(-t / _SQRT2)


def _std_pdf(t: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * t * t)


def gaussian_quantile(mu: float) -> float:
    """t with Phi(t) = mu to absolute error 1e-10; mu of 0 or 1 gives -/+inf.

    Newton iteration on the erfc-based CDF, seeded by the library inverse.
    """
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    if mu == 0.0:
        return -math.inf
    if mu == 1.0:
        return math.inf
    t = float(ndtri(mu))
    for _ in range(4):
        err = _std_cdf(t) - mu
        if abs(err) <= 1e-13:
            break
        density = _std_pdf(t)
        if density < 1e-300:
            break  # tail so extreme that Phi is locally flat in doubles
        t -= err / density
    if abs(_std_cdf(t) - mu) > 1e-10:
        t = _bisect_quantile(mu)
    return t


def _bisect_quantile(mu: float) -> float:
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _std_cdf(mid) < mu:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def quadrant_prob(rho: float, mu: float, tol: float = DEFAULT_QUAD_TOL) -> float:
    """Lambda_rho(mu) by adaptive quadrature, absolute error at most ``tol``.

    rho = 1 is handled as the limit (both Gaussians coincide, answer mu);
    rho = 0 factors into mu^2 but still runs through the quadrature path.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    if mu in (0.0, 1.0):
        return float(mu)
    if rho == 1.0:
        return float(mu)
    t = gaussian_quantile(mu)
    denom = math.sqrt(1.0 - rho * rho)

    def integrand(z: float) -> float:
        return _std_cdf((t - rho * z) / denom) * _std_pdf(z)

    value, estimate = quad(integrand, -math.inf, t, epsabs=tol * 1e-2, epsrel=0.0, limit=400)
    if estimate > tol:
        raise RuntimeError(f"quadrature error estimate {estimate} exceeds tolerance {tol}")
    return float(value)


def to_zero_one(f: BooleanFunction) -> BooleanFunction:
    """Map a {-1,+1}-valued function to [0,1] via g = (1 - f)/2.

    +1 maps to 0 and -1 maps to 1, aligning the function's accepting mass
    with the left-tail convention of the quadrant probability.
    """
    if f.range_tag != PM_ONE:
        raise PreconditionError(f"to_zero_one needs a pm_one-tagged function, got {f.range_tag}")
    return BooleanFunction(f.n, (1.0 - f.values) / 2.0, ZERO_ONE)


@dataclass
class MistReport:
    """Stability against the quadrant bound for one function.

    ``slack`` is stab - lambda, reported without a pass/fail judgment (the
    additive error term of the underlying inequality carries an unspecified
    constant).  Pipeline runs additionally fill the certified bound, its
    additive term breakdown, and the quasirandomness hypothesis outcome.
    """

    rho: float
    mean: float
    stab: float
    lam: float
    slack: float
    bad_mass: float | None = None
    params_used: dict | None = None
    certified_bound: float | None = None
    quasirandom_ok: bool | None = None
    witness: dict | None = None
    terms: dict | None = None
    drift_ok: bool | None = None

    def to_dict(self) -> dict:
        out = {
            "rho": self.rho,
            "mean": self.mean,
            "stab": self.stab,
            "lambda": self.lam,
            "slack": self.slack,
        }
        for key in ("bad_mass", "params_used", "certified_bound",
                    "quasirandom_ok", "witness", "terms", "drift_ok"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


def mist_slack(g: BooleanFunction, rho: float, tol: float = DEFAULT_QUAD_TOL) -> MistReport:
    """Exact Fourier stability minus the quadrant probability of the mean."""
    if g.range_tag != ZERO_ONE:
        raise PreconditionError(f"mist_slack needs a zero_one-tagged function, got {g.range_tag}")
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    ghat = wht(g)
    mu = float(ghat.coeffs[0])
    stab = stability(ghat, rho)
    lam = quadrant_prob(rho, mu, tol)
    return MistReport(rho=rho, mean=mu, stab=stab, lam=lam, slack=stab - lam)


def check_quasi_mist(f: BooleanFunction, rho: float, p: RegularityParams,
                     q_eps: float, q_delta: float,
                     tol: float = DEFAULT_QUAD_TOL) -> MistReport:
    """Regularity-plus-quadrant pipeline for a [0,1]-valued function.

    Verifies the quasirandomness hypothesis at (q_eps, q_delta) first; on
    failure the report flags it and skips the decomposition.  Otherwise the
    function is decomposed, each leaf's stability is bounded through the
    quadrant probability of the global mean (bad leaves by 1, good leaves
    with a 2-Lipschitz mean-drift correction plus their own measured
    slack), and the certified upper bound is returned next to the true
    stability.  Every additive term is reported separately.
    """
    if f.range_tag != ZERO_ONE:
        raise PreconditionError(f"check_quasi_mist needs a zero_one-tagged function, got {f.range_tag}")
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    ghat = wht(f)
    mu = float(ghat.coeffs[0])
    stab = stability(ghat, rho)
    lam = quadrant_prob(rho, mu, tol)
    params_used = {"eps": p.eps, "delta": p.delta, "gamma": p.gamma,
                   "q_eps": q_eps, "q_delta": q_delta}
    verdict = is_quasirandom(ghat, q_eps, q_delta)
    if not verdict.ok:
        witness = {
            "vars": [i + 1 for i in range(f.n) if (verdict.witness_mask >> i) & 1],
            "value": verdict.witness_value,
        }
        return MistReport(rho=rho, mean=mu, stab=stab, lam=lam, slack=stab - lam,
                          params_used=params_used, quasirandom_ok=False, witness=witness)

    result = decompose(f, p)
    bad_term = 0.0
    good_lambda_term = 0.0
    lipschitz_term = 0.0
    leaf_slack_term = 0.0
    drift_ok = True
    for leaf, depth in leaves(result.tree):
        mass = 2.0 ** -depth
        leaf_hat = wht(leaf.fn)
        leaf_mean = float(leaf_hat.coeffs[0])
        drift = abs(leaf_mean - mu)
        if drift > 2.0 ** depth * q_eps + 1e-12:
            drift_ok = False
        influences = expansion_influences(leaf_hat, p.delta)
        if float(influences.max()) > p.eps + INFLUENCE_SLACK:
            bad_term += mass  # stability of a [0,1]-valued leaf is at most 1
            continue
        leaf_stab = stability(leaf_hat, rho)
        leaf_lam = quadrant_prob(rho, leaf_mean, tol)
        good_lambda_term += mass * lam
        lipschitz_term += mass * 2.0 * drift
        leaf_slack_term += mass * (leaf_stab - leaf_lam)
    certified = bad_term + good_lambda_term + lipschitz_term + leaf_slack_term
    return MistReport(
        rho=rho, mean=mu, stab=stab, lam=lam, slack=stab - lam,
        bad_mass=result.bad_mass, params_used=params_used,
        certified_bound=certified, quasirandom_ok=True,
        terms={
            "bad_leaves": bad_term,
            "good_leaves_lambda": good_lambda_term,
            "lipschitz_drift": lipschitz_term,
            "good_leaves_slack": leaf_slack_term,
        },
        drift_ok=drift_ok,
    )


@dataclass(frozen=True)
class ParamSchedule:
    """Parameter schedule under which the quasirandom stability bound holds.

    ``height_budget`` equals the regularity params' iteration budget; the
    quasirandomness pair shrinks fast enough that restriction means stay
    within eps of the global mean across the whole tree.
    """

    q_eps: float
    q_delta: float
    params: RegularityParams
    height_budget: float
    underflow: bool


def asymptotic_params(eps: float) -> ParamSchedule:
    """Evaluate the exact asymptotic schedule at a concrete eps.

    Requires 0 < eps < e^-2 so both iterated logarithms are positive.  The
    quasirandomness threshold eps * 2^-height underflows to zero well
    before eps reaches practical magnitudes; the flag reports it rather
    than hiding it.
    """
    if not 0.0 < eps < math.exp(-2.0):
        raise ValueError(f"eps must lie in (0, e^-2), got {eps}")
    log_inv = math.log(1.0 / eps)
    loglog_inv = math.log(log_inv)
    height = log_inv ** 2 / (eps * loglog_inv)
    gamma = loglog_inv / log_inv
    delta = 1.0 / log_inv
    q_delta = eps * loglog_inv / log_inv ** 2
    q_eps = eps * 2.0 ** -height
    underflow = q_eps == 0.0 or q_delta == 0.0
    return ParamSchedule(
        q_eps=q_eps,
        q_delta=q_delta,
        params=RegularityParams(eps=eps, delta=delta, gamma=gamma),
        height_budget=height,
        underflow=underflow,
    )
