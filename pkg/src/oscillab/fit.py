"""Leading-exponent extraction from sampled oscillatory integrals.

The model is |I(tau)| ~ |C| tau^alpha (log tau)^k.  Fitting is two-stage:
an ordinary least-squares line in log-log space for alpha, then a refit with
the log-log-log regressor for each candidate k with a parsimony penalty.
Estimates carry a noise floor from the quadrature error estimates and a
stability check across the two halves of the tau window; they are measured
quantities, never claims.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .bump import CutoffFunction, TestFunction
from .poly import Polynomial
from .polytope import (
    build_polytope,
    is_convenient,
    newton_polytope,
    pair_distance_and_radii,
)
from .quad import OscillatorySample, eval_oscillatory

__all__ = [
    "AsymptoticTerm",
    "ExponentEstimate",
    "geometric_grid",
    "local_slopes",
    "schedule_and_slope",
    "fit_leading",
    "deflate",
    "coefficient_at",
    "check_theorem2",
    "cutoff_independence_check",
    "BoundReport",
    "DecayReport",
    "CoefficientVerdict",
]


@dataclass(frozen=True)
class AsymptoticTerm:
    alpha: float
    k: int
    coeff: complex
    coeff_err: float = 0.0

    def __post_init__(self):
        if self.alpha >= 0:
            raise ValueError("expansion exponents are negative")
        if self.k < 0:
            raise ValueError("log power must be nonnegative")


@dataclass(frozen=True)
class ExponentEstimate:
    alpha_hat: float
    k_hat: int
    coeff_hat: complex
    residual: float
    noise_floor: float
    converged: bool
    window: Tuple[float, float]
    all_below_noise: bool = False

    def to_json_dict(self) -> dict:
        return {
            "alpha_hat": self.alpha_hat,
            "k_hat": self.k_hat,
            "coeff_hat": [self.coeff_hat.real, self.coeff_hat.imag],
            "residual": self.residual,
            "noise_floor": self.noise_floor,
            "converged": self.converged,
            "window": [self.window[0], self.window[1]],
            "all_below_noise": self.all_below_noise,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def geometric_grid(tau_min: float, tau_max: float, count: int) -> np.ndarray:
    if not (1 <= tau_min < tau_max):
        raise ValueError("require 1 <= tau_min < tau_max")
    if count < 8:
        raise ValueError("need at least 8 grid points")
    return np.geomspace(tau_min, tau_max, count)


def local_slopes(taus: Sequence[float], values: Sequence[complex]):
    """Centered-difference slopes of log|I| against log tau; NaN where |I| = 0."""
    taus = np.asarray(taus, dtype=float)
    mags = np.abs(np.asarray(values))
    logt = np.log(taus)
    out = np.full(len(taus), np.nan)
    with np.errstate(divide="ignore"):
        logm = np.log(mags)
    for j in range(1, len(taus) - 1):
        if np.isfinite(logm[j - 1]) and np.isfinite(logm[j + 1]):
            out[j] = (logm[j + 1] - logm[j - 1]) / (logt[j + 1] - logt[j - 1])
    return out


def schedule_and_slope(tau_min: float, tau_max: float, count: int, values=None):
    """Geometric tau grid, plus local slopes when sample values are supplied."""
    grid = geometric_grid(tau_min, tau_max, count)
    if values is None:
        return grid, None
    return grid, local_slopes(grid, values)


def _usable(samples: Sequence[OscillatorySample]):
    taus = np.array([s.tau for s in samples], dtype=float)
    vals = np.array([s.value for s in samples], dtype=complex)
    errs = np.array([s.error_estimate for s in samples], dtype=float)
    order = np.argsort(taus)
    return taus[order], vals[order], errs[order]


def _lsq_alpha(logt: np.ndarray, logm: np.ndarray, loglog: Optional[np.ndarray]):
    cols = [np.ones_like(logt), logt]
    if loglog is not None:
        cols.append(loglog)
    A = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(A, logm, rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - logm) ** 2)))
    return coef, resid


def fit_leading(
    samples: Sequence[OscillatorySample],
    n_ambient: int = 2,
    stability_tol: float = 0.1,
    residual_threshold: float = 0.05,
) -> ExponentEstimate:
    """Fit alpha, k and the complex leading coefficient from sampled I(tau)."""
    taus, vals, errs = _usable(samples)
    mags = np.abs(vals)
    keep = mags > 3 * errs
    if np.count_nonzero(keep) < 8:
        return ExponentEstimate(
            alpha_hat=float("nan"), k_hat=0, coeff_hat=0j,
            residual=float("inf"),
            noise_floor=float(np.max(errs, initial=0.0)),
            converged=False,
            window=(float(taus[0]), float(taus[-1])) if len(taus) else (0.0, 0.0),
            all_below_noise=True,
        )
    taus, vals, errs, mags = taus[keep], vals[keep], errs[keep], mags[keep]
    logt, logm = np.log(taus), np.log(mags)
    loglog = np.log(logt)
    rel_noise = float(np.median(errs / mags))

    fits = {}
    coef0, res0 = _lsq_alpha(logt, logm, None)
    fits[0] = (coef0[1], coef0[0], res0)
    best_k, best_res = 0, res0
    penalty = 2 * rel_noise
    for k in range(1, max(1, n_ambient)):
        cols = np.column_stack([np.ones_like(logt), logt, k * loglog])
        coef, *_ = np.linalg.lstsq(cols[:, :2], logm - k * loglog, rcond=None)
        resid = float(np.sqrt(np.mean((coef[0] + coef[1] * logt + k * loglog - logm) ** 2)))
        fits[k] = (coef[1], coef[0], resid)
        if resid + penalty < best_res:
            best_k, best_res = k, resid
    alpha, logc, resid = fits[best_k]

    # stability across the two halves of the grid
    half = len(taus) // 2
    ah_lo = _lsq_alpha(logt[:half], logm[:half] - best_k * loglog[:half], None)[0][1]
    ah_hi = _lsq_alpha(logt[half:], logm[half:] - best_k * loglog[half:], None)[0][1]
    stable = abs(ah_lo - ah_hi) < stability_tol

    model = taus**alpha * np.log(taus) ** best_k
    coeff = complex(np.mean(vals / model))
    converged = bool(stable and resid < residual_threshold)
    return ExponentEstimate(
        alpha_hat=float(alpha), k_hat=int(best_k), coeff_hat=coeff,
        residual=resid, noise_floor=rel_noise, converged=converged,
        window=(float(taus[0]), float(taus[-1])),
    )


def deflate(samples: Sequence[OscillatorySample], term: AsymptoticTerm) -> List[OscillatorySample]:
    """Subtract C tau^alpha (log tau)^k from every sample, propagating errors."""
    out = []
    for s in samples:
        model = s.tau**term.alpha * np.log(s.tau) ** term.k
        out.append(
            OscillatorySample(
                tau=s.tau,
                value=s.value - term.coeff * model,
                error_estimate=s.error_estimate + term.coeff_err * abs(model),
                converged=s.converged,
            )
        )
    return out


@dataclass(frozen=True)
class CoefficientVerdict:
    alpha: float
    k: int
    coeff: complex
    spread: float
    trend: float              # |last - first| of the scaled series (drift)
    noise: float
    consistent_with_zero: bool

    @property
    def classification(self) -> str:
        """'zero', 'nonzero', or 'indeterminate' (drifting scaled series)."""
        if self.consistent_with_zero:
            return "zero"
        if self.trend > 0.25 * abs(self.coeff):
            return "indeterminate"
        return "nonzero"

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "k": self.k,
            "coeff": [self.coeff.real, self.coeff.imag],
            "spread": self.spread,
            "trend": self.trend,
            "noise": self.noise,
            "consistent_with_zero": self.consistent_with_zero,
            "classification": self.classification,
        }


def coefficient_at(samples: Sequence[OscillatorySample], alpha: float, k: int = 0) -> CoefficientVerdict:
    """Estimate C_{alpha,k} over the top decade and test zero-consistency.

    The scaled series I(tau) tau^{-alpha} (log tau)^{-k} should be constant
    when the probed term is leading; its drift (trend) enters the
    zero-consistency threshold and flags mis-probed log powers.
    """
    taus, vals, errs = _usable(samples)
    if len(taus) < 2:
        raise ValueError("need at least two samples")
    top = taus >= taus[-1] / 10.0
    taus, vals, errs = taus[top], vals[top], errs[top]
    model = taus**alpha * np.log(taus) ** k
    scaled = vals / model
    coeff = complex(np.mean(scaled))
    spread = float(np.std(scaled))
    trend = float(abs(scaled[-1] - scaled[0]))
    noise = float(np.mean(errs / np.abs(model)))
    consistent = abs(coeff) < 3 * (noise + trend)
    return CoefficientVerdict(
        alpha=float(alpha), k=int(k), coeff=coeff,
        spread=spread, trend=trend, noise=noise,
        consistent_with_zero=bool(consistent),
    )


@dataclass(frozen=True)
class BoundReport:
    alpha_hat: float
    bound_pair_distance: Fraction      # -1/d(f, phi)
    bound_radii: Fraction              # -(r' + n)/r
    d_pair: Fraction
    r: Fraction
    r_prime: Fraction
    slack: float
    passed: Optional[bool]             # None = indeterminate (unconverged fit)

    def to_json_dict(self) -> dict:
        return {
            "alpha_hat": self.alpha_hat,
            "bound_pair_distance": str(self.bound_pair_distance),
            "bound_radii": str(self.bound_radii),
            "d_pair": str(self.d_pair),
            "r": str(self.r),
            "r_prime": str(self.r_prime),
            "slack": self.slack,
            "passed": self.passed,
        }


def amplitude_polytope(phi: TestFunction):
    """Newton polytope of x^nu * bump: the bump is 1 near 0, so it is nu + orthant."""
    return build_polytope([phi.nu])


def check_theorem2(
    f: Polynomial,
    phi: TestFunction,
    samples: Sequence[OscillatorySample],
    tolerance: float = 0.05,
) -> BoundReport:
    """Compare a fitted exponent against the exact pair-distance bound."""
    pf = newton_polytope(f)
    ok, _ = is_convenient(pf)
    if not ok:
        raise ValueError("the bound requires a convenient phase")
    d_pair, r, rp = pair_distance_and_radii(pf, amplitude_polytope(phi))
    bound1 = -1 / d_pair
    bound2 = -Fraction(rp + f.n, 1) / r
    est = fit_leading(samples, n_ambient=f.n)
    if not est.converged or not np.isfinite(est.alpha_hat):
        return BoundReport(
            alpha_hat=est.alpha_hat, bound_pair_distance=bound1, bound_radii=bound2,
            d_pair=d_pair, r=r, r_prime=rp, slack=float("nan"), passed=None,
        )
    slack = float(bound1) - est.alpha_hat
    return BoundReport(
        alpha_hat=est.alpha_hat, bound_pair_distance=bound1, bound_radii=bound2,
        d_pair=d_pair, r=r, r_prime=rp, slack=slack,
        passed=bool(est.alpha_hat <= float(bound1) + tolerance),
    )


@dataclass(frozen=True)
class DecayReport:
    slope: float
    threshold: float
    passed: bool
    vacuous: bool
    usable_points: int

    def to_json_dict(self) -> dict:
        return {
            "slope": self.slope,
            "threshold": self.threshold,
            "passed": self.passed,
            "vacuous": self.vacuous,
            "usable_points": self.usable_points,
        }


def cutoff_independence_check(
    f: Polynomial,
    nu: Sequence[int],
    cutoff1: CutoffFunction,
    cutoff2: CutoffFunction,
    taus: Sequence[float],
    quad_tol: float = 1e-12,
    threshold: float = -2.0,
) -> DecayReport:
    """Decay slope of |I(tau, x^nu chi1) - I(tau, x^nu chi2)|.

    The difference amplitude has empty Taylor expansion at 0, so its
    expansion decays super-polynomially; the measured log-log slope over the
    samples above the noise floor should be well below the leading exponent.
    """
    phi1 = TestFunction(nu=tuple(nu), cutoff=cutoff1, shape="product")
    phi2 = TestFunction(nu=tuple(nu), cutoff=cutoff2, shape="product")
    diffs, errs = [], []
    for tau in taus:
        s1 = eval_oscillatory(f, phi1, tau, tol=quad_tol)
        s2 = eval_oscillatory(f, phi2, tau, tol=quad_tol)
        diffs.append(s1.value - s2.value)
        errs.append(s1.error_estimate + s2.error_estimate)
    taus = np.asarray(list(taus), dtype=float)
    mags = np.abs(np.asarray(diffs))
    errs = np.asarray(errs)
    keep = mags > 3 * errs
    if np.count_nonzero(keep) < 3:
        return DecayReport(slope=float("-inf"), threshold=threshold,
                           passed=True, vacuous=True, usable_points=int(np.count_nonzero(keep)))
    logt = np.log(taus[keep])
    logm = np.log(mags[keep])
    slope = float(np.polyfit(logt, logm, 1)[0])
    return DecayReport(slope=slope, threshold=threshold,
                       passed=bool(slope <= threshold), vacuous=False,
                       usable_points=int(np.count_nonzero(keep)))
