"""Least-squares fitting of frequency responses by filter families.

Polynomials are fit in the Chebyshev basis on Chebyshev nodes (plain
least squares); rationals by the linearized reweighting iteration
(minimize ||P - y*Q|| / |Q_prev| with the denominator bias fixed at 1),
followed by a residual-reweighting refinement that walks the solution
toward the minimax one while keeping the best pole-free iterate seen.

Discontinuous step targets carry a transition band around the jump.
Band points are excluded from the fitting grid and from the reported
error measures, the usual passband/stopband convention: no continuous
function can approach a jump in the sup norm, so errors are measured
where approximation is actually possible. Reported metrics come from the
Chebyshev form of the fit (stable at high degree); the returned filter
coefficients are the equivalent plain-power form in the filter variable
a = 1 - lambda.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial, chebyshev

from .errors import IllConditioned, InvalidParam, PoleInDomain
from .filters import FilterSpec, polynomial_filter, rational_filter
from .operators import Scheme
from .spectral import frequency_response

DENSE_EVAL_POINTS = 1024
DEFAULT_GRID_SIZE = 512
CONDITION_LIMIT = 1e12
SK_MAX_ITERATIONS = 50
SK_STAGNATION = 1e-8
REFINE_ITERATIONS = 400


@dataclass(frozen=True)
class StepTarget:
    """A jump response: ``high`` below the threshold, ``low`` at and above it.

    ``transition`` is the half-width of the band around the threshold that
    is excluded from fitting and from error measurement.
    """

    threshold: float = 1.0
    high: float = 1.0
    low: float = 0.0
    domain: tuple = (0.0, 2.0)
    transition: float = 0.045

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi:
            raise InvalidParam("domain must satisfy lo < hi")
        if not lo < self.threshold < hi:
            raise InvalidParam("step threshold must lie strictly inside the domain")
        if self.transition < 0:
            raise InvalidParam("transition half-width must be nonnegative")

    def evaluate(self, lam):
        lam = np.asarray(lam, dtype=np.float64)
        return np.where(lam < self.threshold, self.high, self.low)

    def fit_mask(self, lam):
        return np.abs(np.asarray(lam) - self.threshold) >= self.transition


@dataclass(frozen=True)
class SampledTarget:
    """A target given by samples, evaluated by linear interpolation."""

    grid: tuple
    values: tuple

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64)
        if len(grid) < 2 or not np.all(np.diff(grid) > 0):
            raise InvalidParam("sample grid must be strictly increasing, length >= 2")
        if len(grid) != len(self.values):
            raise InvalidParam("grid and values must have equal length")
        object.__setattr__(self, "grid", tuple(float(x) for x in grid))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def domain(self):
        return (self.grid[0], self.grid[-1])

    def evaluate(self, lam):
        return np.interp(np.asarray(lam, dtype=np.float64), self.grid, self.values)

    def fit_mask(self, lam):
        return np.ones(np.asarray(lam).shape, dtype=bool)


@dataclass(frozen=True)
class ResponseTarget:
    """The closed-form response of an existing filter as a fit target."""

    spec: FilterSpec
    domain: tuple = (0.0, 2.0)

    def evaluate(self, lam):
        return frequency_response(self.spec, np.asarray(lam, dtype=np.float64)).values

    def fit_mask(self, lam):
        return np.ones(np.asarray(lam).shape, dtype=bool)


@dataclass(frozen=True)
class FitResult:
    """A fitted filter plus its error report.

    max_error and rms_error are sup / root-mean-square deviations on a
    dense evaluation grid (1024 points, transition band excluded);
    max_error_full is the sup over the whole domain including any band.
    ``evaluate`` uses the stable Chebyshev form of the fit.
    """

    coeffs: FilterSpec
    max_error: float
    rms_error: float
    iterations_used: int
    max_error_full: float = field(compare=False, default=0.0)
    cheb_num: tuple = field(repr=False, compare=False, default=())
    cheb_den: tuple = field(repr=False, compare=False, default=(1.0,))
    domain: tuple = field(repr=False, compare=False, default=(0.0, 2.0))

    def evaluate(self, lam):
        """Fitted response at ``lam`` from the Chebyshev representation."""
        t = _to_unit(np.asarray(lam, dtype=np.float64), self.domain)
        num = chebyshev.chebval(t, np.asarray(self.cheb_num))
        den = chebyshev.chebval(t, np.asarray(self.cheb_den))
        return num / den


@dataclass(frozen=True)
class ConvergenceStudy:
    """Error-versus-degree table with a fitted rate."""

    family: str
    degrees: tuple
    max_errors: tuple
    rms_errors: tuple
    slope: float
    descriptor: str


def _to_unit(lam, domain):
    lo, hi = domain
    return 2.0 * (lam - lo) / (hi - lo) - 1.0


def _cheb_nodes(m):
    k = np.arange(m)
    return np.sort(np.cos(np.pi * (2 * k + 1) / (2 * m)))


def _grids(target, grid_size):
    """Fit nodes (masked), plus masked and full dense evaluation grids."""
    lo, hi = target.domain
    lam_fit = (_cheb_nodes(grid_size) + 1.0) / 2.0 * (hi - lo) + lo
    lam_fit = lam_fit[target.fit_mask(lam_fit)]
    lam_dense = np.linspace(lo, hi, DENSE_EVAL_POINTS)
    dense_mask = target.fit_mask(lam_dense)
    return lam_fit, lam_dense, dense_mask


def _monomial_in_a(coef_t, domain):
    """Rewrite a monomial-in-t polynomial in the variable a = 1 - lambda."""
    lo, hi = domain
    t_of_a = Polynomial([2.0 * (1.0 - lo) / (hi - lo) - 1.0, -2.0 / (hi - lo)])
    return Polynomial(coef_t)(t_of_a).coef


def fit_polynomial(
    target,
    K: int,
    grid_size: int = DEFAULT_GRID_SIZE,
    basis: Scheme = Scheme.ADJ_SYM,
) -> FitResult:
    """Degree-K least-squares polynomial fit of a target response."""
    if K < 0:
        raise InvalidParam("polynomial degree must be nonnegative")
    if grid_size < K + 1:
        raise InvalidParam("grid_size must be at least K + 1")
    lam_fit, lam_dense, dense_mask = _grids(target, grid_size)
    if len(lam_fit) < K + 1:
        raise InvalidParam("too few fit nodes outside the transition band")

    t_fit = _to_unit(lam_fit, target.domain)
    y = target.evaluate(lam_fit)
    V = chebyshev.chebvander(t_fit, K)
    coef, _, _, sv = np.linalg.lstsq(V, y, rcond=None)
    if sv[0] > CONDITION_LIMIT * max(sv[-1], np.finfo(float).tiny):
        raise IllConditioned(f"design matrix condition exceeds {CONDITION_LIMIT:.0e}")

    t_dense = _to_unit(lam_dense, target.domain)
    res = np.abs(chebyshev.chebval(t_dense, coef) - target.evaluate(lam_dense))
    mono_a = _monomial_in_a(chebyshev.cheb2poly(coef), target.domain)
    return FitResult(
        coeffs=polynomial_filter(mono_a, basis),
        max_error=float(res[dense_mask].max()),
        rms_error=float(np.sqrt(np.mean(res[dense_mask] ** 2))),
        iterations_used=1,
        max_error_full=float(res.max()),
        cheb_num=tuple(coef),
        cheb_den=(1.0,),
        domain=tuple(target.domain),
    )


def fit_rational(
    target,
    num_degree: int,
    den_degree: int,
    grid_size: int = DEFAULT_GRID_SIZE,
    basis: Scheme = Scheme.ADJ_SYM,
    refine_iterations: int = REFINE_ITERATIONS,
) -> FitResult:
    """Rational fit P/Q of a target response, denominator bias fixed at 1.

    Runs the linearized reweighting iteration to stagnation, then the
    residual-reweighting refinement, and returns the best pole-free
    iterate measured on the dense evaluation grid.
    """
    k, n = num_degree, den_degree
    if k < 0 or n < 1:
        raise InvalidParam("need num_degree >= 0 and den_degree >= 1")
    if grid_size < k + n + 1:
        raise InvalidParam("grid_size must be at least num_degree + den_degree + 1")
    lam_fit, lam_dense, dense_mask = _grids(target, grid_size)
    if len(lam_fit) < k + n + 1:
        raise InvalidParam("too few fit nodes outside the transition band")

    t_fit = _to_unit(lam_fit, target.domain)
    y = target.evaluate(lam_fit)
    t_dense = _to_unit(lam_dense, target.domain)
    y_dense = target.evaluate(lam_dense)
    Vp = chebyshev.chebvander(t_fit, k)
    Vq = chebyshev.chebvander(t_fit, n)[:, 1:]
    Vq_dense = chebyshev.chebvander(t_dense, n)[:, 1:]

    def solve(weights):
        A = np.hstack([Vp, -y[:, None] * Vq]) * weights[:, None]
        sol, _, _, sv = np.linalg.lstsq(A, y * weights, rcond=None)
        return sol[: k + 1], sol[k + 1 :], sv

    def dense_error(p, q):
        den = 1.0 + Vq_dense @ q
        if np.any(np.abs(den) < 1e-12) or np.any(den > 0) != np.all(den > 0):
            return np.inf  # pole (or sign change) inside the domain
        res = np.abs(chebyshev.chebval(t_dense, p) / den - y_dense)
        return float(res[dense_mask].max())

    best_err, best_p, best_q = np.inf, None, None

    def consider(p, q):
        nonlocal best_err, best_p, best_q
        e = dense_error(p, q)
        if e < best_err:
            best_err, best_p, best_q = e, p.copy(), q.copy()

    iterations = 0
    q_prev = np.ones_like(t_fit)
    for it in range(SK_MAX_ITERATIONS):
        p, q, sv = solve(1.0 / np.maximum(np.abs(q_prev), 1e-10))
        if it == 0 and sv[0] > CONDITION_LIMIT * max(sv[-1], np.finfo(float).tiny):
            raise IllConditioned(f"design matrix condition exceeds {CONDITION_LIMIT:.0e}")
        iterations += 1
        consider(p, q)
        q_new = 1.0 + Vq @ q
        if np.max(np.abs(q_new - q_prev)) <= SK_STAGNATION * np.max(np.abs(q_new)):
            q_prev = q_new
            break
        q_prev = q_new

    weights_l = np.ones_like(t_fit)
    for _ in range(refine_iterations):
        p, q, _ = solve(np.sqrt(weights_l) / np.maximum(np.abs(q_prev), 1e-10))
        iterations += 1
        consider(p, q)
        den = 1.0 + Vq @ q
        den = np.where(np.abs(den) < 1e-12, 1e-12, den)
        res = np.abs(chebyshev.chebval(t_fit, p) / den - y)
        weights_l = weights_l * (res + 1e-12)
        weights_l = weights_l / weights_l.sum()
        q_prev = den

    if best_p is None:
        raise PoleInDomain("every iterate had a denominator root inside the domain")

    den_dense = 1.0 + Vq_dense @ best_q
    res = np.abs(chebyshev.chebval(t_dense, best_p) / den_dense - y_dense)

    # convert to plain powers of a = 1 - lambda and renormalize the bias to 1
    num_a = _monomial_in_a(chebyshev.cheb2poly(best_p), target.domain)
    den_a = _monomial_in_a(
        chebyshev.cheb2poly(np.concatenate([[1.0], best_q])), target.domain
    )
    if abs(den_a[0]) < 1e-12:
        raise PoleInDomain("denominator vanishes at a = 0; cannot normalize the bias")
    num_a = num_a / den_a[0]
    den_a = den_a / den_a[0]
    return FitResult(
        coeffs=rational_filter(num_a, den_a[1:], basis),
        max_error=float(res[dense_mask].max()),
        rms_error=float(np.sqrt(np.mean(res[dense_mask] ** 2))),
        iterations_used=iterations,
        max_error_full=float(res.max()),
        cheb_num=tuple(best_p),
        cheb_den=tuple(np.concatenate([[1.0], best_q])),
        domain=tuple(target.domain),
    )


def convergence_study(
    target, family: str, degrees, grid_size: int = DEFAULT_GRID_SIZE
) -> ConvergenceStudy:
    """Fit a target at several degrees and fit a convergence rate.

    Polynomial errors are rated by the log-log slope against degree;
    rational errors (num_degree = den_degree = K) by the slope of
    log(error) against sqrt(K).
    """
    degrees = [int(d) for d in degrees]
    if len(degrees) < 2 or any(b <= a for a, b in zip(degrees, degrees[1:])):
        raise InvalidParam("degrees must be ascending with at least two entries")
    if degrees[0] < 1:
        raise InvalidParam("study degrees must be positive")
    if family not in ("polynomial", "rational"):
        raise InvalidParam("family must be 'polynomial' or 'rational'")

    max_errors, rms_errors = [], []
    for K in degrees:
        if family == "polynomial":
            fit = fit_polynomial(target, K, grid_size=grid_size)
        else:
            fit = fit_rational(target, K, K, grid_size=grid_size)
        max_errors.append(fit.max_error)
        rms_errors.append(fit.rms_error)

    logs = np.log(np.maximum(max_errors, 1e-16))
    if family == "polynomial":
        slope = float(np.polyfit(np.log(degrees), logs, 1)[0])
        descriptor = f"max_error ~ K^({slope:.3f})"
    else:
        slope = float(np.polyfit(np.sqrt(degrees), logs, 1)[0])
        descriptor = f"log max_error ~ {slope:.3f} * sqrt(K)"
    return ConvergenceStudy(
        family=family,
        degrees=tuple(degrees),
        max_errors=tuple(max_errors),
        rms_errors=tuple(rms_errors),
        slope=slope,
        descriptor=descriptor,
    )
