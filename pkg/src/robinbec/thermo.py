"""Finite-L and large-L thermodynamics of the wall-coupled box gas.

For a target density rho the chemical potential mu_L solves

    rho = (1/L) * sum_k occ_k(mu_L),

with mode occupations given by one of two models:

  free            occ_k = 1/(e^{beta (eps_k - mu)} - 1) for every k;
  mean_field_scf  wall modes (k = 0, 1) keep the free law, which is exact
                  for the quadratic Ntil coupling since it omits them;
                  modes k >= 2 take the self-consistent shift
                  occ_k = 1/(e^{beta (eps_k - mu + lam*rt)} - 1) with
                  rt = (1/L) sum_{k>=2} occ_k solved as a fixed point
                  (unique: the map is strictly decreasing in rt).

The k-sum is cut at k_max with a certified Gaussian-tail bound using the
lower bracket eps_k > ((k-1) pi / L)^2.  Total density is strictly
increasing in mu on (-inf, eps(0)), so the outer solve is a bisection.

Condensation diagnostics:

  * critical_density: rho_c = (1/pi) * int_0^inf dk 1/(e^{beta (k^2 +
    sigma^2)} - 1), by adaptive quadrature, with an independent series
    route rho_c = sum_{n>=1} e^{-n beta sigma^2} / (2 sqrt(pi n beta))
    from expanding the integrand in Boltzmann factors.
  * condensate_lower_bound: max(0, rho - rho_c), the large-L floor on the
    wall-mode density (occ_0 + occ_1)/L in the condensing regime.
  * equal_distribution_gap: (occ_0 - occ_1)/L, evaluated through the
    near-degenerate splitting eps(1) - eps(0) so it stays accurate long
    after direct subtraction of double-precision occupations has
    underflowed into noise.
  * mu_asymptotics_check: fits (mu_L + sigma^2) * L along an L-sweep and
    compares the limit against -2/(beta * rho_cond).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import NumericalFailure, ValidationError
from .spectrum import BoxParams, SpectrumTable, bound_state_gap, build_spectrum

FREE = "free"
MEAN_FIELD_SCF = "mean_field_scf"
_MODELS = (FREE, MEAN_FIELD_SCF)


class SigmaZero(ValidationError):
    """The critical-density integral diverges at sigma = 0."""


class CutoffTooSmall(ValidationError):
    """Certified k_max tail exceeds the requested cutoff tolerance."""


class NotCondensing(ValidationError):
    """Diagnostic needs rho > rho_c."""


@dataclass(frozen=True)
class ThermoInput:
    """Physical point (box, beta, rho, lam) plus mode-sum controls."""

    box: BoxParams
    beta: float
    rho: float
    lam: float
    k_max: int
    cutoff_tol: float = 1e-10

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise ValidationError(f"beta must be finite and > 0, got {self.beta}")
        if not (math.isfinite(self.rho) and self.rho > 0.0):
            raise ValidationError(f"rho must be finite and > 0, got {self.rho}")
        if not (math.isfinite(self.lam) and self.lam >= 0.0):
            raise ValidationError(f"lam must be finite and >= 0, got {self.lam}")
        if not isinstance(self.k_max, int) or self.k_max < 2:
            raise ValidationError(f"k_max must be an integer >= 2, got {self.k_max}")
        if not (0.0 < self.cutoff_tol < 1.0):
            raise ValidationError(f"cutoff_tol must be in (0, 1), got {self.cutoff_tol}")


@dataclass(frozen=True, eq=False)
class ThermoState:
    """One solved equilibrium point."""

    params: ThermoInput
    model_tag: str
    mu: float
    occ: np.ndarray
    rho_tilde: float
    rho_cond_finite: float
    epsilons: np.ndarray

    @property
    def density_residual(self) -> float:
        total = self.rho_tilde + self.rho_cond_finite
        return abs(total - self.params.rho)


# ----------------------------------------------------------------------
# critical density
# ----------------------------------------------------------------------

def _check_beta_sigma(beta, sigma):
    if not (math.isfinite(beta) and beta > 0.0):
        raise ValidationError(f"beta must be finite and > 0, got {beta}")
    if not math.isfinite(sigma):
        raise ValidationError(f"sigma must be finite, got {sigma}")
    if sigma == 0.0:
        raise SigmaZero("critical density diverges at sigma = 0")


def critical_density(beta: float, sigma: float) -> float:
    """(1/pi) * int_0^inf dk 1/(e^{beta (k^2 + sigma^2)} - 1), to ~1e-12."""
    _check_beta_sigma(beta, sigma)
    gap = sigma * sigma

    def integrand(k):
        e = math.exp(-beta * (k * k + gap))
        return e / (1.0 - e)

    val, _ = quad(integrand, 0.0, np.inf, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val / math.pi


def critical_density_series(beta: float, sigma: float, tol: float = 1e-16) -> float:
    """Same integral as a Boltzmann-factor series
    sum_{n>=1} e^{-n beta sigma^2} / (2 sqrt(pi n beta)); the independent
    cross-check route for `critical_density`."""
    _check_beta_sigma(beta, sigma)
    a = beta * sigma * sigma
    terms = []
    n = 1
    while True:
        t = math.exp(-n * a) / (2.0 * math.sqrt(math.pi * n * beta))
        terms.append(t)
        if t / math.expm1(a) < tol * math.fsum(terms):
            return math.fsum(terms)
        n += 1
        if n > 10_000_000:
            raise NumericalFailure("critical-density series did not converge")


def condensate_lower_bound(rho: float, beta: float, sigma: float) -> float:
    """max(0, rho - rho_c)."""
    if not (math.isfinite(rho) and rho > 0.0):
        raise ValidationError(f"rho must be finite and > 0, got {rho}")
    return max(0.0, rho - critical_density(beta, sigma))


# ----------------------------------------------------------------------
# certified mode-sum cutoff
# ----------------------------------------------------------------------

def certified_density_tail(box: BoxParams, beta: float, eps0: float, k_max: int) -> float:
    """Upper bound on (1/L) sum_{k > k_max} occ_k at any mu <= eps0, using
    eps_k > ((k-1) pi/L)^2 and a Gaussian integral tail."""
    L = box.L
    y_min = beta * ((k_max * math.pi / L) ** 2 - eps0)
    series = (
        math.exp(beta * eps0)
        * (L / (2.0 * math.sqrt(math.pi * beta)))
        * math.erfc((k_max - 1) * math.pi * math.sqrt(beta) / L)
    )
    return series / (1.0 - math.exp(-y_min)) / L


def suggest_k_max(box: BoxParams, beta: float, cutoff_tol: float = 1e-10) -> int:
    """Smallest comfortable k_max with certified tail below cutoff_tol."""
    eps0_floor = -((box.s / math.tanh(0.5 * box.s * box.L)) ** 2)  # below eps(0)
    k = max(4, int(box.L * math.sqrt(max(1.0, 4.0 / beta)) / math.pi))
    for _ in range(200):
        if certified_density_tail(box, beta, eps0_floor, k) < cutoff_tol:
            return k
        k = int(k * 1.3) + 4
    raise NumericalFailure("could not certify a mode-sum cutoff")


# ----------------------------------------------------------------------
# density equation
# ----------------------------------------------------------------------

def _occ_free(eps, beta, mu):
    with np.errstate(over="ignore"):  # expm1 -> inf -> occupation 0 is the right limit
        return 1.0 / np.expm1(beta * (eps - mu))

def _solve_rho_tilde(eps_exc, beta, mu, lam, L, tol=1e-12):
    """Unique fixed point of rt -> (1/L) sum bose(beta (eps_k - mu + lam rt))."""
    if lam == 0.0:
        return float(_occ_free(eps_exc, beta, mu).sum() / L)

    def excited_density(rt):
        return float(_occ_free(eps_exc, beta, mu - lam * rt).sum() / L)

    hi = excited_density(0.0)
    if hi == 0.0:
        return 0.0
    lo = 0.0
    # G(rt) = excited_density(rt) - rt is strictly decreasing; G(0) >= 0, G(hi) <= 0
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if excited_density(mid) - mid > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _occupations(eps, beta, mu, lam, L, model):
    if model == FREE:
        occ = _occ_free(eps, beta, mu)
        rho_tilde = float(occ[2:].sum() / L)
    else:
        rho_tilde = _solve_rho_tilde(eps[2:], beta, mu, lam, L)
        occ = np.empty_like(eps)
        occ[:2] = _occ_free(eps[:2], beta, mu)
        occ[2:] = _occ_free(eps[2:], beta, mu - lam * rho_tilde)
    return occ, rho_tilde


def solve_mu(inp: ThermoInput, model: str = FREE, spectrum: SpectrumTable | None = None) -> ThermoState:
    """Solve the density equation for mu_L by bisection on
    (-inf, eps(0)); total density is strictly increasing in mu there.

    Raises CutoffTooSmall if the certified k_max tail exceeds
    inp.cutoff_tol.  The returned state satisfies
    |rho_tilde + rho_cond_finite - rho| < 1e-10 * rho.
    """
    if model not in _MODELS:
        raise ValidationError(f"model must be one of {_MODELS}, got {model!r}")
    if spectrum is None:
        spectrum = build_spectrum(inp.box, inp.k_max)
    if spectrum.params != inp.box or spectrum.k_max < inp.k_max:
        raise ValidationError("spectrum table does not cover the requested input")
    eps = spectrum.epsilons[: inp.k_max + 1]
    eps0 = eps[0]
    tail = certified_density_tail(inp.box, inp.beta, eps0, inp.k_max)
    if tail > inp.cutoff_tol:
        raise CutoffTooSmall(
            f"certified k_max tail {tail:.3e} exceeds cutoff_tol {inp.cutoff_tol:.3e}"
        )

    beta, lam, L, rho = inp.beta, inp.lam, inp.box.L, inp.rho

    def density(mu):
        occ, rho_tilde = _occupations(eps, beta, mu, lam, L, model)
        return float(occ.sum() / L), occ, rho_tilde

    mu_hi = eps0 - 1e-15 * abs(eps0)
    if density(mu_hi)[0] < rho:
        raise ValidationError(
            f"target density {rho} is not reachable below eps(0); "
            "increase caps on the density or check parameters"
        )
    step = max(1.0, abs(eps0))
    mu_lo = eps0 - step
    for _ in range(200):
        if density(mu_lo)[0] < rho:
            break
        step *= 2.0
        mu_lo = eps0 - step
    else:
        raise NumericalFailure("could not bracket mu from below")

    lo, hi = mu_lo, mu_hi
    mu = 0.5 * (lo + hi)
    for _ in range(400):
        mu = 0.5 * (lo + hi)
        d = density(mu)[0]
        if abs(d - rho) <= 1e-10 * rho:
            break
        if d > rho:
            hi = mu
        else:
            lo = mu
        if hi - lo <= 2e-16 * max(abs(lo), abs(hi)):
            break
    total, occ, rho_tilde = density(mu)
    if abs(total - rho) > 1e-10 * rho:
        raise NumericalFailure(
            f"density residual {abs(total - rho):.3e} above 1e-10 * rho after bisection"
        )
    return ThermoState(
        params=inp,
        model_tag=model,
        mu=mu,
        occ=occ,
        rho_tilde=rho_tilde,
        rho_cond_finite=float((occ[0] + occ[1]) / L),
        epsilons=eps,
    )


# ----------------------------------------------------------------------
# condensation diagnostics
# ----------------------------------------------------------------------

def equal_distribution_gap(state: ThermoState) -> float:
    """(occ_0 - occ_1)/L >= 0, via the exact splitting of the wall pair.

    occ_0 - occ_1 = expm1(beta*deps) / ((1 - e^{-x0}) * expm1(x0 + beta*deps))
    with x0 = beta (eps_0 - mu) and deps = eps(1) - eps(0) computed by
    `bound_state_gap`, so no catastrophic cancellation at large L.
    """
    box = state.params.box
    beta = state.params.beta
    deps = bound_state_gap(box)
    x0 = beta * (state.epsilons[0] - state.mu)
    num = math.expm1(beta * deps)
    den = (1.0 - math.exp(-x0)) * math.expm1(x0 + beta * deps)
    if not math.isfinite(den) or den == 0.0:
        return 0.0
    return num / den / box.L


@dataclass(frozen=True, eq=False)
class MuAsymptoticsReport:
    """(mu_L + sigma^2) * L along a sweep and its extrapolated limit."""

    L_values: np.ndarray
    scaled_offsets: np.ndarray
    limit_estimate: float
    rho_cond: float
    reference: float
    rel_error: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "L": [float(v) for v in self.L_values],
            "scaled_mu_offset": [float(v) for v in self.scaled_offsets],
            "limit_estimate": self.limit_estimate,
            "rho_cond": self.rho_cond,
            "reference": self.reference,
            "rel_error": self.rel_error,
            "pass": self.passed,
        }


def mu_asymptotics_check(states, rho_cond: float | None = None, rel_tol: float = 0.05) -> MuAsymptoticsReport:
    """Fit y_L = (mu_L + sigma^2) * L against 1/L over the top half of an
    L-sweep; the intercept should approach -2/(beta * rho_cond).

    `rho_cond` defaults to the measured wall-mode density of the largest
    box.  Requires >= 5 solved states in the condensing regime.
    """
    states = sorted(states, key=lambda st: st.params.box.L)
    if len(states) < 5:
        raise ValidationError(f"need a sweep of >= 5 states, got {len(states)}")
    first = states[0].params
    for st in states:
        p = st.params
        if (p.box.sigma, p.beta, p.rho, p.lam) != (
            first.box.sigma,
            first.beta,
            first.rho,
            first.lam,
        ):
            raise ValidationError("sweep states must share (sigma, beta, rho, lam)")
    rho_c = critical_density(first.beta, first.box.sigma)
    if first.rho <= rho_c:
        raise NotCondensing(
            f"rho = {first.rho} <= rho_c = {rho_c}; no condensate to track"
        )
    if rho_cond is None:
        rho_cond = states[-1].rho_cond_finite
    sig2 = first.box.sigma ** 2
    Ls = np.array([st.params.box.L for st in states])
    ys = np.array([(st.mu + sig2) * st.params.box.L for st in states])
    n_top = max(3, len(states) // 2)
    x = 1.0 / Ls[-n_top:]
    coeffs = np.polyfit(x, ys[-n_top:], 1)
    limit = float(coeffs[1])
    reference = -2.0 / (first.beta * rho_cond)
    rel_error = abs(limit - reference) / abs(reference)
    return MuAsymptoticsReport(
        L_values=Ls,
        scaled_offsets=ys,
        limit_estimate=limit,
        rho_cond=float(rho_cond),
        reference=reference,
        rel_error=float(rel_error),
        passed=bool(rel_error <= rel_tol),
    )


def fit_exponential_rate(L_values, y_values) -> float:
    """Decay rate r from least squares on ln y = a - r L; positive y only."""
    L_arr = np.asarray(L_values, dtype=float)
    y_arr = np.asarray(y_values, dtype=float)
    keep = y_arr > 0.0
    if keep.sum() < 3:
        raise ValidationError("need >= 3 positive samples for a rate fit")
    slope = np.polyfit(L_arr[keep], np.log(y_arr[keep]), 1)[0]
    return float(-slope)


# ----------------------------------------------------------------------
# sweep CSV
# ----------------------------------------------------------------------

SWEEP_HEADER = "L,mu,eps0,eps1,occ0_per_L,occ1_per_L,rho_tilde,gap,mu_plus_sigma2_times_L"


def write_sweep_csv(states, path, comment_lines=()) -> None:
    """One row per solved state, ordered as given, 17 significant digits."""
    with open(path, "w", newline="\n") as fh:
        for line in comment_lines:
            fh.write(f"# {line}\n")
        fh.write(SWEEP_HEADER + "\n")
        for st in states:
            L = st.params.box.L
            sig2 = st.params.box.sigma ** 2
            row = (
                L,
                st.mu,
                st.epsilons[0],
                st.epsilons[1],
                st.occ[0] / L,
                st.occ[1] / L,
                st.rho_tilde,
                equal_distribution_gap(st),
                (st.mu + sig2) * L,
            )
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
