"""Exact grand-canonical expectations on a capped occupation space.

The Hamiltonian is diagonal in the occupation basis of the wall-mode
spectrum,

    H = sum_k eps_k N_k + (lam/2) * Ntil^2 / L,     Ntil = sum_{k>=2} N_k,

so a grand-canonical expectation is a ratio of weighted sums over
occupation configurations with per-configuration weight

    exp(-beta * (sum_k eps_k n_k + (lam/2) ntil^2 / L - mu * sum_k n_k)).

The two wall modes (k = 0, 1) do not enter the coupling term and
factorize as independent geometric series.  Modes k >= 2 couple only
through ntil, so their sector reduces to the constrained sums

    z[ntil] = sum over {n_k, k >= 2 : sum n_k = ntil} exp(-beta sum eps_k n_k),

built by convolving per-mode geometric weight vectors; the coupling and
the chemical potential then act as a 1-D reweighting in ntil.  That turns
every diagonal observable into a short exact sum at cost
O(K * (sum caps)^2) instead of prod(caps).

Occupations are capped per mode; caps are chosen so each mode's neglected
geometric tail (at the given beta, mu; the repulsive ntil coupling only
suppresses further) stays below a requested tolerance, and the reported
`tail_budget` certifies the truncation.  All sums run in log space.

Observables are products of univariate polynomial factors in distinct
mode numbers, optionally times a polynomial in Ntil (the coupling makes
Ntil a function of the DP index, so it costs nothing extra).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import NumericalFailure, ValidationError
from .spectrum import BoxParams, SpectrumTable

_DEFAULT_MAX_DP_LEN = 2_000_000
_DEFAULT_MAX_MODE_CAP = 5_000_000  # wall-mode sums materialize arange(cap + 1)


class CapOverflow(ValidationError):
    """Total occupation-cap budget exceeds the configured maximum."""


class UnknownMode(ValidationError):
    """Observable references a mode outside the truncation."""


class IndexClash(ValidationError):
    """Exchange-identity mode indices must be distinct."""


class BadMode(ValidationError):
    """Check applied to a mode outside its validity class."""


class NonpositiveGap(ValidationError):
    """Occupation-bound exponent c_k <= 0; the bound is vacuous."""


@dataclass(frozen=True)
class ModelParams:
    """Inverse temperature, chemical potential, and coupling for one box.

    lam = 0 is permitted as the free reference gas.  mu < eps(0) is
    required by every operation that sums the wall-mode series; it is
    validated against the actual spectrum at call time, not here.
    """

    box: BoxParams
    beta: float
    mu: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise ValidationError(f"beta must be finite and > 0, got {self.beta}")
        if not math.isfinite(self.mu):
            raise ValidationError(f"mu must be finite, got {self.mu}")
        if not (math.isfinite(self.lam) and self.lam >= 0.0):
            raise ValidationError(f"lam must be finite and >= 0, got {self.lam}")


def number_poly(power: int) -> tuple[float, ...]:
    """Coefficients (low -> high) of N^power."""
    if power < 0:
        raise ValidationError("power must be >= 0")
    return tuple([0.0] * power + [1.0])


def shifted_number_poly(power: int) -> tuple[float, ...]:
    """Coefficients (low -> high) of (N + 1)^power."""
    if power < 0:
        raise ValidationError("power must be >= 0")
    return tuple(float(math.comb(power, i)) for i in range(power + 1))


@dataclass(frozen=True)
class DiagonalObservable:
    """Product of univariate polynomial factors in distinct mode numbers,
    optionally times a polynomial in Ntil = sum_{k>=2} N_k.

    Factors must be nonnegative on the admissible occupation range (all
    built-in factors N^n and (N+1)^n are); negative values are rejected
    at evaluation time so the log-space sums stay sign-free.
    """

    factors: tuple[tuple[int, tuple[float, ...]], ...] = ()
    ntilde_poly: tuple[float, ...] | None = None

    def __post_init__(self):
        seen = set()
        for k, poly in self.factors:
            if k < 0:
                raise ValidationError(f"mode index must be >= 0, got {k}")
            if k in seen:
                raise ValidationError(f"mode {k} appears in more than one factor")
            seen.add(k)
            if len(poly) == 0 or not all(math.isfinite(c) for c in poly):
                raise ValidationError("factor coefficients must be finite and nonempty")
        if self.ntilde_poly is not None and (
            len(self.ntilde_poly) == 0
            or not all(math.isfinite(c) for c in self.ntilde_poly)
        ):
            raise ValidationError("ntilde_poly coefficients must be finite and nonempty")

    @classmethod
    def one(cls) -> "DiagonalObservable":
        return cls()

    @classmethod
    def mode_number(cls, k: int, power: int = 1) -> "DiagonalObservable":
        return cls(factors=((k, number_poly(power)),))

    def modes(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.factors)


@dataclass(frozen=True)
class TruncationSpec:
    """Spectrum prefix, per-mode occupation caps, and the certified tail.

    `per_mode_tail[k]` bounds the effect of capping mode k at M = caps[k]
    on any reported expectation: the neglected geometric weight inflated
    by a cubic moment envelope,

        t_k = 6 (M + 2)^3 x^(M+1) / (1 - x)^3,   x = e^{-beta (eps_k - mu)},

    using sum_{n > M} (n+1)^d x^n <= d! (M+2)^d x^(M+1)/(1-x)^(d+1) at
    d = 3, the highest per-mode polynomial degree the built-in checks
    report.  `tail_budget` is the sum over modes.  Hand-built observables
    of per-mode degree > 3 can exceed the envelope.  Expectations that
    provably do not involve a mode (wall modes cancel out of k >= 2
    sector ratios and vice versa) may use `relevant_budget` instead of
    the global sum.
    """

    table: SpectrumTable
    caps: tuple[int, ...]
    per_mode_tail: tuple[float, ...]
    tail_budget: float

    def __post_init__(self):
        if len(self.caps) != len(self.table.modes):
            raise ValidationError("need exactly one cap per tabulated mode")
        if len(self.caps) < 2:
            raise ValidationError("truncation must include both wall modes (k = 0, 1)")
        if any((not isinstance(c, int)) or c < 1 for c in self.caps):
            raise ValidationError("caps must be integers >= 1")

    @property
    def k_top(self) -> int:
        return len(self.caps) - 1

    def relevant_budget(self, involved_modes) -> float:
        """Tail budget for a check touching `involved_modes`: tails of the
        involved wall modes plus, if any mode k >= 2 is involved, the whole
        k >= 2 sector (its normalization couples all excited caps)."""
        budget = sum(self.per_mode_tail[k] for k in involved_modes if k < 2)
        if any(k >= 2 for k in involved_modes):
            budget += sum(self.per_mode_tail[2:])
        return budget


def _moment_tail(logx: float, cap: int) -> float:
    # 6 (cap+2)^3 x^(cap+1) / (1-x)^3 for x = e^logx; inf when x >= 1
    if logx >= 0.0:
        return math.inf
    one_minus_x = -math.expm1(logx)
    return 6.0 * (cap + 2.0) ** 3 * math.exp((cap + 1) * logx) / one_minus_x**3


def make_truncation(
    table: SpectrumTable,
    model: ModelParams,
    tol: float = 1e-12,
    max_dp_len: int = _DEFAULT_MAX_DP_LEN,
) -> TruncationSpec:
    """Choose per-mode caps so every per-mode tail is < tol/(k_top + 1).

    Requires mu < eps(0) so that every geometric ratio is < 1.  Raises
    CapOverflow if the resulting k >= 2 cap total exceeds `max_dp_len`.
    """
    if table.params != model.box:
        raise ValidationError("truncation table and model box must match")
    eps = table.epsilons
    if model.mu >= eps[0]:
        raise ValidationError(
            f"mu must satisfy mu < eps(0) = {eps[0]}, got {model.mu}"
        )
    if not (0.0 < tol < 1.0):
        raise ValidationError("tol must be in (0, 1)")
    n_modes = len(eps)
    target = tol / n_modes
    caps = []
    tails = []
    for k in range(n_modes):
        logx = -model.beta * (eps[k] - model.mu)
        # weight-only estimate, then grow until the moment envelope fits
        need = (math.log(target) + math.log(-math.expm1(logx))) / logx - 1.0
        cap = max(1, int(math.ceil(need - 1e-9)))
        while _moment_tail(logx, cap) > target:
            cap += 1 + cap // 8
        if cap > _DEFAULT_MAX_MODE_CAP:
            raise CapOverflow(
                f"mode {k} needs cap {cap} to certify tol {tol:.1e}; "
                "mu is too close to eps(0) for the capped oracle"
            )
        caps.append(cap)
        tails.append(_moment_tail(logx, cap))
    if sum(caps[2:]) + 1 > max_dp_len:
        raise CapOverflow(
            f"k>=2 cap total {sum(caps[2:])} exceeds max DP length {max_dp_len}"
        )
    budget = math.fsum(tails)
    if budget > tol:
        raise NumericalFailure("computed tail budget exceeds the requested tolerance")
    return TruncationSpec(
        table=table, caps=tuple(caps), per_mode_tail=tuple(tails), tail_budget=budget
    )


def truncation_from_caps(
    table: SpectrumTable,
    model: ModelParams,
    caps,
    max_dp_len: int = _DEFAULT_MAX_DP_LEN,
) -> TruncationSpec:
    """Explicit caps; reports the implied tails.  Allows mu = eps(0)
    (wall-mode tails become inf but cancel out of k >= 2 sector ratios)."""
    if table.params != model.box:
        raise ValidationError("truncation table and model box must match")
    caps = tuple(int(c) for c in caps)
    if sum(caps[2:]) + 1 > max_dp_len:
        raise CapOverflow(
            f"k>=2 cap total {sum(caps[2:])} exceeds max DP length {max_dp_len}"
        )
    eps = table.epsilons
    if model.mu > eps[0]:
        raise ValidationError(
            f"mu must satisfy mu <= eps(0) = {eps[0]}, got {model.mu}"
        )
    tails = tuple(
        _moment_tail(-model.beta * (eps[k] - model.mu), caps[k])
        for k in range(len(caps))
    )
    return TruncationSpec(
        table=table, caps=caps, per_mode_tail=tails, tail_budget=math.fsum(tails)
    )


# ----------------------------------------------------------------------
# constrained partition sums
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConstrainedZ:
    """log z[ntil] for the k >= 2 sector (no mu, no coupling: pure
    exp(-beta sum eps_k n_k) summed at fixed ntil).  z[0] = 1."""

    log_z: np.ndarray

    @property
    def z(self) -> np.ndarray:
        return np.exp(self.log_z)


def _log_conv(la: np.ndarray, lb: np.ndarray) -> np.ndarray:
    """Log-space linear convolution; loops over the shorter operand."""
    if len(lb) > len(la):
        la, lb = lb, la
    n = len(la) + len(lb) - 1
    stack = np.full((len(lb), n), -np.inf)
    for j in range(len(lb)):
        stack[j, j : j + len(la)] = lb[j] + la
    return logsumexp(stack, axis=0)


def _poly_on_range(coeffs, n: np.ndarray) -> np.ndarray:
    vals = np.polynomial.polynomial.polyval(n, np.asarray(coeffs, dtype=float))
    vals = np.atleast_1d(vals)
    if np.any(vals < 0.0):
        raise ValidationError("observable factor is negative on the occupation range")
    return vals


def _excited_log_vectors(spec: TruncationSpec, model: ModelParams, factored=None):
    eps = spec.table.epsilons
    for k in range(2, len(spec.caps)):
        n = np.arange(spec.caps[k] + 1)
        logv = -model.beta * eps[k] * n
        if factored and k in factored:
            with np.errstate(divide="ignore"):
                logv = logv + np.log(_poly_on_range(factored[k], n))
        yield logv


def constrained_partition(spec: TruncationSpec, model: ModelParams) -> ConstrainedZ:
    """z[ntil] by convolving the per-mode geometric weight vectors."""
    log_z = np.zeros(1)
    for logv in _excited_log_vectors(spec, model):
        log_z = _log_conv(log_z, logv)
    return ConstrainedZ(log_z=log_z)


def _log_coupling_weight(model: ModelParams, ntil: np.ndarray) -> np.ndarray:
    return model.beta * (model.mu * ntil - 0.5 * model.lam * ntil * ntil / model.box.L)


def _wall_mode_ratio(spec: TruncationSpec, model: ModelParams, k: int, poly) -> float:
    eps_k = spec.table.modes[k].epsilon
    n = np.arange(spec.caps[k] + 1)
    logw = -model.beta * (eps_k - model.mu) * n
    f = _poly_on_range(poly, n)
    if not np.any(f > 0.0):
        return 0.0
    num = logsumexp(logw, b=f)
    den = logsumexp(logw)
    return math.exp(num - den)


def grand_expectation(
    obs: DiagonalObservable,
    spec: TruncationSpec,
    model: ModelParams,
    z: ConstrainedZ | None = None,
) -> float:
    """Exact capped-space expectation of a diagonal observable.

    Wall-mode factors reduce to independent 1-D geometric sums; k >= 2
    factors enter through a reweighted constrained partition sum.  A
    precomputed `z` (for this spec and model) may be shared across calls.
    """
    if spec.table.params != model.box:
        raise ValidationError("truncation table and model box must match")
    wall = 1.0
    factored = {}
    for k, poly in obs.factors:
        if k > spec.k_top:
            raise UnknownMode(f"mode {k} is outside the truncation (k_top={spec.k_top})")
        if k < 2:
            wall *= _wall_mode_ratio(spec, model, k, poly)
        else:
            factored[k] = poly
    if z is None:
        z = constrained_partition(spec, model)
    elif len(z.log_z) != sum(spec.caps[2:]) + 1:
        raise ValidationError("precomputed z does not match this truncation's caps")
    if not factored and obs.ntilde_poly is None:
        return wall  # excited-sector ratio is exactly 1
    ntil = np.arange(len(z.log_z), dtype=float)
    logG = _log_coupling_weight(model, ntil)
    log_den = logsumexp(z.log_z + logG)
    if factored:
        log_z_mod = np.zeros(1)
        for logv in _excited_log_vectors(spec, model, factored):
            log_z_mod = _log_conv(log_z_mod, logv)
    else:
        log_z_mod = z.log_z
    if obs.ntilde_poly is not None:
        b = _poly_on_range(obs.ntilde_poly, ntil)
        if not np.any(b > 0.0):
            return 0.0
        log_num = logsumexp(log_z_mod + logG, b=b)
    else:
        log_num = logsumexp(log_z_mod + logG)
    if log_num == -np.inf:
        return 0.0
    return wall * math.exp(log_num - log_den)


# ----------------------------------------------------------------------
# equilibrium-state checks
# ----------------------------------------------------------------------

def _require_mu_below_ground(spec: TruncationSpec, model: ModelParams, strict=True):
    eps0 = spec.table.modes[0].epsilon
    if strict and not model.mu < eps0:
        raise ValidationError(f"mu must satisfy mu < eps(0) = {eps0}, got {model.mu}")
    if not strict and not model.mu <= eps0:
        raise ValidationError(f"mu must satisfy mu <= eps(0) = {eps0}, got {model.mu}")


def exchange_identity_sides(j, targets, spec, model):
    """Both sides of the particle-exchange identity between mode j and the
    first target mode: moving one particle from j to k1 multiplies the
    Gibbs weight by exp(beta (eps_j - eps_k1)) whenever the move leaves
    the coupling term unchanged (j and k1 both wall modes, both k >= 2,
    or lam = 0).  Returns (lhs, rhs) with

        lhs = e^{beta (eps_j - eps_k1)} omega(N_j (N_k1 + 1)^n1 prod_i N_ki^ni),
        rhs = omega((N_j + 1) N_k1^n1 prod_i N_ki^ni).

    For mixed wall/excited pairs at lam > 0 the move shifts Ntil and the
    identity genuinely fails; the sides are still well defined.
    """
    targets = tuple((int(k), int(n)) for k, n in targets)
    if len(targets) == 0:
        raise ValidationError("need at least one (mode, power) target")
    ks = [k for k, _ in targets]
    if len(set(ks)) != len(ks):
        raise IndexClash(f"target modes must be pairwise distinct, got {ks}")
    if j in ks:
        raise IndexClash(f"j={j} clashes with target modes {ks}")
    k1, n1 = targets[0]
    if n1 < 1:
        raise ValidationError("the first target power must be >= 1")
    if any(n < 0 for _, n in targets):
        raise ValidationError("target powers must be >= 0")
    for k in [j] + ks:
        if k < 0 or k > spec.k_top:
            raise UnknownMode(f"mode {k} is outside the truncation")
    _require_mu_below_ground(spec, model)

    spect = [(k, number_poly(n)) for k, n in targets[1:] if n > 0]
    lhs_obs = DiagonalObservable(
        factors=tuple([(j, number_poly(1)), (k1, shifted_number_poly(n1))] + spect)
    )
    rhs_obs = DiagonalObservable(
        factors=tuple([(j, shifted_number_poly(1)), (k1, number_poly(n1))] + spect)
    )
    eps = spec.table.epsilons
    z = constrained_partition(spec, model)
    pref = math.exp(model.beta * (eps[j] - eps[k1]))
    lhs = pref * grand_expectation(lhs_obs, spec, model, z=z)
    rhs = grand_expectation(rhs_obs, spec, model, z=z)
    return lhs, rhs


def check_exchange_identity(j, targets, spec, model) -> float:
    """Signed residual lhs - rhs of the exchange identity; magnitude is
    bounded by the truncation tail on the full-space-valid sectors."""
    lhs, rhs = exchange_identity_sides(j, targets, spec, model)
    return lhs - rhs


def check_wall_mode_occupation(k, spec, model) -> float:
    """Signed residual omega(N_k) - 1/(e^{beta (eps_k - mu)} - 1) for a
    wall mode k in {0, 1}.  The closed form is the untruncated value (the
    coupling omits the wall modes, so it is exact on the full space);
    the residual is the truncation tail of the geometric series."""
    if k not in (0, 1):
        raise BadMode(f"wall-mode occupation check needs k in {{0, 1}}, got {k}")
    s2 = spec.table.params.s ** 2
    if not (model.mu < -s2):
        raise ValidationError(f"mu must satisfy mu < -sigma^2 = {-s2}, got {model.mu}")
    _require_mu_below_ground(spec, model)
    occ = grand_expectation(DiagonalObservable.mode_number(k), spec, model)
    closed = 1.0 / math.expm1(model.beta * (spec.table.modes[k].epsilon - model.mu))
    return occ - closed


def check_moment_log_inequality(k, n, spec, model):
    """Both sides of the occupation-moment log inequality for k >= 2:

        beta * [ (mu - eps_k + lam/(2L)) omega(N_k^{n+1})
                 - (lam/L) omega(Ntil N_k^{n+1}) ]
            >=  omega(N_k^{n+1}) * ln( omega(N_k^{n+1}) / omega((N_k+1)^{n+1}) ).

    Returns (lhs, rhs); equality holds in the free gas at n arbitrary.
    """
    if k < 2:
        raise BadMode(f"moment inequality needs k >= 2, got {k}")
    if k > spec.k_top:
        raise UnknownMode(f"mode {k} is outside the truncation")
    if n < 0:
        raise ValidationError("n must be >= 0")
    _require_mu_below_ground(spec, model)
    eps_k = spec.table.modes[k].epsilon
    L = model.box.L
    z = constrained_partition(spec, model)
    a = grand_expectation(
        DiagonalObservable.mode_number(k, n + 1), spec, model, z=z
    )
    b = grand_expectation(
        DiagonalObservable(factors=((k, shifted_number_poly(n + 1)),)), spec, model, z=z
    )
    c = grand_expectation(
        DiagonalObservable(
            factors=((k, number_poly(n + 1)),), ntilde_poly=(0.0, 1.0)
        ),
        spec,
        model,
        z=z,
    )
    lhs = model.beta * ((model.mu - eps_k + 0.5 * model.lam / L) * a - model.lam * c / L)
    rhs = a * math.log(a / b)
    return lhs, rhs


def occupation_bound_exponent(k, spec, model) -> float:
    """c_k = beta * (eps_k - eps_0 - lam/(2L)); positive where the
    occupation bound is informative."""
    eps = spec.table.epsilons
    return model.beta * (eps[k] - eps[0] - 0.5 * model.lam / model.box.L)


def check_occupation_bound(k, spec, model):
    """(omega(N_k), 1/(e^{c_k} - 1)) for k >= 2 with c_k as above.

    Valid for mu <= eps(0); the bound saturates in the free gas at
    mu = eps(0).  Raises NonpositiveGap when c_k <= 0 (vacuous bound).
    """
    if k < 2:
        raise BadMode(f"occupation bound needs k >= 2, got {k}")
    if k > spec.k_top:
        raise UnknownMode(f"mode {k} is outside the truncation")
    _require_mu_below_ground(spec, model, strict=False)
    c = occupation_bound_exponent(k, spec, model)
    if c <= 0.0:
        raise NonpositiveGap(f"bound exponent c_k = {c} <= 0 for k={k}")
    occ = grand_expectation(DiagonalObservable.mode_number(k), spec, model)
    return occ, 1.0 / math.expm1(c)


# ----------------------------------------------------------------------
# JSON check reports
# ----------------------------------------------------------------------

CHECK_NAMES = ("exchange", "wall-occupation", "moment-inequality", "occupation-bound")

_FLOAT_ATOL_FACTOR = 4e-13  # rounding allowance on top of the tail budget


def _report(check, params, lhs, rhs, residual, budget, passed):
    return {
        "check": check,
        "params": params,
        "lhs": lhs,
        "rhs": rhs,
        "residual": residual,
        "tail_budget": budget,
        "pass": passed,
    }


def run_check(name: str, spec: TruncationSpec, model: ModelParams, **kwargs) -> dict:
    """Run one named check and wrap it as a JSON-ready report.

    Pass criteria (scale = max(1, |lhs|, |rhs|), budget = relevant
    truncation tail):
      exchange, wall-occupation:  |lhs - rhs| <= (budget + atol) * scale
      moment-inequality:          lhs >= rhs - (budget + atol) * scale
      occupation-bound:           lhs <= rhs + (budget + atol) * scale
    A vacuous occupation bound (c_k <= 0) is reported with pass = None.
    """
    base = {
        "sigma": model.box.sigma,
        "L": model.box.L,
        "beta": model.beta,
        "mu": model.mu,
        "lambda": model.lam,
        "k_top": spec.k_top,
        "caps_total": sum(spec.caps),
    }
    if name == "exchange":
        j = kwargs["j"]
        targets = tuple(kwargs["targets"])
        lhs, rhs = exchange_identity_sides(j, targets, spec, model)
        involved = [j] + [k for k, _ in targets]
        budget = spec.relevant_budget(involved)
        scale = max(1.0, abs(lhs), abs(rhs))
        passed = abs(lhs - rhs) <= (budget + _FLOAT_ATOL_FACTOR) * scale
        params = dict(base, j=j, targets=list(map(list, targets)))
        return _report(name, params, lhs, rhs, lhs - rhs, budget, passed)
    if name == "wall-occupation":
        k = kwargs["k"]
        residual = check_wall_mode_occupation(k, spec, model)
        closed = 1.0 / math.expm1(model.beta * (spec.table.modes[k].epsilon - model.mu))
        lhs, rhs = closed + residual, closed
        budget = spec.relevant_budget([k])
        scale = max(1.0, abs(lhs), abs(rhs))
        passed = abs(residual) <= (budget + _FLOAT_ATOL_FACTOR) * scale
        return _report(name, dict(base, k=k), lhs, rhs, residual, budget, passed)
    if name == "moment-inequality":
        k, n = kwargs["k"], kwargs.get("n", 0)
        lhs, rhs = check_moment_log_inequality(k, n, spec, model)
        budget = spec.relevant_budget([k])
        scale = max(1.0, abs(lhs), abs(rhs))
        passed = lhs >= rhs - (budget + _FLOAT_ATOL_FACTOR) * scale
        return _report(name, dict(base, k=k, n=n), lhs, rhs, lhs - rhs, budget, passed)
    if name == "occupation-bound":
        k = kwargs["k"]
        budget = spec.relevant_budget([k])
        try:
            occ, bound = check_occupation_bound(k, spec, model)
        except NonpositiveGap:
            c = occupation_bound_exponent(k, spec, model)
            params = dict(base, k=k, bound_exponent=c)
            return _report(name, params, None, None, None, budget, None)
        scale = max(1.0, abs(occ), abs(bound))
        passed = occ <= bound + (budget + _FLOAT_ATOL_FACTOR) * scale
        return _report(name, dict(base, k=k), occ, bound, occ - bound, budget, passed)
    raise ValidationError(f"unknown check {name!r}; expected one of {CHECK_NAMES}")
