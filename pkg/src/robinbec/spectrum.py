"""One-body spectrum of a 1D box with attractive (Robin) walls.

Solves -phi'' = eps * phi on [-L/2, L/2] with wall conditions
(phi' - sigma*phi)(-L/2) = 0 and (phi' + sigma*phi)(+L/2) = 0, where
sigma < 0 (units hbar^2/2m = 1).  The spectrum consists of two
near-degenerate negative (wall-bound) modes followed by an infinite
ladder of positive modes interlacing the Neumann values:

    eps(0) < eps(1) < 0 < eps(2) < eps(3) < ...,
    ((k-1)*pi/L)^2 < eps(k) < (k*pi/L)^2        for k >= 2.

Writing s = |sigma| and matching the symmetric/antisymmetric trial
solutions to the wall condition at x = +L/2 gives the eigenvalue
conditions

    k = 0 (even):   q*tanh(q*L/2) = s,                eps = -q^2,
    k = 1 (odd):    q*coth(q*L/2) = s,                eps = -q^2,
                    root exists iff L*s > 2 (coth limit 2/L at q->0),
    k >= 2 even:    p*sin(p*L/2) + s*cos(p*L/2) = 0,  eps = +p^2,
    k >= 2 odd:     p*cos(p*L/2) - s*sin(p*L/2) = 0,  eps = +p^2.

The trig residuals are pole-free on the certified brackets above, so each
root is found by plain bisection plus one guarded Newton step.  The
bound-state brackets are [s, s/tanh(s*L/2)] for k = 0 and (delta, s] for
k = 1 with delta shrunk until the residual goes negative.

Eigenfunctions are cosh/sinh (bound) or cos/sin (scattering-like)
profiles with L2 normalization

    C_even_bound = sqrt(2/L) * (1 + sinh(qL)/(qL))^(-1/2),
    C_odd_bound  = sqrt(2/L) * (-1 + sinh(qL)/(qL))^(-1/2),
    C_trig       = sqrt(2/L) * (1 +/- sin(pL)/(pL))^(-1/2),

evaluated in log space so that values stay finite when q*L is large
enough for sinh(qL) to overflow a double.

An independent finite-difference discretization of the same operator
(`fd_eigenvalues`, Robin closure by ghost-point elimination with lumped
end weights, symmetric tridiagonal after a diagonal similarity) provides
a cross-check with O(h^2) error; `fd_eigenvalues_richardson` removes the
leading error term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .errors import NumericalFailure, ValidationError

EVEN = "even"
ODD = "odd"

_LN2 = math.log(2.0)


class OutOfDomain(ValidationError):
    """Position outside the box [-L/2, L/2]."""


class NoSecondBoundState(ValidationError):
    """The odd wall-bound mode exists only for L*|sigma| > 2."""


class BracketFailure(NumericalFailure):
    """A certified root bracket showed no sign change."""


@dataclass(frozen=True)
class BoxParams:
    """Wall coupling sigma (attractive: sigma < 0) and box length L."""

    sigma: float
    L: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma < 0.0):
            raise ValidationError(
                f"sigma must be finite and < 0 (attractive walls), got {self.sigma}"
            )
        if not (math.isfinite(self.L) and self.L > 0.0):
            raise ValidationError(f"L must be finite and > 0, got {self.L}")

    @property
    def s(self) -> float:
        """|sigma|."""
        return -self.sigma

    @property
    def half(self) -> float:
        return 0.5 * self.L

    def has_second_bound_state(self) -> bool:
        return self.L * self.s > 2.0


@dataclass(frozen=True)
class Mode:
    """One eigenpair of the Robin wall problem.

    `wavenumber` is q for the bound modes (eps = -q^2, k in {0, 1}) and p
    for k >= 2 (eps = +p^2).  `norm_const` may underflow to 0.0 for very
    large q*L; `log_norm` is always finite and is what evaluation uses.
    `residual` is |phi'(L/2) + sigma*phi(L/2)| of the normalized mode and
    `bracket_lo/hi` is the certified eigenvalue bracket in eps units.
    """

    k: int
    parity: str
    epsilon: float
    wavenumber: float
    norm_const: float
    log_norm: float
    residual: float
    bracket_lo: float
    bracket_hi: float


@dataclass(frozen=True)
class SpectrumTable:
    """Modes k = 0..k_max for one (sigma, L), strictly increasing in eps.

    One representational exception: the wall pair eps(0) < eps(1) may tie
    in double precision once its exponentially small splitting drops
    below resolution (L*|sigma| beyond ~36); the ordering is structural
    (q0 > s > q1) and `bound_state_gap` recovers the true splitting.
    """

    params: BoxParams
    modes: tuple[Mode, ...]

    def __post_init__(self):
        for i, mode in enumerate(self.modes):
            if mode.k != i:
                raise ValidationError("mode indices must be contiguous from 0")
        eps = [m.epsilon for m in self.modes]
        for i, (a, b) in enumerate(zip(eps, eps[1:])):
            if b < a or (b == a and i != 0):
                raise ValidationError("eigenvalues must be strictly increasing")

    @property
    def k_max(self) -> int:
        return len(self.modes) - 1

    @property
    def epsilons(self) -> np.ndarray:
        return np.array([m.epsilon for m in self.modes])


# ----------------------------------------------------------------------
# root finding
# ----------------------------------------------------------------------

def _bracketed_root(f, df, lo, hi, rtol=1e-13):
    """Bisection to relative width `rtol`, then one guarded Newton step."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise BracketFailure(
            f"no sign change on [{lo!r}, {hi!r}]: f(lo)={flo!r}, f(hi)={fhi!r}"
        )
    a, b, fb = lo, hi, fhi
    while (b - a) > rtol * max(abs(a), abs(b)):
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (fb > 0.0):
            b, fb = mid, fm
        else:
            a = mid
    x = 0.5 * (a + b)
    fx = f(x)
    d = df(x)
    if d != 0.0 and math.isfinite(d):
        y = x - fx / d
        if a <= y <= b and abs(f(y)) <= abs(fx):
            return y
    return x


def _sech2(x):
    e = math.exp(-abs(x))
    return (2.0 * e / (1.0 + e * e)) ** 2


def _csch2(x):
    # x > 0
    e = math.exp(-x)
    den = 1.0 - e * e
    return (2.0 * e / den) ** 2 if den > 0.0 else math.inf


def _coth(x):
    return 1.0 / math.tanh(x)


# ----------------------------------------------------------------------
# log-stable hyperbolic helpers
# ----------------------------------------------------------------------

def _logcosh_vec(u):
    au = np.abs(u)
    return au + np.log1p(np.exp(-2.0 * au)) - _LN2


def _logsinh_abs_vec(u):
    au = np.abs(np.asarray(u, dtype=float))
    out = np.empty_like(au)
    small = au < 350.0
    with np.errstate(divide="ignore"):
        out[small] = np.log(np.sinh(au[small]))
    big = ~small
    out[big] = au[big] - _LN2 + np.log1p(-np.exp(-2.0 * au[big]))
    return out


def _logsinh(v):
    # scalar, v > 0
    if v < 350.0:
        return math.log(math.sinh(v))
    return v - _LN2 + math.log1p(-math.exp(-2.0 * v))


def _logsinh_minus_linear(v):
    """log(sinh(v) - v) for v > 0, stable for both tiny and huge v."""
    if v < 0.02:
        v2 = v * v
        return 3.0 * math.log(v) - math.log(6.0) + math.log1p(v2 / 20.0 + v2 * v2 / 840.0)
    if v < 350.0:
        return math.log(math.sinh(v) - v)
    r = 2.0 * v * math.exp(-v)  # v / sinh(v) up to the 1 - e^{-2v} factor
    return _logsinh(v) + math.log1p(-r / (1.0 - math.exp(-2.0 * v)))


def _bound_log_norm(parity, q, L):
    # integral of the squared profile: L/2 + sinh(qL)/(2q) (even),
    # (sinh(qL) - qL)/(2q) (odd); C = integral^{-1/2}
    v = q * L
    if parity == EVEN:
        log_int = np.logaddexp(math.log(0.5 * L), _logsinh(v) - math.log(2.0 * q))
    else:
        log_int = _logsinh_minus_linear(v) - math.log(2.0 * q)
    return -0.5 * float(log_int)


# ----------------------------------------------------------------------
# operations
# ----------------------------------------------------------------------

def solve_mode(params: BoxParams, k: int, rtol: float = 1e-13) -> Mode:
    """Solve one eigenpair; see the module docstring for the equations.

    Raises NoSecondBoundState for k = 1 when L*|sigma| <= 2 and
    BracketFailure if a certified bracket fails its sign-change check.
    """
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise ValidationError(f"mode index must be a nonnegative integer, got {k!r}")
    k = int(k)
    s, L, half = params.s, params.L, params.half

    if k == 0:
        def f(q):
            return q * math.tanh(half * q) - s

        def df(q):
            return math.tanh(half * q) + q * half * _sech2(half * q)

        lo, hi = s, s / math.tanh(half * s)
        q = _bracketed_root(f, df, lo, hi, rtol)
        parity, eps = EVEN, -q * q
        log_norm = _bound_log_norm(EVEN, q, L)
        phi_wall = math.exp(log_norm + float(_logcosh_vec(q * half)))
        residual = abs(phi_wall * f(q))
        bracket_lo, bracket_hi = -hi * hi, -lo * lo
    elif k == 1:
        if not params.has_second_bound_state():
            raise NoSecondBoundState(
                f"odd bound state needs L*|sigma| > 2, got {L * s}"
            )

        def g(q):
            return q * _coth(half * q) - s

        def dg(q):
            return _coth(half * q) - q * half * _csch2(half * q)

        hi = s  # g(s) = s*(coth(sL/2) - 1) > 0
        lo = 0.5 * s
        for _ in range(5000):
            if g(lo) < 0.0:
                break
            lo *= 0.5
        else:
            raise BracketFailure("could not certify lower bracket for the odd bound state")
        q = _bracketed_root(g, dg, lo, hi, rtol)
        parity, eps = ODD, -q * q
        log_norm = _bound_log_norm(ODD, q, L)
        phi_wall = math.exp(log_norm + _logsinh(q * half))
        residual = abs(phi_wall * g(q))
        bracket_lo, bracket_hi = -hi * hi, -lo * lo
    else:
        if k % 2 == 0:
            def r(p):
                return p * math.sin(half * p) + s * math.cos(half * p)

            def dr(p):
                return math.sin(half * p) + p * half * math.cos(half * p) - s * half * math.sin(half * p)
        else:
            def r(p):
                return p * math.cos(half * p) - s * math.sin(half * p)

            def dr(p):
                return math.cos(half * p) - p * half * math.sin(half * p) - s * half * math.cos(half * p)

        plo, phi_b = (k - 1) * math.pi / L, k * math.pi / L
        p = _bracketed_root(r, dr, plo, phi_b, rtol)
        parity, eps = (EVEN if k % 2 == 0 else ODD), p * p
        q = p
        sin_pl = math.sin(p * L) / (p * L)
        sign = 1.0 if parity == EVEN else -1.0
        norm = math.sqrt(2.0 / L) / math.sqrt(1.0 + sign * sin_pl)
        log_norm = math.log(norm)
        residual = norm * abs(r(p))
        bracket_lo, bracket_hi = plo * plo, phi_b * phi_b

    return Mode(
        k=k,
        parity=parity,
        epsilon=eps,
        wavenumber=q if k <= 1 else p,
        norm_const=math.exp(log_norm),
        log_norm=log_norm,
        residual=residual,
        bracket_lo=bracket_lo,
        bracket_hi=bracket_hi,
    )


def build_spectrum(params: BoxParams, k_max: int) -> SpectrumTable:
    """Modes 0..k_max as a validated table (k_max = 0 gives just the even
    bound state)."""
    if not isinstance(k_max, (int, np.integer)) or k_max < 0:
        raise ValidationError(f"k_max must be a nonnegative integer, got {k_max!r}")
    modes = tuple(solve_mode(params, k) for k in range(int(k_max) + 1))
    return SpectrumTable(params=params, modes=modes)


def eigenfunction_eval(mode: Mode, params: BoxParams, x):
    """Value of the normalized eigenfunction at x (scalar or array).

    Bound modes are evaluated as exp(log_norm + log cosh/sinh) so the
    result is finite even when the cosh/sinh factor alone would overflow.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > params.half * (1.0 + 1e-12)):
        raise OutOfDomain(f"|x| must be <= L/2 = {params.half}")
    if mode.k >= 2:
        p = mode.wavenumber
        if mode.parity == EVEN:
            vals = mode.norm_const * np.cos(p * arr)
        else:
            vals = mode.norm_const * np.sin(p * arr)
    else:
        u = mode.wavenumber * arr
        if mode.parity == EVEN:
            vals = np.exp(mode.log_norm + _logcosh_vec(u))
        else:
            vals = np.sign(u) * np.exp(mode.log_norm + _logsinh_abs_vec(u))
    if arr.ndim == 0:
        return float(vals)
    return vals


def boundary_residual_scale(mode: Mode, params: BoxParams) -> float:
    """Scale for judging `Mode.residual`: max(1, |sigma| * |phi(L/2)|)."""
    phi_wall = abs(eigenfunction_eval(mode, params, params.half))
    return max(1.0, params.s * phi_wall)


# ----------------------------------------------------------------------
# near-degenerate bound-state splittings
# ----------------------------------------------------------------------

def bound_state_corrections(params: BoxParams) -> tuple[float, float]:
    """(q0 - s, s - q1) with full relative precision at large L*s.

    Subtracting solved wavenumbers loses everything once the splitting
    drops below eps*s, so for L*s >= 4 the corrections are obtained from
    the exact rearrangements of the bound-state conditions

        d0 = (2s + d0) * exp(-(s + d0) L),
        d1 = (2s - d1) * exp(-(s - d1) L),

    iterated in log space (contraction for L*s >= 4).  Below that the
    direct subtraction is accurate and is used instead.
    """
    s, L = params.s, params.L
    if not params.has_second_bound_state():
        raise NoSecondBoundState(f"needs L*|sigma| > 2, got {L * s}")
    if s * L < 4.0:
        q0 = solve_mode(params, 0).wavenumber
        q1 = solve_mode(params, 1).wavenumber
        return q0 - s, s - q1

    def _fixed_point(sign):
        logd = math.log(2.0 * s) - s * L
        for _ in range(200):
            d = math.exp(logd)
            new = math.log(2.0 * s + sign * d) - (s + sign * d) * L
            if abs(new - logd) <= 1e-15 * max(1.0, abs(new)):
                return math.exp(new)
            logd = new
        raise NumericalFailure("bound-state correction iteration did not converge")

    return _fixed_point(+1.0), _fixed_point(-1.0)


def bound_state_gap(params: BoxParams) -> float:
    """eps(1) - eps(0) = (d0 + d1)(2s + d0 - d1), exact at any L."""
    d0, d1 = bound_state_corrections(params)
    return (d0 + d1) * (2.0 * params.s + d0 - d1)


def bound_state_offsets(params: BoxParams) -> tuple[float, float]:
    """(|eps(0) + sigma^2|, |eps(1) + sigma^2|) without cancellation."""
    d0, d1 = bound_state_corrections(params)
    s = params.s
    return d0 * (2.0 * s + d0), d1 * (2.0 * s - d1)


# ----------------------------------------------------------------------
# finite-difference validation oracle
# ----------------------------------------------------------------------

def fd_eigenvalues_raw(sigma: float, L: float, grid_points: int, n_modes: int) -> np.ndarray:
    """Lowest eigenvalues of the discretized operator; sigma <= 0 allowed
    (sigma = 0 reproduces the Neumann box and is used as a sanity case).

    Uniform grid with endpoints, ghost-point Robin closure, half-weight
    end cells; the generalized problem is symmetrized by the diagonal
    similarity, so the matrix stays tridiagonal symmetric.
    """
    if grid_points < 100:
        raise ValidationError(f"grid_points must be >= 100, got {grid_points}")
    if n_modes < 1 or n_modes > grid_points:
        raise ValidationError("n_modes must be in [1, grid_points]")
    if not (math.isfinite(sigma) and sigma <= 0.0):
        raise ValidationError(f"sigma must be <= 0, got {sigma}")
    if not (math.isfinite(L) and L > 0.0):
        raise ValidationError(f"L must be > 0, got {L}")
    n = int(grid_points)
    h = L / (n - 1)
    d = np.full(n, 2.0) / h**2
    d[0] += 2.0 * sigma / h
    d[-1] += 2.0 * sigma / h
    e = np.full(n - 1, -1.0) / h**2
    e[0] = -math.sqrt(2.0) / h**2
    e[-1] = -math.sqrt(2.0) / h**2
    return eigvalsh_tridiagonal(d, e, select="i", select_range=(0, int(n_modes) - 1))


def fd_eigenvalues(params: BoxParams, grid_points: int, n_modes: int) -> np.ndarray:
    """First `n_modes` eigenvalue estimates with O(h^2) error."""
    return fd_eigenvalues_raw(params.sigma, params.L, grid_points, n_modes)


def fd_eigenvalues_richardson(params: BoxParams, grid_points: int, n_modes: int) -> np.ndarray:
    """Richardson extrapolation over grids (N, 2N-1), removing the h^2 term."""
    coarse = fd_eigenvalues(params, grid_points, n_modes)
    fine = fd_eigenvalues(params, 2 * int(grid_points) - 1, n_modes)
    return (4.0 * fine - coarse) / 3.0


# ----------------------------------------------------------------------
# CSV export
# ----------------------------------------------------------------------

def write_spectrum_csv(table: SpectrumTable, path, comment_lines=()) -> None:
    """CSV rows `k,parity,epsilon,wavenumber,residual,bracket_lo,bracket_hi`
    at 17 significant digits; `comment_lines` go first, prefixed with '#'."""
    with open(path, "w", newline="\n") as fh:
        for line in comment_lines:
            fh.write(f"# {line}\n")
        fh.write("k,parity,epsilon,wavenumber,residual,bracket_lo,bracket_hi\n")
        for m in table.modes:
            fh.write(
                f"{m.k},{m.parity},{m.epsilon:.17g},{m.wavenumber:.17g},"
                f"{m.residual:.17g},{m.bracket_lo:.17g},{m.bracket_hi:.17g}\n"
            )
