"""The smooth-number density and exact smooth counts.

The density rho solves u rho'(u) = -rho(u-1) with rho = 1 on [0,1]. The
primary evaluator marches unit panels [k, k+1], representing rho on each
panel by a power series around the midpoint; the delay equation turns
into a two-term coefficient recurrence, and continuity at the left edge
fixes the constant term. The piecewise-closed-form 1 - log u on [1,2] and
a direct quadrature at u = 10/3 serve as independent cross-checks.

Exact counts Psi(x, y) divide out prime factors <= y from every residual
in 2..x with vectorized slice operations and count what collapses to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .arith import memory_budget_mb, primes_upto
from .bigreal import BigRealWithError
from .errors import BudgetError, PreconditionError

__all__ = [
    "U_MAX",
    "rho",
    "rho_derivative",
    "RhoSolution",
    "rho_solution",
    "RhoTenThirds",
    "rho_ten_thirds_quadrature",
    "SmoothCount",
    "psi_exact",
    "psi_hildebrand",
    "smooth_count",
]

U_MAX = 20
DEFAULT_TOL = 1e-10
MIN_TOL = 1e-12
HILDEBRAND_U_MAX = 10

_SERIES_TERMS = 72
_WORK_DPS = 40


class _RhoPanels:
    """Power-series panels for rho on [k, k+1], k = 0..u_max-1.

    Panel k stores coefficients a_0..a_J of rho(c + y), c = k + 1/2,
    |y| <= 1/2. The delay equation gives, for the panel above panel b,

        a_{j+1} = -(b_j + j a_j) / (c (j+1)),

    and a_0 comes from matching the previous panel's right edge. Panel 0
    is the constant 1.

    Error tracking: per-panel truncation is charged as 2^-J times the
    last two coefficient magnitudes (coefficient ratios settle below
    1/c <= 2/3, so the series tail at |y| = 1/2 is dominated by a
    geometric series with ratio <= 1/3); propagating an error eps
    through one panel multiplies it by at most 1 + log 2 < 1.7, since
    the panel solves u p' = -q(u-1) with the perturbed right side and
    inherits the edge value. A per-panel rounding floor covers the
    finite working precision.
    """

    def __init__(self, u_max: int = U_MAX, terms: int = _SERIES_TERMS, dps: int = _WORK_DPS):
        self.u_max = u_max
        self.terms = terms
        self.dps = dps
        with mp.workdps(dps):
            one = mp.mpf(1)
            half = mp.mpf("0.5")
            rounding_floor = mp.mpf(10) ** (5 - dps)
            panels = [[one] + [mp.mpf(0)] * terms]
            errs = [mp.mpf(0)]
            rho_left = one  # rho at the left edge of the next panel
            for k in range(1, u_max):
                prev = panels[-1]
                c = mp.mpf(2 * k + 1) / 2
                a = [mp.mpf(0)] * (terms + 1)
                for j in range(terms):
                    a[j + 1] = -(prev[j] + j * a[j]) / (c * (j + 1))
                # continuity: series at y = -1/2 must equal rho(k)
                s = mp.mpf(0)
                for j in range(terms, 0, -1):
                    s = (s + a[j]) * (-half)
                a[0] = rho_left - s
                panels.append(a)
                trunc = (abs(a[terms]) + abs(a[terms - 1])) * half**terms
                errs.append(errs[-1] * mp.mpf("1.7") + 2 * trunc + rounding_floor)
                # advance the edge value: series at y = +1/2
                s = mp.mpf(0)
                for j in range(terms, -1, -1):
                    s = s * half + a[j]
                rho_left = s
            self.panels = panels
            self.errs = errs

    def _locate(self, u: float):
        k = int(math.floor(u))
        if k == u and k > 0:
            k -= 1  # integer u: evaluate at the right edge of the panel below
        k = min(k, self.u_max - 1)
        return k, self.panels[k], self.errs[k]

    def value(self, u) -> tuple[mp.mpf, mp.mpf]:
        with mp.workdps(self.dps):
            k, a, err = self._locate(u)
            y = mp.mpf(u) - (2 * k + 1) / mp.mpf(2)
            s = mp.mpf(0)
            for j in range(self.terms, -1, -1):
                s = s * y + a[j]
            return s, err

    def derivative(self, u) -> mp.mpf:
        with mp.workdps(self.dps):
            k, a, _ = self._locate(u)
            y = mp.mpf(u) - (2 * k + 1) / mp.mpf(2)
            s = mp.mpf(0)
            for j in range(self.terms, 0, -1):
                s = s * y + j * a[j]
            return s


_panel_cache: dict[tuple[int, int], _RhoPanels] = {}


def _get_panels(terms: int = _SERIES_TERMS, dps: int = _WORK_DPS) -> _RhoPanels:
    key = (terms, dps)
    if key not in _panel_cache:
        _panel_cache[key] = _RhoPanels(U_MAX, terms, dps)
    return _panel_cache[key]


def rho(u, tol: float = DEFAULT_TOL) -> BigRealWithError:
    """Dickman's rho at u in [0, 20], certified to within tol (>= 1e-12)."""
    u = float(u)
    if not 0 <= u <= U_MAX:
        raise PreconditionError(f"rho domain is [0, {U_MAX}], got {u}")
    if tol < MIN_TOL:
        raise PreconditionError(f"tol must be >= {MIN_TOL}, got {tol}")
    if u <= 1:
        return BigRealWithError(mp.mpf(1), mp.mpf(0))
    v, err = _get_panels().value(u)
    if err > tol:
        # one retry with a deeper series before giving up honestly
        v, err = _get_panels(terms=110, dps=60).value(u)
        if err > tol:
            raise PreconditionError(
                f"cannot certify rho({u}) to {tol}: reached error {float(err)}"
            )
    return BigRealWithError(v, err)


def rho_derivative(u) -> mp.mpf:
    """Series derivative of rho at u in (1, 20] (for delay-residual checks)."""
    u = float(u)
    if not 1 < u <= U_MAX:
        raise PreconditionError(f"rho_derivative domain is (1, {U_MAX}], got {u}")
    return _get_panels().derivative(u)


@dataclass(frozen=True)
class RhoSolution:
    """A sampled table of rho: rows (u, value, certified error)."""

    grid_step: float
    values: tuple[tuple[float, float, float], ...]


def rho_solution(u_max: float = U_MAX, grid_step: float = 0.25, tol: float = DEFAULT_TOL) -> RhoSolution:
    if not 0 < u_max <= U_MAX:
        raise PreconditionError(f"u_max must be in (0, {U_MAX}]")
    if grid_step <= 0:
        raise PreconditionError("grid_step must be positive")
    rows = []
    steps = int(math.floor(u_max / grid_step + 1e-9))
    for i in range(steps + 1):
        u = min(i * grid_step, u_max)
        v = rho(u, tol)
        rows.append((float(u), float(v.value), float(v.err)))
    return RhoSolution(grid_step=grid_step, values=tuple(rows))


# -- the value at 10/3 by direct quadrature ----------------------------------


@dataclass(frozen=True)
class RhoTenThirds:
    """rho(10/3) two ways, plus the one-sided bound from dropping a term.

    value         iterated-integral evaluation
    dropped_bound the same with the final (nonnegative) integral dropped,
                  hence an upper bound for the value
    marching      the panel evaluator's certified result
    agreement     |value - marching.value|
    """

    value: float
    dropped_bound: float
    marching: BigRealWithError
    agreement: float

    def below_threshold(self, threshold: float = 0.025) -> bool:
        return self.value <= threshold and self.dropped_bound <= threshold


def rho_ten_thirds_quadrature(dps: int = 30) -> RhoTenThirds:
    """Evaluate rho(10/3) by unfolding the delay integral three times.

    With u0 = 10/3: rho on (3, u0] pulls back to integrals of rho on
    [1, 2] where rho = 1 - log t, giving

        rho(u0) = 1 - log u0 + I1 - I2,
        I1 = int_1^{7/3} log t / (t+1) dt,
        I2 = int_1^{4/3} (log t / (t+1)) (log u0 - log(t+2)) dt,

    and I2 >= 0, so dropping it leaves a one-sided upper bound.
    """
    with mp.workdps(dps):
        u0 = mp.mpf(10) / 3
        t1 = 1 - mp.log(u0)
        t2 = mp.quad(lambda t: mp.log(t) / (t + 1), [1, mp.mpf(7) / 3])
        t3 = mp.quad(
            lambda t: mp.log(t) / (t + 1) * (mp.log(u0) - mp.log(t + 2)),
            [1, mp.mpf(4) / 3],
        )
        full = t1 + t2 - t3
        dropped = t1 + t2
    marching = rho(10 / 3, tol=1e-12)
    return RhoTenThirds(
        value=float(full),
        dropped_bound=float(dropped),
        marching=marching,
        agreement=float(abs(full - marching.value)),
    )


# -- exact and approximate smooth counts --------------------------------------


@dataclass(frozen=True)
class SmoothCount:
    """Psi(x, y): the number of y-smooth integers in [1, x].

    exact is None when only the density approximation was requested;
    band is the relative-error scale log(u+1)/log y that the acceptance
    checks multiply by a small constant.
    """

    x: int
    y: float
    exact: int | None
    approx: BigRealWithError
    band: float


def psi_exact(x: int, y: float, budget_mb: int | None = None) -> int:
    """Exact Psi(x, y) by dividing out every prime power <= y ... <= x."""
    x = int(x)
    if x < 1:
        raise PreconditionError(f"psi_exact needs x >= 1, got {x}")
    if y < 1:
        raise PreconditionError(f"psi_exact needs y >= 1, got {y}")
    budget = (budget_mb if budget_mb is not None else memory_budget_mb()) * 1024 * 1024
    need = 8 * (x + 1)
    if need > budget:
        raise BudgetError(
            f"psi_exact at x={x} needs {need // 2**20} MB of residuals, "
            f"budget is {budget // 2**20} MB"
        )
    if y < 2:
        return 1  # only n = 1 has no prime factor
    res = np.arange(x + 1, dtype=np.int64)
    for p in primes_upto(int(math.floor(y))):
        p = int(p)
        if p > x:
            break
        q = p
        while q <= x:
            res[q::q] //= p
            q *= p
    return int(np.count_nonzero(res[1:] == 1))


def psi_hildebrand(x, y) -> SmoothCount:
    """Density approximation x * rho(u), u = log x / log y, with its band."""
    x = int(x)
    if x < 2 or y < 2:
        raise PreconditionError("psi_hildebrand needs x >= 2 and y >= 2")
    u = math.log(x) / math.log(y)
    if u > HILDEBRAND_U_MAX:
        raise PreconditionError(
            f"density approximation is kept to u <= {HILDEBRAND_U_MAX}, got u = {u:.3f}"
        )
    approx = rho(max(u, 0.0)) * BigRealWithError.exact(x)
    band = math.log(u + 1) / math.log(y)
    return SmoothCount(x=x, y=float(y), exact=None, approx=approx, band=band)


def smooth_count(x, y, with_exact: bool = True, budget_mb: int | None = None) -> SmoothCount:
    """Psi(x, y) exactly (optional) and by the density approximation."""
    sc = psi_hildebrand(x, y)
    if not with_exact:
        return sc
    exact = psi_exact(x, y, budget_mb=budget_mb)
    return SmoothCount(x=sc.x, y=sc.y, exact=exact, approx=sc.approx, band=sc.band)
