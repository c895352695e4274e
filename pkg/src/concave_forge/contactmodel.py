"""Numeric checks of the standard-model contact form on its explicit charts.

Near the binding the chart ``phi(r, mu, lam) = (x, y, t)`` with
``x = K - r^2``, ``y = lam - mu``, ``t = mu`` pulls ``K dt + x dy`` back to
``(K - r^2) dlam + r^2 dmu``. The volume coefficient of ``alpha ^ dalpha``
(in ``dr ^ dmu ^ dlam``) and the Reeb residuals are derived symbolically
once and evaluated on grids with numpy.

On the collar the form is ``K dt + x dy`` and ``alpha ^ dalpha = K dt^dx^dy``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
import sympy as sp

TOLERANCE = 1e-12
_R, _MU, _LAM, _K = sp.symbols("r mu lam K", real=True)


_T, _X, _Y = sp.symbols("t x y", real=True)


def _wedge_coefficient(a, coords):
    """Coefficient of ``alpha ^ dalpha`` for ``alpha = sum a_i du_i`` (left unsimplified)."""
    (A, B, C), (u, v, w) = a, coords
    return (
        A * (sp.diff(C, v) - sp.diff(B, w))
        - B * (sp.diff(C, u) - sp.diff(A, w))
        + C * (sp.diff(B, u) - sp.diff(A, v))
    )


@lru_cache(maxsize=1)
def _symbolic():
    x = _K - _R**2
    y = _LAM - _MU
    t = _MU
    coords = (_R, _MU, _LAM)
    # pullback of K dt + x dy: components along (dr, dmu, dlam)
    a = [sp.expand(_K * sp.diff(t, v) + x * sp.diff(y, v)) for v in coords]
    A, B, C = a
    # alpha ^ dalpha = coeff * dr ^ dmu ^ dlam
    coeff = _wedge_coefficient(a, coords)
    # dalpha(u, v) = u^T W v
    W = [[sp.diff(a[j], ui) - sp.diff(a[i], uj) for j, uj in enumerate(coords)] for i, ui in enumerate(coords)]
    return a, coeff, W


def pulled_back_form():
    """Symbolic components of the pulled-back form along ``dr, dmu, dlam``."""
    return tuple(_symbolic()[0])


def contact_coefficient_expr():
    """Simplified coefficient; it equals ``2 K r``."""
    return sp.factor(_symbolic()[1])


@lru_cache(maxsize=1)
def _collar():
    # alpha = K dt + x dy in coordinates (t, x, y)
    coeff = _wedge_coefficient((_K, sp.Integer(0), _X), (_T, _X, _Y))
    return sp.lambdify((_X, _K), coeff, "numpy")


@lru_cache(maxsize=1)
def _numeric():
    a, coeff, W = _symbolic()
    args = (_R, _MU, _LAM, _K)
    f_coeff = sp.lambdify(args, coeff, "numpy")
    f_a = [sp.lambdify(args, e, "numpy") for e in a]
    f_w = [[sp.lambdify(args, e, "numpy") for e in row] for row in W]
    return f_coeff, f_a, f_w


def _eval(f, r, mu, lam, K) -> np.ndarray:
    return np.broadcast_to(np.asarray(f(r, mu, lam, K), dtype=float), r.shape)


def _check_k(K: float) -> float:
    K = float(K)
    if not (K > 0 and math.isfinite(K)):
        raise ValueError(f"K must be a positive finite number, got {K}")
    return K


def _check_grid(n: int) -> int:
    if int(n) < 2:
        raise ValueError("grid needs at least 2 samples per axis")
    return int(n)


def radial_samples(K: float, n: int) -> np.ndarray:
    """``n`` points strictly inside ``(0, sqrt K)``."""
    return np.linspace(0.0, math.sqrt(K), n + 2)[1:-1]


def _grid(K: float, n: int):
    r = radial_samples(K, n)
    ang = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    return np.meshgrid(r, ang, ang, indexing="ij")


def binding_coefficients(K: float, r_samples) -> np.ndarray:
    K = _check_k(K)
    r = np.asarray(r_samples, dtype=float)
    if r.size == 0:
        raise ValueError("no radial samples")
    if np.any(r <= 0) or np.any(r >= math.sqrt(K)):
        raise ValueError(f"radial samples must lie in (0, sqrt(K)) = (0, {math.sqrt(K):.6g})")
    z = np.zeros_like(r)
    return _eval(_numeric()[0], r, z, z, K)


def binding_contact_check(K: float, r_samples) -> float:
    """Minimum of the ``alpha ^ dalpha`` coefficient over the samples."""
    return float(binding_coefficients(K, r_samples).min())


def binding_relative_error(K: float, grid: int = 64) -> float:
    """Max relative deviation of the coefficient from ``2 r K`` on a full grid."""
    K = _check_k(K)
    r, mu, lam = _grid(K, _check_grid(grid))
    got = _eval(_numeric()[0], r, mu, lam, K)
    want = 2.0 * r * K
    return float(np.max(np.abs(got - want) / want))


def reeb_residuals(K: float, grid: int = 64) -> float:
    """Max of ``|alpha(R) - 1|`` and ``|dalpha(R, .)|`` for ``R = (d_mu + d_lam)/K``.

    The form and its differential are evaluated pointwise in floating point
    and contracted with ``R`` numerically.
    """
    K = _check_k(K)
    r, mu, lam = _grid(K, _check_grid(grid))
    _, f_a, f_w = _numeric()
    reeb = (0.0, *reeb_components(K))
    comps = [_eval(f, r, mu, lam, K) for f in f_a]
    alpha_r = sum(c * v for c, v in zip(comps, reeb))
    worst = float(np.abs(alpha_r - 1.0).max())
    for j in range(3):
        col = sum(reeb[i] * _eval(f_w[i][j], r, mu, lam, K) for i in range(3))
        worst = max(worst, float(np.abs(col).max()))
    return worst


def reeb_components(K: float) -> tuple[float, float]:
    K = _check_k(K)
    return 1.0 / K, 1.0 / K


def collar_contact_check(K: float, x_range=(1e-3, None), samples: int = 64) -> float:
    """Coefficient of ``alpha ^ dalpha`` in ``dt^dx^dy`` on the collar (it is ``K``)."""
    K = _check_k(K)
    lo, hi = x_range
    hi = K if hi is None else float(hi)
    lo = float(lo)
    if lo <= 0:
        raise ValueError("the collar coordinate x must stay positive")
    if hi < lo:
        raise ValueError("empty x range")
    x = np.linspace(lo, hi, samples)
    coeff = np.broadcast_to(np.asarray(_collar()(x, K), dtype=float), x.shape)
    return float(coeff.min())


@dataclass(frozen=True)
class ContactChartReport:
    K: float
    grid: int
    max_reeb_residual: float
    min_contact_coefficient: float
    max_relative_error: float
    collar_coefficient: float
    reeb_mu: float
    reeb_lambda: float
    scope: str = "binding and collar charts only; the interpolation region is not evaluated"

    @property
    def ok(self) -> bool:
        return (
            self.max_reeb_residual <= TOLERANCE
            and self.max_relative_error <= TOLERANCE
            and self.min_contact_coefficient > 0
            and self.collar_coefficient > 0
            and self.reeb_mu > 0
            and self.reeb_lambda > 0
        )

    def lines(self) -> list[str]:
        d = asdict(self)
        d["ok"] = self.ok
        return [f"{k}={v}" for k, v in d.items()]

    def as_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def contact_report(K: float, grid: int = 64) -> ContactChartReport:
    K = _check_k(K)
    grid = _check_grid(grid)
    mu_c, lam_c = reeb_components(K)
    return ContactChartReport(
        K=K,
        grid=grid,
        max_reeb_residual=reeb_residuals(K, grid),
        min_contact_coefficient=binding_contact_check(K, radial_samples(K, grid)),
        max_relative_error=binding_relative_error(K, grid),
        collar_coefficient=collar_contact_check(K),
        reeb_mu=mu_c,
        reeb_lambda=lam_c,
    )
