"""Exact integer matrix kernels used by the homological bookkeeping.

Matrices are numpy arrays. They start as int64 and are promoted to
``dtype=object`` (Python integers) as soon as an update could leave the
int64 range, so every result is exact.
"""

from __future__ import annotations

import numpy as np

_SAFE = 1 << 62


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.abs(a).max())


def _exact(a: np.ndarray) -> np.ndarray:
    return a if a.dtype == object else a.astype(object)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def vector(coords) -> np.ndarray:
    out = np.array(list(coords), dtype=np.int64) if coords else np.zeros(0, dtype=np.int64)
    if out.size and any(abs(int(c)) >= _SAFE for c in coords):
        out = np.array([int(c) for c in coords], dtype=object)
    return out


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return _exact(a).dot(_exact(b))
    inner = a.shape[-1] if a.ndim else 1
    if _maxabs(a) * _maxabs(b) * max(inner, 1) >= _SAFE:
        return _exact(a).dot(_exact(b))
    return a @ b


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    if a.shape != b.shape:
        return False
    return bool(np.all(_exact(a) == _exact(b))) if (a.dtype == object or b.dtype == object) else bool(
        np.array_equal(a, b)
    )


def is_identity(a: np.ndarray) -> bool:
    return equal(a, identity(a.shape[0]))


def _support(v: np.ndarray) -> np.ndarray:
    return v.nonzero()[0]


def _fits(m: np.ndarray, a: np.ndarray, b: np.ndarray) -> bool:
    """True if ``m + outer(m @ a, b)`` style updates stay inside int64."""
    if m.dtype == object or a.dtype == object or b.dtype == object:
        return False
    mm = int(np.abs(m).max()) if m.size else 0
    return mm + mm * int(np.abs(a).sum()) * int(np.abs(b).max()) < _SAFE


def right_transvect(m: np.ndarray, c: np.ndarray, jc: np.ndarray, sign: int) -> np.ndarray:
    """Return ``m @ T`` where ``T x = x + sign * <x, c> c`` and ``jc = J c``.

    Uses ``T = I + sign * c (Jc)^T`` so only the columns in the support of
    ``Jc`` change.
    """
    cols = _support(jc)
    if cols.size == 0:
        return m
    src = _support(c)
    if _fits(m, c, jc):
        m = m.copy()
        m[:, cols] += sign * np.outer(m[:, src] @ c[src], jc[cols])
        return m
    m = _exact(m).copy()
    u = m[:, src].dot(_exact(c[src]))
    m[:, cols] += sign * np.outer(u, _exact(jc[cols]))
    return m


def left_transvect(c: np.ndarray, jc: np.ndarray, sign: int, m: np.ndarray) -> np.ndarray:
    """Return ``T @ m`` for the same ``T`` as :func:`right_transvect`."""
    rows = _support(c)
    jsup = _support(jc)
    if rows.size == 0 or jsup.size == 0:
        return m
    if _fits(m, jc, c):
        m = m.copy()
        m[rows, :] += sign * np.outer(c[rows], jc[jsup] @ m[jsup, :])
        return m
    m = _exact(m).copy()
    w = _exact(jc[jsup]).dot(m[jsup, :])
    m[rows, :] += sign * np.outer(_exact(c[rows]), w)
    return m


def matvec_sparse(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``m @ v`` touching only the columns where ``v`` is nonzero."""
    src = _support(v)
    if src.size == 0:
        return np.zeros(m.shape[0], dtype=m.dtype)
    block = m[:, src]
    vsub = v[src]
    if (
        m.dtype == object
        or v.dtype == object
        or _maxabs(block) * int(np.abs(vsub).sum()) >= _SAFE
    ):
        return _exact(block).dot(_exact(vsub))
    return block @ vsub


def to_tuple(v: np.ndarray) -> tuple[int, ...]:
    return tuple(int(x) for x in v)


def to_rows(m: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in row] for row in m]


# --- extended Euclid and lattice bases (pure Python integers) ---------------


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def xgcd_many(values: list[int]) -> tuple[int, list[int]]:
    """Return ``(g, coeffs)`` with ``sum(c*v) == g == gcd(values) >= 0``."""
    g = 0
    coeffs = [0] * len(values)
    for i, v in enumerate(values):
        g_new, s, t = xgcd(g, v)
        coeffs = [s * c for c in coeffs]
        coeffs[i] = t
        g = g_new
    return g, coeffs


def hermite_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite reduction; returns a basis of the row lattice."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    basis: list[list[int]] = []
    for col in range(ncols):
        pivot = None
        rest = []
        for r in rows:
            if r[col] == 0:
                rest.append(r)
                continue
            if pivot is None:
                pivot = r
                continue
            g, x, y = xgcd(pivot[col], r[col])
            p, q = pivot[col] // g, r[col] // g
            new_pivot = [x * u + y * v for u, v in zip(pivot, r)]
            killed = [p * v - q * u for u, v in zip(pivot, r)]
            pivot = new_pivot
            if any(killed):
                rest.append(killed)
        if pivot is not None:
            if pivot[col] < 0:
                pivot = [-v for v in pivot]
            basis.append(pivot)
        rows = [r for r in rest if any(r)]
        if not rows:
            break
    return basis
