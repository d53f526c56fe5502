"""Adaptive Simpson quadrature, the numerical check on closed-form integrals."""

from __future__ import annotations

from typing import Callable

import numpy as np


def adaptive_simpson(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                     tol: float = 1e-12, max_depth: int = 60) -> float:
    """Integrate a vectorized ``f`` over [lo, hi] to absolute tolerance ``tol``.

    Simpson's rule with the Richardson correction (S2 - S1)/15, refined
    level by level: every unconverged panel of a level is split at once, and
    each child inherits half of its parent's error budget.
    """
    if hi == lo:
        return 0.0
    a = np.array([lo, 0.5 * (lo + hi)])
    b = np.array([0.5 * (lo + hi), hi])
    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    eps = np.full(2, 0.5 * tol)
    total = 0.0
    for depth in range(max_depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        done = np.abs(delta) <= 15.0 * eps
        if depth == max_depth - 1:
            done[:] = True
        total += float(np.sum((left + right + delta / 15.0)[done]))
        keep = ~done
        if not keep.any():
            break
        a, m, b = a[keep], m[keep], b[keep]
        fa, fm, fb = fa[keep], fm[keep], fb[keep]
        flm, frm = flm[keep], frm[keep]
        left, right, eps = left[keep], right[keep], 0.5 * eps[keep]
        a, b = np.concatenate([a, m]), np.concatenate([m, b])
        fa, fb, fm = np.concatenate([fa, fm]), np.concatenate([fm, fb]), np.concatenate([flm, frm])
        whole = np.concatenate([left, right])
        eps = np.concatenate([eps, eps])
    return total


def sine_product(n: int, m: int) -> Callable[[np.ndarray], np.ndarray]:
    """x -> 2 sin(n pi x) sin(m pi x)."""
    return lambda x: 2.0 * np.sin(n * np.pi * x) * np.sin(m * np.pi * x)
