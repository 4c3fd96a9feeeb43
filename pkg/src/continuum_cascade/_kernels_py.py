"""Pure-numpy fallback for the recursion kernels.

Mirrors _kernels.pyx: the state is the complement field g = 1 - P (see the
extension module's docstring for why).  Error-corrected summation is
obtained by running the prefix sum in extended precision (np.longdouble,
80-bit on x86 Linux) and rounding once to float64, which keeps the
accumulated error comparable to the compiled Kahan loop.  Results agree
with the compiled kernel to a few ulps, not bitwise.
"""

import numpy as np


def _finish(q: np.ndarray, out_p: np.ndarray, out_g: np.ndarray) -> float:
    np.exp(-q, out=out_p)
    out_g[:] = -np.expm1(-q)
    out_p[0] = 1.0
    out_g[0] = 0.0
    excess = max(float(out_p.max()) - 1.0, float(-out_g.min()))
    if excess > 0.0:
        np.minimum(out_p, 1.0, out=out_p)
        np.maximum(out_g, 0.0, out=out_g)
    return max(excess, 0.0)


def step_riemann(prev_g: np.ndarray, delta: float,
                 out_p: np.ndarray, out_g: np.ndarray) -> float:
    s = np.cumsum(prev_g, dtype=np.longdouble)
    s -= s[0]  # drop the y = 0 term: sum runs over indices 1..i
    q = delta * s.astype(np.float64)
    return _finish(q, out_p, out_g)


def step_trapezoid(prev_g: np.ndarray, delta: float,
                   out_p: np.ndarray, out_g: np.ndarray) -> float:
    s = np.cumsum(prev_g, dtype=np.longdouble).astype(np.float64)
    q = delta * (s - 0.5 * (prev_g[0] + prev_g))
    return _finish(q, out_p, out_g)
