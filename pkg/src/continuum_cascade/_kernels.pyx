# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loop of the height-distribution recursion.

The iterated state is the complement field g = 1 - P.  Writing the
recursion P_n(x) = exp[-x + integral P_{n-1}] in terms of g gives

    Q_i = quadrature of g_{n-1} over [0, x_i]
    P_n(x_i) = exp(-Q_i),      g_n(x_i) = -expm1(-Q_i)

which is algebraically identical but numerically essential: stored as P,
the region behind the front saturates at 1 - 2^-53 and the unrepresentable
tail of g acts as a cutoff that freezes the front's logarithmic correction
near generation ~400 and biases the late-time velocity by ~+2e-3 (a
Brunet-Derrida cutoff effect; the magnitude matches pi^2/(2e)/ln^2(eps)).
In g form the tail stays resolved down to exp(-708) and the continuum
asymptotics survive to n ~ 10^4 and beyond.

Riemann mode sums g at indices 1..i (the y = 0 endpoint is omitted; g(0)
is 0 anyway).  Trapezoid mode subtracts half the endpoint values.  The
prefix sum is Kahan-compensated: at delta = 0.001 it accumulates ~1e5
terms per generation over thousands of generations.

Both kernels fill the exposed probability array and the complement array
in one pass, branching on Q so each value comes from a single libm call
at full relative precision.  The return value is the largest clamp applied
to keep P in [0, 1], so the caller can tell last-ulp jitter from a real
invariant violation.
"""

from libc.math cimport exp, expm1

DEF LN2 = 0.6931471805599453


cdef inline double _emit(double q, double[::1] out_p, double[::1] out_g,
                         Py_ssize_t i) nogil:
    cdef double p, g, excess = 0.0
    if q < LN2:
        g = -expm1(-q)
        if g < 0.0:
            excess = -g
            g = 0.0
        p = 1.0 - g
    else:
        p = exp(-q)
        if p > 1.0:
            excess = p - 1.0
            p = 1.0
        g = 1.0 - p
    out_p[i] = p
    out_g[i] = g
    return excess


def step_riemann(const double[::1] prev_g, double delta,
                 double[::1] out_p, double[::1] out_g):
    cdef Py_ssize_t i, m = prev_g.shape[0]
    cdef double s = 0.0, comp = 0.0, y, t, e, excess = 0.0
    out_p[0] = 1.0
    out_g[0] = 0.0
    for i in range(1, m):
        # Kahan update: s + comp tracks sum(prev_g[1..i]) to ~1 ulp
        y = prev_g[i] - comp
        t = s + y
        comp = (t - s) - y
        s = t
        e = _emit(delta * s, out_p, out_g, i)
        if e > excess:
            excess = e
    return excess


def step_trapezoid(const double[::1] prev_g, double delta,
                   double[::1] out_p, double[::1] out_g):
    cdef Py_ssize_t i, m = prev_g.shape[0]
    cdef double s, comp = 0.0, y, t, e, excess = 0.0
    s = prev_g[0]
    out_p[0] = 1.0
    out_g[0] = 0.0
    for i in range(1, m):
        y = prev_g[i] - comp
        t = s + y
        comp = (t - s) - y
        s = t
        # trapezoid weights: full sum minus half the endpoints
        e = _emit(delta * (s - 0.5 * (prev_g[0] + prev_g[i])), out_p, out_g, i)
        if e > excess:
            excess = e
    return excess
