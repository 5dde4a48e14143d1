# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# cython: language_level=3
"""Compiled integration kernels.

Mirror of ``monosweep._pykernels`` (same Dormand-Prince 5(4) scheme, same
controller constants, same entry points); see that module for the system
encodings.  The stepping loop and all right-hand sides run without the GIL.
"""

import numpy as np

from .errors import MaxStepsExceeded, StepUnderflow

from libc.math cimport cos, exp, fabs, fmax, fmin, pow, sin, sqrt, tanh

ctypedef double complex cplx

FAMILY_CLASS1 = 1
FAMILY_CLASS2 = 2

SHAPE_SINH = 0
SHAPE_LINEAR = 1
SHAPE_CUBIC = 2

SEG_LINE = 0
SEG_ARC = 1

DEF MAXN = 64

cdef double C2 = 1.0 / 5.0
cdef double C3 = 3.0 / 10.0
cdef double C4 = 4.0 / 5.0
cdef double C5 = 8.0 / 9.0
cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0

cdef double SAFETY = 0.9
cdef double MIN_FACTOR = 0.2
cdef double MAX_FACTOR = 5.0
cdef double EPS16 = 16.0 * 2.220446049250313e-16


cdef inline double _cmag(cplx z) noexcept nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef inline double _sech(double x) noexcept nogil:
    cdef double e = exp(-fabs(x))
    return 2.0 * e / (1.0 + e * e)


cdef class _System:
    cdef int n

    cdef void rhs(self, double s, cplx* y, cplx* out) noexcept nogil:
        pass


cdef class _TwoLevel(_System):
    cdef int family, shape
    cdef double e0t, e1t, v0t

    def __init__(self, int family, int shape, double e0t, double e1t, double v0t):
        self.n = 2
        self.family = family
        self.shape = shape
        self.e0t = e0t
        self.e1t = e1t
        self.v0t = v0t

    cdef void rhs(self, double u, cplx* y, cplx* out) noexcept nogil:
        cdef double eps, v, yy, dy, one_y2, sech
        if self.shape == 0:
            sech = _sech(u)
            eps = self.e0t * sech + self.e1t * tanh(u)
            v = self.v0t if self.family == 1 else self.v0t * sech
        else:
            if self.shape == 1:
                yy = u
                dy = 1.0
            else:
                yy = u + u * u * u
                dy = 1.0 + 3.0 * u * u
            one_y2 = 1.0 + yy * yy
            eps = (self.e0t + self.e1t * yy) / one_y2 * dy
            if self.family == 1:
                v = self.v0t / sqrt(one_y2) * dy
            else:
                v = self.v0t / one_y2 * dy
        out[0] = -1j * (eps * y[0] + v * y[1])
        out[1] = -1j * (v * y[0] - eps * y[1])


cdef class _MultiLevel(_System):
    cdef double e1t
    cdef double[::1] vts

    def __init__(self, double e1t, vts):
        self.vts = np.ascontiguousarray(vts, dtype=np.float64)
        self.n = self.vts.shape[0] + 1
        self.e1t = e1t

    cdef void rhs(self, double u, cplx* y, cplx* out) noexcept nogil:
        cdef int j
        cdef cplx acc = self.e1t * tanh(u) * y[0]
        for j in range(1, self.n):
            acc = acc + self.vts[j - 1] * y[j]
        out[0] = -1j * acc
        for j in range(1, self.n):
            out[j] = -1j * (self.vts[j - 1] * y[0])


cdef class _HypSegment(_System):
    cdef cplx alpha_beta, apb1, gamma
    cdef int kind
    cdef cplx za, tau, center
    cdef double radius, th0, sigma

    def __init__(self, alpha, beta, gamma, int kind, za, zb, center,
                 double radius, double th0, double th1):
        self.n = 4
        self.alpha_beta = alpha * beta
        self.apb1 = 1.0 + alpha + beta
        self.gamma = gamma
        self.kind = kind
        if kind == 0:
            self.za = za
            self.tau = (zb - za) / abs(zb - za)
        else:
            self.center = center
            self.radius = radius
            self.th0 = th0
            self.sigma = 1.0 if th1 >= th0 else -1.0

    cdef void rhs(self, double s, cplx* y, cplx* out) noexcept nogil:
        cdef cplx z, dz, den, a, b
        cdef double th
        if self.kind == 0:
            z = self.za + s * self.tau
            dz = self.tau
        else:
            th = self.th0 + self.sigma * s / self.radius
            dz = cos(th) + 1j * sin(th)
            z = self.center + self.radius * dz
            dz = 1j * self.sigma * dz
        den = z * (1.0 - z)
        a = self.alpha_beta / den
        b = (self.apb1 * z - self.gamma) / den
        out[0] = dz * y[2]
        out[1] = dz * y[3]
        out[2] = dz * (a * y[0] + b * y[2])
        out[3] = dz * (a * y[1] + b * y[3])


cdef class _Okubo(_System):
    cdef cplx[:, ::1] amat

    def __init__(self, amat):
        self.amat = np.ascontiguousarray(amat, dtype=np.complex128)
        self.n = self.amat.shape[0]

    cdef void rhs(self, double z, cplx* d, cplx* out) noexcept nogil:
        cdef int i, j
        cdef cplx acc
        for i in range(self.n):
            acc = 0
            for j in range(self.n):
                acc = acc + self.amat[i, j] * d[j]
            out[i] = acc / (z - 1j) if i == 0 else acc / (z + 1j)


cdef double _err_norm(cplx* err, cplx* y, cplx* y5, int n, double rtol,
                      double atol) noexcept nogil:
    cdef int i
    cdef double sc, acc = 0.0, m
    for i in range(n):
        sc = atol + rtol * fmax(_cmag(y[i]), _cmag(y5[i]))
        m = _cmag(err[i]) / sc
        acc += m * m
    return sqrt(acc / n)


cdef double _initial_step(_System sys, double s0, double direction, double span,
                          cplx* y, cplx* f0, double rtol,
                          double atol) noexcept nogil:
    cdef int i, n = sys.n
    cdef double sc, d0 = 0.0, d1 = 0.0, d2 = 0.0, h0, h1, m
    cdef cplx y1[MAXN]
    cdef cplx f1[MAXN]
    for i in range(n):
        sc = atol + rtol * _cmag(y[i])
        m = _cmag(y[i]) / sc
        d0 += m * m
        m = _cmag(f0[i]) / sc
        d1 += m * m
    d0 = sqrt(d0 / n)
    d1 = sqrt(d1 / n)
    if d0 < 1e-5 or d1 < 1e-5:
        # Nearly stationary start: scale the probe step with the span so that
        # windows many decades wide do not begin at an unreachable step size.
        h0 = 1e-6 * fmax(1.0, 1e-3 * span)
    else:
        h0 = 0.01 * d0 / d1
    h0 = fmin(h0, span)
    for i in range(n):
        y1[i] = y[i] + direction * h0 * f0[i]
    sys.rhs(s0 + direction * h0, y1, f1)
    for i in range(n):
        sc = atol + rtol * _cmag(y[i])
        m = _cmag(f1[i] - f0[i]) / sc
        d2 += m * m
    d2 = sqrt(d2 / n) / h0
    if fmax(d1, d2) <= 1e-15:
        h1 = fmax(1e-6 * fmax(1.0, 1e-3 * span), h0 * 1e-3)
    else:
        h1 = pow(0.01 / fmax(d1, d2), 0.2)
    return fmin(fmin(100.0 * h0, h1), span)


cdef int _dp5(_System sys, double s0, double s1, cplx* y, double rtol,
              double atol, double h_init, long max_steps, bint track_norm,
              double* norm_dev, long* steps_out) noexcept nogil:
    """Advance y in place from s0 to s1.  Returns 0, 1 (max steps) or 2 (underflow)."""
    cdef int i, n = sys.n
    cdef double span = fabs(s1 - s0)
    cdef double direction = 1.0 if s1 >= s0 else -1.0
    cdef double s = 0.0, h, hd, sa, err, factor
    cdef double norm0 = 0.0, nrm
    cdef long steps = 0
    cdef cplx k1[MAXN]
    cdef cplx k2[MAXN]
    cdef cplx k3[MAXN]
    cdef cplx k4[MAXN]
    cdef cplx k5[MAXN]
    cdef cplx k6[MAXN]
    cdef cplx k7[MAXN]
    cdef cplx y5[MAXN]
    cdef cplx ytmp[MAXN]
    cdef cplx errv[MAXN]

    norm_dev[0] = 0.0
    steps_out[0] = 0
    if span == 0.0:
        return 0

    sys.rhs(s0, y, k1)
    if h_init > 0.0:
        h = fmin(h_init, span)
    else:
        h = _initial_step(sys, s0, direction, span, y, k1, rtol, atol)

    if track_norm:
        for i in range(n):
            norm0 += y[i].real * y[i].real + y[i].imag * y[i].imag

    while s < span:
        if steps >= max_steps:
            steps_out[0] = steps
            return 1
        # Underflow means the step can no longer advance the arc position.
        if h < fmax(EPS16 * s, 5e-292):
            steps_out[0] = steps
            return 2
        h = fmin(h, span - s)
        steps += 1
        hd = direction * h
        sa = s0 + direction * s

        for i in range(n):
            ytmp[i] = y[i] + hd * (A21 * k1[i])
        sys.rhs(sa + C2 * hd, ytmp, k2)
        for i in range(n):
            ytmp[i] = y[i] + hd * (A31 * k1[i] + A32 * k2[i])
        sys.rhs(sa + C3 * hd, ytmp, k3)
        for i in range(n):
            ytmp[i] = y[i] + hd * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
        sys.rhs(sa + C4 * hd, ytmp, k4)
        for i in range(n):
            ytmp[i] = y[i] + hd * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i]
                                   + A54 * k4[i])
        sys.rhs(sa + C5 * hd, ytmp, k5)
        for i in range(n):
            ytmp[i] = y[i] + hd * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i]
                                   + A64 * k4[i] + A65 * k5[i])
        sys.rhs(sa + hd, ytmp, k6)
        for i in range(n):
            y5[i] = y[i] + hd * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i]
                                 + B5 * k5[i] + B6 * k6[i])
        sys.rhs(sa + hd, y5, k7)

        for i in range(n):
            errv[i] = hd * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                            + E6 * k6[i] + E7 * k7[i])
        err = _err_norm(errv, y, y5, n, rtol, atol)

        if err <= 1.0:
            s += h
            for i in range(n):
                y[i] = y5[i]
                k1[i] = k7[i]
            if track_norm:
                nrm = 0.0
                for i in range(n):
                    nrm += y[i].real * y[i].real + y[i].imag * y[i].imag
                if fabs(nrm - norm0) > norm_dev[0]:
                    norm_dev[0] = fabs(nrm - norm0)
            if err == 0.0:
                factor = MAX_FACTOR
            else:
                factor = fmin(MAX_FACTOR, fmax(MIN_FACTOR, SAFETY * pow(err, -0.2)))
            h *= factor
        elif err != err:
            # Singular right-hand side inside the trial step (NaN estimate).
            h *= MIN_FACTOR
        else:
            h *= fmax(MIN_FACTOR, fmin(1.0, SAFETY * pow(err, -0.2)))

    steps_out[0] = steps
    return 0


cdef _run(_System sys, double s0, double s1, y0, double rtol, double atol,
          double h0, long max_steps, bint track_norm):
    cdef cplx ybuf[MAXN]
    cdef int i, n = sys.n
    cdef double norm_dev = 0.0
    cdef long steps = 0
    cdef int code
    if n > MAXN:
        raise ValueError(f"system size {n} exceeds the compiled limit {MAXN}")
    yv = np.ascontiguousarray(y0, dtype=np.complex128)
    cdef cplx[::1] ym = yv
    for i in range(n):
        ybuf[i] = ym[i]
    with nogil:
        code = _dp5(sys, s0, s1, ybuf, rtol, atol, h0, max_steps, track_norm,
                    &norm_dev, &steps)
    if code == 1:
        raise MaxStepsExceeded(f"no convergence within {max_steps} steps")
    if code == 2:
        raise StepUnderflow("step size underflow")
    out = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] om = out
    for i in range(n):
        om[i] = ybuf[i]
    return out, steps, norm_dev


def two_level(int family, int shape, double e0t, double e1t, double v0t,
              double u0, double u1, y0, double rtol, double atol, double h0,
              long max_steps, bint track_norm=True):
    """Propagate i dpsi/du = (T H(u)) psi for a two-level sweep model."""
    return _run(_TwoLevel(family, shape, e0t, e1t, v0t), u0, u1, y0, rtol,
                atol, h0, max_steps, track_norm)


def multi_level(double e1t, vts, double u0, double u1, y0, double rtol,
                double atol, double h0, long max_steps, bint track_norm=True):
    """Propagate the N-level bordered model: H00 = E1 T tanh(u), H0j = Vj T."""
    return _run(_MultiLevel(e1t, vts), u0, u1, y0, rtol, atol, h0, max_steps,
                track_norm)


def multi_level_samples(double e1t, vts, double u0, u_eval, y0, double rtol,
                        double atol, double h0, long max_steps):
    """States of the N-level model at each u in ``u_eval`` (monotone from u0)."""
    sys = _MultiLevel(e1t, vts)
    states = np.empty((len(u_eval), sys.n), dtype=np.complex128)
    y = np.ascontiguousarray(y0, dtype=np.complex128)
    cdef long steps = 0, st
    ua = u0
    for i, ub in enumerate(u_eval):
        y, st, _ = _run(sys, ua, ub, y, rtol, atol, h0, max_steps, False)
        steps += st
        states[i] = y
        ua = ub
    return states, steps


def hyp_frame_segment(alpha, beta, gamma, int kind, za, zb, center,
                      double radius, double th0, double th1, frame,
                      double rtol, double atol, double h0, long max_steps):
    """Transport a 2x2 hypergeometric solution frame along one contour segment."""
    cdef double length
    if kind == 0:
        length = abs(complex(zb) - complex(za))
    else:
        length = radius * fabs(th1 - th0)
    sys = _HypSegment(complex(alpha), complex(beta), complex(gamma), kind,
                      complex(za), complex(zb), complex(center), radius, th0, th1)
    y0 = np.asarray(frame, dtype=np.complex128).reshape(4)
    y, steps, _ = _run(sys, 0.0, length, y0, rtol, atol, h0, max_steps, False)
    return y.reshape(2, 2), steps


def okubo_line(amat, double z0, double z1, d0, double rtol, double atol,
               double h0, long max_steps):
    """Integrate (z I - C) d' = A d along the real z axis, C = diag(i,-i,...,-i)."""
    y, steps, _ = _run(_Okubo(amat), z0, z1, d0, rtol, atol, h0, max_steps, False)
    return y, steps
