# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# cython: language_level=3
"""Compiled kernels: RK4 Lindblad stepping and the cyclic Jacobi eigensolver.

Semantics mirror qpulse._kernel_py exactly; this module only exists because
the stepping loop dominates runtime.
"""

import numpy as np

from libc.math cimport cos, exp, fabs, hypot, sin, sqrt

ctypedef double complex cplx

BACKEND = "compiled"


cdef inline void _mm(int n, const cplx* a, const cplx* b, cplx* c) noexcept nogil:
    cdef int i, j, k
    cdef cplx s
    for i in range(n):
        for j in range(n):
            s = 0
            for k in range(n):
                s = s + a[i * n + k] * b[k * n + j]
            c[i * n + j] = s


cdef inline void _mm_bh(int n, const cplx* a, const cplx* b, cplx* c) noexcept nogil:
    # c = a @ b^dagger
    cdef int i, j, k
    cdef cplx s
    for i in range(n):
        for j in range(n):
            s = 0
            for k in range(n):
                s = s + a[i * n + k] * b[j * n + k].conjugate()
            c[i * n + j] = s


cdef inline void _mm_ah(int n, const cplx* a, const cplx* b, cplx* c) noexcept nogil:
    # c = a^dagger @ b
    cdef int i, j, k
    cdef cplx s
    for i in range(n):
        for j in range(n):
            s = 0
            for k in range(n):
                s = s + a[k * n + i].conjugate() * b[k * n + j]
            c[i * n + j] = s


cdef double _env_sum(const double* peaks, Py_ssize_t n_peaks, double bw,
                     double trunc, double t, Py_ssize_t* lo) noexcept nogil:
    cdef double s = 0.0
    cdef double u
    cdef Py_ssize_t j = lo[0]
    while j < n_peaks and peaks[j] < t - trunc:
        j += 1
    lo[0] = j
    while j < n_peaks and peaks[j] <= t + trunc:
        u = t - peaks[j]
        s += exp(-bw * bw * u * u / 4.0)
        j += 1
    return s


cdef void _deriv(int n, const cplx* rho, const cplx* h0, const cplx* ld,
                 double sqrt_rate, cplx g,
                 const cplx* ls, const double* k1s, const double* k2s,
                 int nch, const cplx* kanti,
                 cplx* out, cplx* hbuf, cplx* t1, cplx* t2) noexcept nogil:
    cdef int i, j, ch, base
    cdef cplx gc = g.conjugate()
    cdef cplx ihalf = 1j
    cdef double w1, w2
    if sqrt_rate != 0.0 and g != 0:
        for i in range(n):
            for j in range(n):
                hbuf[i * n + j] = h0[i * n + j] + ihalf * sqrt_rate * (
                    gc * ld[i * n + j] - g * ld[j * n + i].conjugate())
    else:
        for i in range(n * n):
            hbuf[i] = h0[i]
    _mm(n, hbuf, rho, t1)
    _mm(n, rho, hbuf, t2)
    for i in range(n * n):
        out[i] = -ihalf * (t1[i] - t2[i])
    _mm(n, kanti, rho, t1)
    _mm(n, rho, kanti, t2)
    for i in range(n * n):
        out[i] = out[i] - t1[i] - t2[i]
    for ch in range(nch):
        base = ch * n * n
        w1 = 2.0 * k1s[ch]
        w2 = 2.0 * k2s[ch]
        if w1 != 0.0:
            _mm(n, ls + base, rho, t1)
            _mm_bh(n, t1, ls + base, t2)
            for i in range(n * n):
                out[i] = out[i] + w1 * t2[i]
        if w2 != 0.0:
            _mm_ah(n, ls + base, rho, t1)
            _mm(n, t1, ls + base, t2)
            for i in range(n * n):
                out[i] = out[i] + w2 * t2[i]


def evolve_steps(cplx[:, ::1] rho, const cplx[:, ::1] h0, const cplx[:, ::1] ld,
                 double sqrt_rate, cplx amp, const double[::1] peaks, double bw,
                 double carrier, double trunc, const cplx[:, :, ::1] ls,
                 const double[::1] k1s, const double[::1] k2s,
                 const cplx[:, ::1] kanti,
                 double t0, double dt, Py_ssize_t nsteps,
                 double renorm_tol=1e-12):
    """Advance rho in place by nsteps of classic RK4; returns max trace drift."""
    cdef int n = rho.shape[0]
    cdef int nch = ls.shape[0]
    cdef Py_ssize_t n_peaks = peaks.shape[0]
    cdef double pref = (bw * bw / (2.0 * np.pi)) ** 0.25
    scratch = np.empty((8, n, n), dtype=complex)
    cdef cplx[:, :, ::1] sview = scratch
    cdef cplx* k1 = &sview[0, 0, 0]
    cdef cplx* k2 = &sview[1, 0, 0]
    cdef cplx* k3 = &sview[2, 0, 0]
    cdef cplx* k4 = &sview[3, 0, 0]
    cdef cplx* work = &sview[4, 0, 0]
    cdef cplx* hbuf = &sview[5, 0, 0]
    cdef cplx* t1 = &sview[6, 0, 0]
    cdef cplx* t2 = &sview[7, 0, 0]
    cdef cplx* r = &rho[0, 0]
    cdef const cplx* ph0 = &h0[0, 0]
    cdef const cplx* pld = &ld[0, 0]
    cdef const cplx* pls = NULL
    cdef const double* pk1 = NULL
    cdef const double* pk2 = NULL
    if nch > 0:
        pls = &ls[0, 0, 0]
        pk1 = &k1s[0]
        pk2 = &k2s[0]
    cdef const cplx* pka = &kanti[0, 0]
    cdef const double* ppk = NULL
    if n_peaks > 0:
        ppk = &peaks[0]
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t i
    cdef int a, b
    cdef double t, th, tf, env, tr, dev, drift = 0.0
    cdef double half = dt / 2.0
    cdef cplx g1, g2, g3, phase
    cdef cplx avg
    with nogil:
        for i in range(nsteps):
            t = t0 + i * dt
            th = t + half
            tf = t + dt
            env = _env_sum(ppk, n_peaks, bw, trunc, t, &lo)
            g1 = amp * pref * env * (cos(carrier * t) - 1j * sin(carrier * t))
            env = _env_sum(ppk, n_peaks, bw, trunc, th, &lo)
            g2 = amp * pref * env * (cos(carrier * th) - 1j * sin(carrier * th))
            env = _env_sum(ppk, n_peaks, bw, trunc, tf, &lo)
            g3 = amp * pref * env * (cos(carrier * tf) - 1j * sin(carrier * tf))

            _deriv(n, r, ph0, pld, sqrt_rate, g1, pls, pk1, pk2, nch, pka,
                   k1, hbuf, t1, t2)
            for a in range(n * n):
                work[a] = r[a] + half * k1[a]
            _deriv(n, work, ph0, pld, sqrt_rate, g2, pls, pk1, pk2, nch, pka,
                   k2, hbuf, t1, t2)
            for a in range(n * n):
                work[a] = r[a] + half * k2[a]
            _deriv(n, work, ph0, pld, sqrt_rate, g2, pls, pk1, pk2, nch, pka,
                   k3, hbuf, t1, t2)
            for a in range(n * n):
                work[a] = r[a] + dt * k3[a]
            _deriv(n, work, ph0, pld, sqrt_rate, g3, pls, pk1, pk2, nch, pka,
                   k4, hbuf, t1, t2)
            for a in range(n * n):
                r[a] = r[a] + (dt / 6.0) * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a])
            # hermitize, then renormalize the trace if it drifted
            for a in range(n):
                r[a * n + a] = r[a * n + a].real
                for b in range(a + 1, n):
                    avg = (r[a * n + b] + r[b * n + a].conjugate()) / 2.0
                    r[a * n + b] = avg
                    r[b * n + a] = avg.conjugate()
            tr = 0.0
            for a in range(n):
                tr += r[a * n + a].real
            dev = fabs(tr - 1.0)
            if dev > drift:
                drift = dev
            if dev > renorm_tol:
                for a in range(n * n):
                    r[a] = r[a] / tr
    return drift


def jacobi_eigh(a, double tol=1e-12, int max_sweeps=100):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, unitary V with eigenvector columns).
    """
    am = np.array(a, dtype=complex, order="C")
    cdef int n = am.shape[0]
    vm = np.eye(n, dtype=complex)
    if n == 1:
        return np.array([am[0, 0].real]), vm
    am = (am + am.conj().T) / 2.0
    cdef double scale = max(1.0, float(np.max(np.abs(am))))
    cdef double thresh = tol * scale
    cdef cplx[:, ::1] A = am
    cdef cplx[:, ::1] V = vm
    cdef int p, q, i, sweep
    cdef double mag, alpha, beta, tau, tt, c, s, off
    cdef cplx apq, phase, sp, spc, xp, xq
    cdef bint converged = False
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if mag > off:
                    off = mag
                if mag <= thresh or mag < 1e-300:
                    continue
                phase = apq / mag
                alpha = A[p, p].real
                beta = A[q, q].real
                tau = (beta - alpha) / (2.0 * mag)
                if fabs(tau) > 1e150:
                    tt = 1.0 / (2.0 * tau)
                else:
                    tt = (1.0 if tau >= 0 else -1.0) / (fabs(tau) + hypot(1.0, tau))
                c = 1.0 / sqrt(1.0 + tt * tt)
                s = tt * c
                sp = s * phase
                spc = s * phase.conjugate()
                for i in range(n):
                    xp = A[i, p]
                    xq = A[i, q]
                    A[i, p] = c * xp - spc * xq
                    A[i, q] = sp * xp + c * xq
                for i in range(n):
                    xp = A[p, i]
                    xq = A[q, i]
                    A[p, i] = c * xp - sp * xq
                    A[q, i] = spc * xp + c * xq
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                A[p, q] = 0.0
                A[q, p] = 0.0
                for i in range(n):
                    xp = V[i, p]
                    xq = V[i, q]
                    V[i, p] = c * xp - spc * xq
                    V[i, q] = sp * xp + c * xq
        if off <= thresh:
            converged = True
            break
    if not converged:
        raise RuntimeError("jacobi eigensolver failed to converge")
    w = np.diag(am).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], vm[:, order]
