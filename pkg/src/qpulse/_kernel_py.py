"""Pure-numpy fallback for the integration and eigensolver kernels.

Mirrors the compiled extension `qpulse._kernel` exactly; selected at import
time when the extension is unavailable (or QPULSE_BACKEND=python).
"""

import math

import numpy as np

BACKEND = "python"


def _drive_sum(peaks, bw, trunc, t):
    """Envelope sum and its time-derivative factor over active pulses."""
    lo = int(np.searchsorted(peaks, t - trunc, side="left"))
    hi = int(np.searchsorted(peaks, t + trunc, side="right"))
    if lo == hi:
        return 0.0
    u = t - peaks[lo:hi]
    pref = (bw * bw / (2.0 * math.pi)) ** 0.25
    return float(np.sum(pref * np.exp(-bw * bw * u * u / 4.0)))


def _g_value(peaks, bw, carrier, trunc, amp, t):
    env = _drive_sum(peaks, bw, trunc, t)
    if env == 0.0:
        return 0.0 + 0.0j
    return amp * env * complex(math.cos(carrier * t), -math.sin(carrier * t))


def _deriv(rho, h0, ld, ldh, sqrt_rate, g, ls, lhs, k1s, k2s, kanti):
    """Right-hand side of the master equation at drive amplitude g."""
    if sqrt_rate != 0.0 and g != 0.0:
        h = h0 + 1j * sqrt_rate * (np.conj(g) * ld - g * ldh)
    else:
        h = h0
    out = -1j * (h @ rho - rho @ h)
    out -= kanti @ rho + rho @ kanti
    for k in range(len(ls)):
        if k1s[k] != 0.0:
            out += (2.0 * k1s[k]) * (ls[k] @ rho @ lhs[k])
        if k2s[k] != 0.0:
            out += (2.0 * k2s[k]) * (lhs[k] @ rho @ ls[k])
    return out


def evolve_steps(rho, h0, ld, sqrt_rate, amp, peaks, bw, carrier, trunc,
                 ls, k1s, k2s, kanti, t0, dt, nsteps, renorm_tol=1e-12):
    """Advance rho in place by nsteps of classic RK4; returns max trace drift.

    After every step the state is hermitized and, if the trace has drifted
    beyond renorm_tol, renormalized.
    """
    ldh = ld.conj().T
    lhs = [m.conj().T for m in ls]
    drift = 0.0
    half = dt / 2.0
    for i in range(nsteps):
        t = t0 + i * dt
        g1 = _g_value(peaks, bw, carrier, trunc, amp, t)
        g2 = _g_value(peaks, bw, carrier, trunc, amp, t + half)
        g3 = _g_value(peaks, bw, carrier, trunc, amp, t + dt)
        k1 = _deriv(rho, h0, ld, ldh, sqrt_rate, g1, ls, lhs, k1s, k2s, kanti)
        k2 = _deriv(rho + half * k1, h0, ld, ldh, sqrt_rate, g2, ls, lhs, k1s, k2s, kanti)
        k3 = _deriv(rho + half * k2, h0, ld, ldh, sqrt_rate, g2, ls, lhs, k1s, k2s, kanti)
        k4 = _deriv(rho + dt * k3, h0, ld, ldh, sqrt_rate, g3, ls, lhs, k1s, k2s, kanti)
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        np.copyto(rho, (rho + rho.conj().T) / 2.0)
        tr = np.trace(rho).real
        dev = abs(tr - 1.0)
        if dev > drift:
            drift = dev
        if dev > renorm_tol:
            rho /= tr
    return drift


def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, unitary V with columns as eigenvectors).
    The pivot (p, q) is annihilated by a complex plane rotation; sweeps stop
    once every off-diagonal magnitude falls below tol * max(1, scale).
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n == 1:
        return np.array([a[0, 0].real]), v
    a = (a + a.conj().T) / 2.0
    scale = max(1.0, float(np.max(np.abs(a))))
    thresh = tol * scale
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag > off:
                    off = mag
                if mag <= thresh or mag < 1e-300:
                    continue
                phase = apq / mag
                alpha = a[p, p].real
                beta = a[q, q].real
                tau = (beta - alpha) / (2.0 * mag)
                if abs(tau) > 1e150:
                    tt = 1.0 / (2.0 * tau)
                else:
                    tt = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + tt * tt)
                s = tt * c
                sp = s * phase
                spc = s * phase.conjugate()
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - spc * col_q
                a[:, q] = sp * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - sp * row_q
                a[q, :] = spc * row_p + c * row_q
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                a[p, q] = 0.0
                a[q, p] = 0.0
                col_p = v[:, p].copy()
                col_q = v[:, q].copy()
                v[:, p] = c * col_p - spc * col_q
                v[:, q] = sp * col_p + c * col_q
        if off <= thresh:
            break
    else:
        raise RuntimeError("jacobi eigensolver failed to converge")
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
