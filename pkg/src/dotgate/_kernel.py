"""Compiled inner loop: Lindblad generator and adaptive RK 5(4) stepper.

Everything here works in angular units (rad/ps); the state vector packs the
density matrix row-major in y[0..8] plus the running decay integral in y[9].
The generator is unrolled by hand: the drive Hamiltonian touches only the
{|1>, |X>} block, the radiative dissipator is the closed form of
D[|1><X|], and the phonon dissipators use that P = -sin cos |-><+| is rank
one, so each Lindblad term reduces to a handful of scalar products.

The stepper is the Dormand-Prince embedded 5(4) pair with the standard
quartic dense-output interpolant, PI-free step control (factor clipped to
[0.2, 5], 0.9 safety) and no per-step renormalization of any kind; trace
drift is observable downstream by design.
"""

import math

import numpy as np
from numba import njit

NSTATE = 10

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 0.2, 0.3, 0.8, 8.0 / 9.0
_A21 = 0.2
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                                49.0 / 176.0, -5103.0 / 18656.0)
_A71, _A73, _A74, _A75, _A76 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                                -2187.0 / 6784.0, 11.0 / 84.0)
# 5th-order minus embedded 4th-order weights
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                                -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)
# dense-output weights
_D1 = -12715105075.0 / 11282082432.0
_D3 = 87487479700.0 / 32700410799.0
_D4 = -10690763975.0 / 1880347072.0
_D5 = 701980252875.0 / 199316789632.0
_D6 = -1453857185.0 / 822651844.0
_D7 = 69997945.0 / 29380423.0

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_MAX_STEPS = 2


@njit(cache=True, nogil=True)
def generator(t, y, dy,
              kind, om0, dlt, tau, t_on, t_off,
              g0, rad_on,
              ph_on, jpref, we2, weh2, wh2, dratio,
              pz_on, ppref,
              kt):
    """dy = L(t)[y] for the combined master equation (angular units)."""
    # drive amplitude
    if kind == 0:
        om = om0 if (t >= t_on) and (t <= t_off) else 0.0
    else:
        x = t / tau
        om = om0 * math.exp(-x * x)

    r00 = y[0]
    r01 = y[1]
    r02 = y[2]
    r10 = y[3]
    r11 = y[4]
    r12 = y[5]
    r20 = y[6]
    r21 = y[7]
    r22 = y[8]

    # coherent part: -i[H, rho] with H = dlt |X><X| + (om/2)(|1><X| + |X><1|)
    g = 0.5 * om
    d00 = 0.0 + 0.0j
    d01 = -1j * (-g * r02)
    d02 = -1j * (-(g * r01 + dlt * r02))
    d10 = -1j * (g * r20)
    d11 = -1j * (g * (r21 - r12))
    d12 = -1j * (g * r22 - g * r11 - dlt * r12)
    d20 = -1j * (g * r10 + dlt * r20)
    d21 = -1j * (g * r11 + dlt * r21 - g * r22)
    d22 = -1j * (g * (r12 - r21))

    # radiative channel: Gamma_0 D[|1><X|]
    if rad_on:
        hg = 0.5 * g0
        d11 += g0 * r22
        d22 -= g0 * r22
        d02 -= hg * r02
        d12 -= hg * r12
        d20 -= hg * r20
        d21 -= hg * r21

    # phonon channels between instantaneous dressed states
    if (ph_on or pz_on) and (om != 0.0 or dlt != 0.0):
        lam = math.hypot(om, dlt)
        jtot = 0.0
        l2 = lam * lam
        if ph_on:
            br = (math.exp(-l2 / we2) - 2.0 * dratio * math.exp(-l2 / weh2)
                  + dratio * dratio * math.exp(-l2 / wh2))
            jtot += jpref * lam * l2 * br
        if pz_on:
            brp = (math.exp(-l2 / we2) - 2.0 * math.exp(-l2 / weh2)
                   + math.exp(-l2 / wh2))
            jtot += ppref * lam * l2 * brp
        if jtot != 0.0:
            if kt > 0.0:
                xx = lam / kt
                nocc = 0.0 if xx > 700.0 else 1.0 / math.expm1(xx)
            else:
                nocc = 0.0
            th = 0.5 * math.atan2(om, dlt)
            s = math.sin(th)
            c = math.cos(th)
            s2 = s * s
            c2 = c * c
            sc = s * c
            q = sc * sc
            gd = jtot * (nocc + 1.0) * q   # downward, |+> -> |->
            gu = jtot * nocc * q           # upward, |-> -> |+>
            # dressed-state matrix elements of rho
            app = s2 * r11 + sc * (r12 + r21) + c2 * r22   # <+|rho|+>
            amm = c2 * r11 - sc * (r12 + r21) + s2 * r22   # <-|rho|->
            # row/column-0 coherences only lose amplitude
            d01 += -0.5 * (gd * (s2 * r01 + sc * r02) + gu * (c2 * r01 - sc * r02))
            d02 += -0.5 * (gd * (sc * r01 + c2 * r02) + gu * (-sc * r01 + s2 * r02))
            d10 += -0.5 * (gd * (s2 * r10 + sc * r20) + gu * (c2 * r10 - sc * r20))
            d20 += -0.5 * (gd * (sc * r10 + c2 * r20) + gu * (-sc * r10 + s2 * r20))
            # {|1>, |X>} block: gain onto |-><-| (down) / |+><+| (up) plus losses
            d11 += (gd * (app * c2 - 0.5 * (2.0 * s2 * r11 + sc * (r12 + r21)))
                    + gu * (amm * s2 - 0.5 * (2.0 * c2 * r11 - sc * (r12 + r21))))
            d22 += (gd * (app * s2 - 0.5 * (sc * (r12 + r21) + 2.0 * c2 * r22))
                    + gu * (amm * c2 - 0.5 * (-sc * (r12 + r21) + 2.0 * s2 * r22)))
            d12 += (gd * (-app * sc - 0.5 * (r12 + sc * (r11 + r22)))
                    + gu * (amm * sc - 0.5 * (r12 - sc * (r11 + r22))))
            d21 += (gd * (-app * sc - 0.5 * (r21 + sc * (r11 + r22)))
                    + gu * (amm * sc - 0.5 * (r21 - sc * (r11 + r22))))

    dy[0] = d00
    dy[1] = d01
    dy[2] = d02
    dy[3] = d10
    dy[4] = d11
    dy[5] = d12
    dy[6] = d20
    dy[7] = d21
    dy[8] = d22
    # running decay integral Gamma_0 * <X|rho|X>
    dy[9] = g0 * r22.real + 0.0j


@njit(cache=True, nogil=True)
def _rhs(t, y, dy, p_f, p_i):
    generator(t, y, dy,
              p_i[0], p_f[0], p_f[1], p_f[2], p_f[3], p_f[4],
              p_f[5], p_i[1] == 1,
              p_i[2] == 1, p_f[6], p_f[7], p_f[8], p_f[9], p_f[10],
              p_i[3] == 1, p_f[11],
              p_f[12])


@njit(cache=True, nogil=True)
def integrate_window(y, t0, t1, rtol, atol, ts, out, p_f, p_i, max_steps):
    """Advance y from t0 to t1, sampling at the sorted times ts into out.

    Returns (status, t_reached, n_accepted, n_rejected).  y is updated in
    place; samples at ts[i] <= t0 are filled with the initial state, the rest
    from the dense-output interpolant of the accepting step.
    """
    n = NSTATE
    k1 = np.empty(n, np.complex128)
    k2 = np.empty(n, np.complex128)
    k3 = np.empty(n, np.complex128)
    k4 = np.empty(n, np.complex128)
    k5 = np.empty(n, np.complex128)
    k6 = np.empty(n, np.complex128)
    k7 = np.empty(n, np.complex128)
    yt = np.empty(n, np.complex128)
    yn = np.empty(n, np.complex128)

    nsamp = ts.shape[0]
    span = t1 - t0
    tiny = 1e-12 * max(abs(t0), abs(t1), 1.0)
    if span < tiny:
        return STATUS_UNDERFLOW, t0, 0, 0

    si = 0
    while si < nsamp and ts[si] <= t0 + tiny:
        for i in range(n):
            out[si, i] = y[i]
        si += 1

    _rhs(t0, y, k1, p_f, p_i)

    # initial step size (norm-based heuristic)
    d0 = 0.0
    d1 = 0.0
    for i in range(n):
        sc = atol + rtol * abs(y[i])
        d0 += (abs(y[i]) / sc) ** 2
        d1 += (abs(k1[i]) / sc) ** 2
    d0 = math.sqrt(d0 / n)
    d1 = math.sqrt(d1 / n)
    if d0 < 1e-10 or d1 < 1e-10:
        h = 1e-6 * span
    else:
        h = 0.01 * d0 / d1
    h = min(h, span)
    for i in range(n):
        yt[i] = y[i] + h * k1[i]
    _rhs(t0 + h, yt, k2, p_f, p_i)
    d2 = 0.0
    for i in range(n):
        sc = atol + rtol * abs(y[i])
        d2 += (abs(k2[i] - k1[i]) / sc) ** 2
    d2 = math.sqrt(d2 / n) / h
    dm = max(d1, d2)
    if dm <= 1e-15:
        h1 = max(1e-6 * span, h * 1e-3)
    else:
        h1 = (0.01 / dm) ** 0.2
    h = min(100.0 * h, h1, span)

    t = t0
    naccept = 0
    nreject = 0
    rejected = False

    while t < t1 - tiny:
        if naccept + nreject >= max_steps:
            return STATUS_MAX_STEPS, t, naccept, nreject
        if h < tiny:
            return STATUS_UNDERFLOW, t, naccept, nreject
        if t + h > t1:
            h = t1 - t

        for i in range(n):
            yt[i] = y[i] + h * (_A21 * k1[i])
        _rhs(t + _C2 * h, yt, k2, p_f, p_i)
        for i in range(n):
            yt[i] = y[i] + h * (_A31 * k1[i] + _A32 * k2[i])
        _rhs(t + _C3 * h, yt, k3, p_f, p_i)
        for i in range(n):
            yt[i] = y[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
        _rhs(t + _C4 * h, yt, k4, p_f, p_i)
        for i in range(n):
            yt[i] = y[i] + h * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i])
        _rhs(t + _C5 * h, yt, k5, p_f, p_i)
        for i in range(n):
            yt[i] = y[i] + h * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i]
                                + _A64 * k4[i] + _A65 * k5[i])
        _rhs(t + h, yt, k6, p_f, p_i)
        for i in range(n):
            yn[i] = y[i] + h * (_A71 * k1[i] + _A73 * k3[i] + _A74 * k4[i]
                                + _A75 * k5[i] + _A76 * k6[i])
        _rhs(t + h, yn, k7, p_f, p_i)

        err = 0.0
        for i in range(n):
            ei = h * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i]
                      + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i])
            sc = atol + rtol * max(abs(y[i]), abs(yn[i]))
            err += (abs(ei) / sc) ** 2
        err = math.sqrt(err / n)

        if err <= 1.0:
            tn = t + h
            if si < nsamp and ts[si] <= tn + tiny:
                # dense output over (t, tn]
                for i in range(n):
                    ydiff = yn[i] - y[i]
                    bspl = h * k1[i] - ydiff
                    r4 = ydiff - h * k7[i] - bspl
                    r5 = h * (_D1 * k1[i] + _D3 * k3[i] + _D4 * k4[i]
                              + _D5 * k5[i] + _D6 * k6[i] + _D7 * k7[i])
                    j = si
                    while j < nsamp and ts[j] <= tn + tiny:
                        th = (ts[j] - t) / h
                        th1 = 1.0 - th
                        out[j, i] = y[i] + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5)))
                        j += 1
                while si < nsamp and ts[si] <= tn + tiny:
                    si += 1
            t = tn
            for i in range(n):
                y[i] = yn[i]
                k1[i] = k7[i]
            naccept += 1
            if err == 0.0:
                fac = 5.0
            else:
                fac = min(5.0, max(0.2, 0.9 * err ** -0.2))
            if rejected:
                fac = min(fac, 1.0)
            h *= fac
            rejected = False
        else:
            nreject += 1
            h *= max(0.2, 0.9 * err ** -0.2)
            rejected = True

    # samples pinned to t1 that rounding left behind
    while si < nsamp and ts[si] <= t1 + tiny:
        for i in range(n):
            out[si, i] = y[i]
        si += 1
    return STATUS_OK, t, naccept, nreject
