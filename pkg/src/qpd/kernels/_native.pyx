# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernel: outcome probabilities for arrays of strategies.

Mirrors kernels/fallback.py exactly; see that module for the 2x2 reduction
of the two-qubit evolution.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()

VARIANT_ENTANGLED = 0
VARIANT_SEPARABLE = 1
VARIANT_CLASSICAL = 2

BACKEND_NAME = "native"


def outcome_probs(theta_a, phi_a, theta_b, phi_b, int variant):
    cdef double[::1] ta = np.ascontiguousarray(theta_a, dtype=np.float64)
    cdef double[::1] pa = np.ascontiguousarray(phi_a, dtype=np.float64)
    cdef double[::1] tb = np.ascontiguousarray(theta_b, dtype=np.float64)
    cdef double[::1] pb = np.ascontiguousarray(phi_b, dtype=np.float64)
    cdef Py_ssize_t n = ta.shape[0]
    if pa.shape[0] != n or tb.shape[0] != n or pb.shape[0] != n:
        raise ValueError("parameter arrays must share one length")
    if variant not in (0, 1, 2):
        raise ValueError(f"unknown variant code {variant}")

    out_arr = np.empty((n, 4), dtype=np.float64)
    cdef double[:, ::1] out = out_arr

    cdef Py_ssize_t k
    cdef double ca, sa, cb, sb
    cdef double complex ea, eb
    cdef double complex a00, a01, a10, a11, b00, b01, b10, b11
    cdef double complex g00, g01, g10, g11
    cdef double complex p00, p01, p10, p11
    cdef double complex h00, h01, h10, h11
    cdef double complex w0, w1, v0a, v1a, v0b, v1b
    cdef double pa0, pa1, pb0, pb1

    for k in range(n):
        ca = cos(ta[k] / 2); sa = sin(ta[k] / 2)
        cb = cos(tb[k] / 2); sb = sin(tb[k] / 2)
        ea = cos(pa[k]) - 1j * sin(pa[k])   # exp(-i phi_a)
        eb = cos(pb[k]) - 1j * sin(pb[k])
        a00 = ea * ca;               a01 = -sa
        a10 = sa;                    a11 = ca / ea
        b00 = eb * cb;               b01 = -sb
        b10 = sb;                    b11 = cb / eb

        if variant == 2:  # bare strategies on |00>
            pa0 = a00.real * a00.real + a00.imag * a00.imag
            pa1 = a10.real * a10.real + a10.imag * a10.imag
            pb0 = b00.real * b00.real + b00.imag * b00.imag
            pb1 = b10.real * b10.real + b10.imag * b10.imag
            out[k, 0] = pa0 * pb0; out[k, 1] = pa0 * pb1
            out[k, 2] = pa1 * pb0; out[k, 3] = pa1 * pb1
            continue

        if variant == 1:  # H U H per wire on |00>, carrying the 1/2
            w0 = a00 + a01; w1 = a10 + a11
            v0a = (w0 + w1) * 0.5; v1a = (w0 - w1) * 0.5
            w0 = b00 + b01; w1 = b10 + b11
            v0b = (w0 + w1) * 0.5; v1b = (w0 - w1) * 0.5
            pa0 = v0a.real * v0a.real + v0a.imag * v0a.imag
            pa1 = v1a.real * v1a.real + v1a.imag * v1a.imag
            pb0 = v0b.real * v0b.real + v0b.imag * v0b.imag
            pb1 = v1b.real * v1b.real + v1b.imag * v1b.imag
            out[k, 0] = pa0 * pb0; out[k, 1] = pa0 * pb1
            out[k, 2] = pa1 * pb0; out[k, 3] = pa1 * pb1
            continue

        # entangled: Psi = Hd CZ (A G B^T) Hd with G = [[1,1],[1,-1]]/2
        g00 = (a00 + a01) * 0.5; g01 = (a00 - a01) * 0.5
        g10 = (a10 + a11) * 0.5; g11 = (a10 - a11) * 0.5
        p00 = g00 * b00 + g01 * b01
        p01 = g00 * b10 + g01 * b11
        p10 = g10 * b00 + g11 * b01
        p11 = -(g10 * b10 + g11 * b11)
        h00 = (p00 + p01 + p10 + p11) * 0.5
        h01 = (p00 - p01 + p10 - p11) * 0.5
        h10 = (p00 + p01 - p10 - p11) * 0.5
        h11 = (p00 - p01 - p10 + p11) * 0.5
        out[k, 0] = h00.real * h00.real + h00.imag * h00.imag
        out[k, 1] = h01.real * h01.real + h01.imag * h01.imag
        out[k, 2] = h10.real * h10.real + h10.imag * h10.imag
        out[k, 3] = h11.real * h11.real + h11.imag * h11.imag

    return out_arr
