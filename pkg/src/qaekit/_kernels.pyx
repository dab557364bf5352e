# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled plan kernel: the hot loop of statevector execution.

Op codes match qaekit.kernels (OP_FUSED1Q..OP_CRX). States are a C-contiguous
(batch, 2**n) array updated in place.
"""

from libc.math cimport cos, sin

cdef enum:
    OP_FUSED1Q = 0
    OP_CNOT = 1
    OP_CZ = 2
    OP_SWAP = 3
    OP_CSWAP = 4
    OP_CRZ = 5
    OP_CRX = 6


def run_plan(int num_qubits,
             const int[::1] kinds,
             const int[::1] qa,
             const int[::1] qb,
             const int[::1] qc,
             const int[::1] aux,
             const double complex[:, :, ::1] mats,
             const double[::1] angles,
             double complex[:, ::1] states):
    cdef Py_ssize_t n_ops = kinds.shape[0]
    cdef Py_ssize_t batch = states.shape[0]
    cdef Py_ssize_t dim = states.shape[1]
    cdef Py_ssize_t op, b, i, j, base, stride
    cdef int kind, a_q, b_q, c_q, ax
    cdef Py_ssize_t mask_a, mask_b, mask_c, mask_bc
    cdef double complex m00, m01, m10, m11, t0, t1, tmp, ph0, ph1
    cdef double half, ch, sh

    for op in range(n_ops):
        kind = kinds[op]
        a_q = qa[op]
        b_q = qb[op]
        c_q = qc[op]
        ax = aux[op]
        if kind == OP_FUSED1Q:
            m00 = mats[ax, 0, 0]
            m01 = mats[ax, 0, 1]
            m10 = mats[ax, 1, 0]
            m11 = mats[ax, 1, 1]
            stride = (<Py_ssize_t> 1) << a_q
            for b in range(batch):
                base = 0
                while base < dim:
                    for i in range(base, base + stride):
                        t0 = states[b, i]
                        t1 = states[b, i + stride]
                        states[b, i] = m00 * t0 + m01 * t1
                        states[b, i + stride] = m10 * t0 + m11 * t1
                    base += 2 * stride
        elif kind == OP_CNOT:
            mask_a = (<Py_ssize_t> 1) << a_q
            mask_b = (<Py_ssize_t> 1) << b_q
            for b in range(batch):
                for i in range(dim):
                    if (i & mask_a) != 0 and (i & mask_b) == 0:
                        j = i | mask_b
                        tmp = states[b, i]
                        states[b, i] = states[b, j]
                        states[b, j] = tmp
        elif kind == OP_CZ:
            mask_a = (<Py_ssize_t> 1) << a_q
            mask_b = (<Py_ssize_t> 1) << b_q
            for b in range(batch):
                for i in range(dim):
                    if (i & mask_a) != 0 and (i & mask_b) != 0:
                        states[b, i] = -states[b, i]
        elif kind == OP_SWAP:
            mask_a = (<Py_ssize_t> 1) << a_q
            mask_b = (<Py_ssize_t> 1) << b_q
            for b in range(batch):
                for i in range(dim):
                    if (i & mask_a) != 0 and (i & mask_b) == 0:
                        j = i ^ (mask_a | mask_b)
                        tmp = states[b, i]
                        states[b, i] = states[b, j]
                        states[b, j] = tmp
        elif kind == OP_CSWAP:
            mask_a = (<Py_ssize_t> 1) << a_q
            mask_b = (<Py_ssize_t> 1) << b_q
            mask_c = (<Py_ssize_t> 1) << c_q
            mask_bc = mask_b | mask_c
            for b in range(batch):
                for i in range(dim):
                    if (i & mask_a) != 0 and (i & mask_b) != 0 and (i & mask_c) == 0:
                        j = i ^ mask_bc
                        tmp = states[b, i]
                        states[b, i] = states[b, j]
                        states[b, j] = tmp
        elif kind == OP_CRZ:
            mask_a = (<Py_ssize_t> 1) << a_q
            mask_b = (<Py_ssize_t> 1) << b_q
            half = 0.5 * angles[ax]
            ch = cos(half)
            sh = sin(half)
            ph0 = ch - 1j * sh
            ph1 = ch + 1j * sh
            for b in range(batch):
                for i in range(dim):
                    if (i & mask_a) != 0:
                        if (i & mask_b) == 0:
                            states[b, i] = states[b, i] * ph0
                        else:
                            states[b, i] = states[b, i] * ph1
        elif kind == OP_CRX:
            mask_a = (<Py_ssize_t> 1) << a_q
            mask_b = (<Py_ssize_t> 1) << b_q
            half = 0.5 * angles[ax]
            ch = cos(half)
            sh = sin(half)
            for b in range(batch):
                for i in range(dim):
                    if (i & mask_a) != 0 and (i & mask_b) == 0:
                        j = i | mask_b
                        t0 = states[b, i]
                        t1 = states[b, j]
                        states[b, i] = ch * t0 - 1j * sh * t1
                        states[b, j] = ch * t1 - 1j * sh * t0
