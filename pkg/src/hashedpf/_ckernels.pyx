# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Same signatures as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

ctypedef long long i64


cdef extern from *:
    int __builtin_parityll(unsigned long long) nogil


cdef inline int _parity(unsigned long long v) noexcept nogil:
    return __builtin_parityll(v)


def fwht(double complex[:, ::1] a):
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1]
    cdef Py_ssize_t h = 1, i, j, c
    cdef double complex x, y
    with nogil:
        while h < n:
            i = 0
            while i < n:
                for j in range(i, i + h):
                    for c in range(m):
                        x = a[j, c]
                        y = a[j + h, c]
                        a[j, c] = x + y
                        a[j + h, c] = x - y
                i += 2 * h
            h *= 2
    return np.asarray(a)


def hadamard_wire(double complex[::1] vec, int nqubits, int wire):
    cdef Py_ssize_t inner = (<Py_ssize_t>1) << (nqubits - wire - 1)
    cdef Py_ssize_t outer = (<Py_ssize_t>1) << wire
    cdef Py_ssize_t o, k, base
    cdef double s = sqrt(0.5)
    cdef double complex x, y
    with nogil:
        for o in range(outer):
            base = o * 2 * inner
            for k in range(inner):
                x = vec[base + k]
                y = vec[base + inner + k]
                vec[base + k] = (x + y) * s
                vec[base + inner + k] = (x - y) * s
    return np.asarray(vec)


def parity_labels(values, seeds):
    cdef const i64[::1] v = np.ascontiguousarray(values, dtype=np.int64)
    cdef const i64[::1] r = np.ascontiguousarray(seeds, dtype=np.int64)
    out_arr = np.zeros(v.shape[0], dtype=np.int64)
    cdef i64[::1] out = out_arr
    cdef Py_ssize_t i, j, t = r.shape[0]
    cdef i64 lab
    with nogil:
        for i in range(v.shape[0]):
            lab = 0
            for j in range(t):
                lab = (lab << 1) | _parity(<unsigned long long>(v[i] & r[j]))
            out[i] = lab
    return out_arr


cdef void _bucket_power(const double complex[:, ::1] W, const i64[::1] labels, int nb,
                        double complex* buf, double* out) noexcept nogil:
    cdef Py_ssize_t y, z, b
    cdef double complex s
    for y in range(W.shape[0]):
        for b in range(nb):
            buf[b] = 0
        for z in range(W.shape[1]):
            buf[labels[z]] = buf[labels[z]] + W[y, z]
        for b in range(nb):
            s = buf[b]
            out[y] += s.real * s.real + s.imag * s.imag


def bucket_power(W, labels, int nbuckets):
    cdef const double complex[:, ::1] Wv = np.ascontiguousarray(W, dtype=np.complex128)
    cdef const i64[::1] lab = np.ascontiguousarray(labels, dtype=np.int64)
    out_arr = np.zeros(Wv.shape[0])
    cdef double[::1] out = out_arr
    buf_arr = np.zeros(nbuckets, dtype=np.complex128)
    cdef double complex[::1] buf = buf_arr
    with nogil:
        _bucket_power(Wv, lab, nbuckets, &buf[0], &out[0])
    return out_arr


def family_average(W, values, int n, int t):
    cdef const double complex[:, ::1] Wv = np.ascontiguousarray(W, dtype=np.complex128)
    cdef const i64[::1] v = np.ascontiguousarray(values, dtype=np.int64)
    cdef Py_ssize_t Z = v.shape[0]
    out_arr = np.zeros(Wv.shape[0])
    cdef double[::1] out = out_arr
    lab_arr = np.zeros(Z, dtype=np.int64)
    cdef i64[::1] lab = lab_arr
    cdef int nb = 1 << t
    buf_arr = np.zeros(nb, dtype=np.complex128)
    cdef double complex[::1] buf = buf_arr
    cdef i64 mask = ((<i64>1) << n) - 1
    cdef i64 count = (<i64>1) << (n * t)
    cdef i64 idx, r, l
    cdef Py_ssize_t z, j, y
    with nogil:
        for idx in range(count):
            for z in range(Z):
                l = 0
                for j in range(t):
                    r = (idx >> (n * (t - 1 - j))) & mask
                    l = (l << 1) | _parity(<unsigned long long>(v[z] & r))
                lab[z] = l
            _bucket_power(Wv, lab, nb, &buf[0], &out[0])
        for y in range(Wv.shape[0]):
            out[y] /= count
    return out_arr


def eval_gates(words, gates, int nbits):
    """Bit-sliced evaluation: words are transposed into one bit plane per wire,
    so every gate acts on 64 words per machine instruction."""
    w_arr = np.array(words, dtype=np.int64, copy=True)
    g_arr = np.ascontiguousarray(np.asarray(gates, dtype=np.int64).reshape(-1, 4))
    if g_arr.shape[0] and (g_arr[:, 0].min() < 0 or g_arr[:, 0].max() > 2):
        raise ValueError(f"unknown gate kind {g_arr[:, 0].max()}")
    cdef Py_ssize_t nw = w_arr.size, nb = (w_arr.size + 63) // 64
    if nw == 0 or g_arr.shape[0] == 0:
        return w_arr
    flat = w_arr.reshape(-1)
    cdef i64[::1] w = flat
    planes_arr = np.zeros((nbits, nb), dtype=np.uint64)
    cdef unsigned long long[:, ::1] pl = planes_arr
    cdef const i64[:, ::1] g = g_arr
    cdef Py_ssize_t i, j, k, blk
    cdef int sh
    cdef unsigned long long ones = ~(<unsigned long long>0)
    cdef unsigned long long* pt
    cdef unsigned long long* pa
    cdef unsigned long long* pb
    with nogil:
        for j in range(nbits):
            sh = nbits - 1 - j
            for i in range(nw):
                pl[j, i >> 6] |= (<unsigned long long>((w[i] >> sh) & 1)) << (i & 63)
        for k in range(g.shape[0]):
            pt = &pl[g[k, 3], 0]
            if g[k, 0] == 0:
                for blk in range(nb):
                    pt[blk] ^= ones
            elif g[k, 0] == 1:
                pa = &pl[g[k, 1], 0]
                for blk in range(nb):
                    pt[blk] ^= pa[blk]
            else:
                pa = &pl[g[k, 1], 0]
                pb = &pl[g[k, 2], 0]
                for blk in range(nb):
                    pt[blk] ^= pa[blk] & pb[blk]
        for i in range(nw):
            w[i] = w[i] & ~((<i64>1 << nbits) - 1) if nbits < 63 else 0
        for j in range(nbits):
            sh = nbits - 1 - j
            for i in range(nw):
                w[i] |= (<i64>((pl[j, i >> 6] >> (i & 63)) & 1)) << sh
    return w_arr
