"""Pure numpy implementations of the hot kernels.

Signatures match ``_ckernels`` exactly; ``hashedpf.kernels`` picks one at import.
"""
import numpy as np

_SQRT_HALF = np.sqrt(0.5)


def fwht(a):
    """In-place unnormalized Walsh-Hadamard transform along axis 0 (length 2^k)."""
    n = a.shape[0]
    h = 1
    while h < n:
        v = a.reshape(n // (2 * h), 2, h, -1)
        x = v[:, 0].copy()
        v[:, 0] += v[:, 1]
        v[:, 1] *= -1
        v[:, 1] += x
        h *= 2
    return a


def hadamard_wire(vec, nqubits, wire):
    v = vec.reshape(1 << wire, 2, 1 << (nqubits - wire - 1))
    x = v[:, 0].copy()
    y = v[:, 1]
    v[:, 0] = (x + y) * _SQRT_HALF
    v[:, 1] = (x - y) * _SQRT_HALF
    return vec


def _parity64(v):
    v = v.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


def parity_labels(values, seeds):
    values = np.asarray(values, dtype=np.int64)
    out = np.zeros(values.shape, dtype=np.int64)
    for r in seeds:
        out = (out << 1) | _parity64(values & np.int64(r))
    return out


def bucket_power(W, labels, nbuckets):
    W = np.asarray(W, dtype=np.complex128)
    onehot = np.zeros((W.shape[1], nbuckets))
    onehot[np.arange(W.shape[1]), np.asarray(labels)] = 1.0
    S = W @ onehot
    return (S.real**2 + S.imag**2).sum(axis=1)


def family_average(W, values, n, t):
    W = np.asarray(W, dtype=np.complex128)
    values = np.asarray(values, dtype=np.int64)
    total = np.zeros(W.shape[0])
    mask = (1 << n) - 1
    count = 1 << (n * t)
    for idx in range(count):
        seeds = [(idx >> (n * (t - 1 - i))) & mask for i in range(t)]
        total += bucket_power(W, parity_labels(values, seeds), 1 << t)
    return total / count


NOT, CNOT, TOFFOLI = 0, 1, 2


def eval_gates(words, gates, nbits):
    """Evaluate an (g, 4) int gate array [kind, c1, c2, target] on int words.

    Wire i addresses bit ``nbits - 1 - i`` of a word.
    """
    w = np.array(words, dtype=np.int64, copy=True)
    for kind, c1, c2, tgt in np.asarray(gates, dtype=np.int64).reshape(-1, 4):
        tmask = np.int64(1) << (nbits - 1 - tgt)
        if kind == NOT:
            w ^= tmask
        elif kind == CNOT:
            w ^= ((w >> (nbits - 1 - c1)) & 1) * tmask
        elif kind == TOFFOLI:
            w ^= ((w >> (nbits - 1 - c1)) & (w >> (nbits - 1 - c2)) & 1) * tmask
        else:
            raise ValueError(f"unknown gate kind {kind}")
    return w
