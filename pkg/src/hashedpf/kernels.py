"""Kernel dispatch: compiled Cython core when built, numpy fallback otherwise.

Set ``HASHEDPF_PURE=1`` to force the fallback (used by the benchmark and the
backend-agreement tests).
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("HASHEDPF_PURE"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

fwht = _impl.fwht
hadamard_wire = _impl.hadamard_wire
parity_labels = _impl.parity_labels
bucket_power = _impl.bucket_power
family_average = _impl.family_average
eval_gates = _impl.eval_gates


def available_backends():
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
