"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``RANKMAX_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
augment = _pykernels.augment
eou = _pykernels.eou
enumerate_best = _pykernels.enumerate_best

if os.environ.get("RANKMAX_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        augment = _ckernels.augment
        eou = _ckernels.eou
        enumerate_best = _ckernels.enumerate_best

EVEN, ODD, UNREACHABLE = _pykernels.EVEN, _pykernels.ODD, _pykernels.UNREACHABLE

__all__ = ["BACKEND", "augment", "eou", "enumerate_best", "EVEN", "ODD", "UNREACHABLE"]
