"""Kernel selection.

The compiled extension is preferred; set ``WRCOMM_PURE_PYTHON=1`` to force the
numpy fallback (the benchmark and the kernel tests load both explicitly).
"""
from __future__ import annotations

import contextlib
import importlib
import os
from types import ModuleType

_NAMES = {"cython": "wrcomm._ckernels", "numpy": "wrcomm._pykernels"}


def load(name: str) -> ModuleType:
    """Import the kernel module called ``name`` ("cython" or "numpy")."""
    return importlib.import_module(_NAMES[name])


def available() -> list[str]:
    out = []
    for name in _NAMES:
        try:
            load(name)
        except ImportError:
            continue
        out.append(name)
    return out


def _select() -> ModuleType:
    if os.environ.get("WRCOMM_PURE_PYTHON", "") not in ("", "0"):
        return load("numpy")
    try:
        return load("cython")
    except ImportError:
        return load("numpy")


kernels = _select()
BACKEND: str = kernels.NAME


@contextlib.contextmanager
def use(name: str):
    """Temporarily route every portrait operation through the kernels called ``name``."""
    global kernels, BACKEND
    saved = kernels
    kernels = load(name)
    BACKEND = kernels.NAME
    try:
        yield kernels
    finally:
        kernels = saved
        BACKEND = kernels.NAME
