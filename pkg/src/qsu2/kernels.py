"""Kernel backend selection for the sparse mat-vec hot loop.

The compiled Cython extension is preferred when importable; otherwise a
vectorised numpy fallback (bincount-based gather/scatter) is used.  Both
backends implement the same step: given a unit vector x, compute
y = A x, return ||y||^2 and z = A* y.
"""

from __future__ import annotations

import numpy as np

try:
    from . import _kernels as _ext
except ImportError:  # extension not built
    _ext = None

BACKENDS = ("cython", "numpy")


def have_extension() -> bool:
    return _ext is not None


def default_backend() -> str:
    return "cython" if _ext is not None else "numpy"


class MatvecPlan:
    """Per-operator buffers and backend dispatch for power-iteration steps.

    Complex data always routes through numpy (bincount over the real and
    imaginary parts); the extension handles the real float64 case.
    """

    def __init__(self, indptr, rows, cols, data, codomain_dim, backend=None):
        self.indptr = np.ascontiguousarray(indptr, dtype=np.intp)
        self.rows = np.ascontiguousarray(rows, dtype=np.intp)
        self.cols = np.ascontiguousarray(cols, dtype=np.intp)
        self.complex = np.iscomplexobj(data)
        dtype = np.complex128 if self.complex else np.float64
        self.data = np.ascontiguousarray(data, dtype=dtype)
        self.m = int(codomain_dim)
        self.n = len(self.indptr) - 1
        if backend is None:
            backend = default_backend()
        if backend not in BACKENDS:
            raise ValueError(f"unknown kernel backend {backend!r}")
        if backend == "cython" and _ext is None:
            raise ValueError("cython kernel backend requested but extension not built")
        if self.complex:
            backend = "numpy"
        self.backend = backend
        if backend == "cython":
            self._y = np.empty(self.m, dtype=np.float64)
            self._z = np.empty(self.n, dtype=np.float64)

    def step(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        """Return (||A x||^2, A* A x)."""
        if self.backend == "cython":
            nu = _ext.normest_step(self.indptr, self.rows, self.data, x, self._y, self._z)
            return float(nu), self._z
        if self.complex:
            w = self.data * x[self.cols]
            y = self._cbincount(self.rows, w, self.m)
            nu = float(np.real(np.vdot(y, y)))
            z = self._cbincount(self.cols, np.conj(self.data) * y[self.rows], self.n)
            return nu, z
        w = self.data * x[self.cols]
        y = np.bincount(self.rows, weights=w, minlength=self.m)
        nu = float(y @ y)
        z = np.bincount(self.cols, weights=self.data * y[self.rows], minlength=self.n)
        return nu, z

    @staticmethod
    def _cbincount(idx, weights, minlength):
        re = np.bincount(idx, weights=weights.real, minlength=minlength)
        im = np.bincount(idx, weights=weights.imag, minlength=minlength)
        return re + 1j * im
