"""Small density-matrix helpers shared by the energetics and distinguishability code."""

from __future__ import annotations

import numpy as np

__all__ = ["InvalidStateError", "check_density_matrix", "partial_trace_first"]

HERM_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


class InvalidStateError(ValueError):
    """Raised for matrices that are not valid density matrices."""


def check_density_matrix(rho, *, herm_tol=HERM_TOL, trace_tol=TRACE_TOL, psd_tol=PSD_TOL):
    """Return ``rho`` as a complex array after checking it is a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("density matrix has non-finite entries")
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise InvalidStateError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise InvalidStateError(f"density matrix trace is {tr.real:.15g}, expected 1")
    lowest = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lowest < -psd_tol:
        raise InvalidStateError(f"density matrix has negative eigenvalue {lowest:.3g}")
    return rho


def partial_trace_first(rho, dims=(2, 2)):
    """Trace out the first tensor factor of a bipartite operator."""
    da, db = dims
    rho = np.asarray(rho)
    return np.einsum("ijik->jk", rho.reshape(da, db, da, db))
