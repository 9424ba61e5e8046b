"""Finite-dimensional complex Hilbert space: state vectors, Hermitian
observables, expectations, dispersion, and unitary time evolution (hbar = 1).

All objects are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

import json
import numbers

import numpy as np

__all__ = [
    "StateVector",
    "HermitianOperator",
    "Projector",
    "DegenerateSpectrumError",
    "expectation",
    "dispersion_squared",
    "evolve",
    "survival_probability",
    "hermitian_from_json",
]

# Relative thresholds for validating operator input; the underlying theory
# assumes exact self-adjointness and exact nondegeneracy.
HERMITICITY_RTOL = 1e-10
DEGENERACY_RTOL = 1e-8
NORM_TOL = 1e-10
PHASE_TOL = 1e-10


class DegenerateSpectrumError(ValueError):
    """Raised when an operation requires distinct eigenvalues and the
    spectrum has a gap below tolerance."""


class StateVector:
    """A pure state: a unit vector in C^(n+1), n >= 1.

    Equality of physical states is phase-insensitive; use
    `phase_equal` for that and `allclose` for strict amplitude equality.
    """

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, normalize=False):
        amp = np.asarray(amplitudes, dtype=complex).copy()
        if amp.ndim != 1 or amp.size < 2:
            raise ValueError(f"state vector must be 1-d with dimension >= 2, got shape {amp.shape}")
        if not np.all(np.isfinite(amp.view(float))):
            raise ValueError("state vector has non-finite amplitudes")
        nrm = float(np.linalg.norm(amp))
        if nrm == 0.0:
            raise ValueError("state vector must be nonzero")
        if normalize:
            amp = amp / nrm
        elif abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"state vector not normalized: |v| = {nrm!r}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    def __setattr__(self, name, value):
        raise AttributeError("StateVector is immutable")

    @property
    def dim(self):
        return self.amplitudes.size

    @classmethod
    def basis(cls, dim, k):
        """The canonical basis state e_k in C^dim."""
        amp = np.zeros(dim, dtype=complex)
        amp[k] = 1.0
        return cls(amp)

    def inner(self, other):
        """<self|other>, antilinear in self."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def phase_equal(self, other, tol=PHASE_TOL):
        """True when the two vectors describe the same ray: | |<u|v>| - 1 | < tol."""
        if self.dim != other.dim:
            return False
        return abs(abs(self.inner(other)) - 1.0) < tol

    def allclose(self, other, tol=1e-12):
        """Strict amplitude-wise equality (phase sensitive)."""
        return self.dim == other.dim and bool(
            np.allclose(self.amplitudes, other.amplitudes, rtol=0.0, atol=tol)
        )

    def __repr__(self):
        return f"StateVector({np.array2string(self.amplitudes, precision=6)})"


class HermitianOperator:
    """A self-adjoint operator on C^(n+1) with cached eigendecomposition.

    Parameters
    ----------
    matrix : array_like
        (n+1) x (n+1) complex matrix; must satisfy max|M - M^dag| below
        HERMITICITY_RTOL * |M|.
    require_nondegenerate : bool
        When set, demand min eigenvalue gap > DEGENERACY_RTOL * spectral range.
    """

    __slots__ = ("matrix", "_eigenvalues", "_eigenvectors")

    def __init__(self, matrix, require_nondegenerate=False):
        mat = np.asarray(matrix, dtype=complex).copy()
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 2:
            raise ValueError(f"operator must be square with dimension >= 2, got shape {mat.shape}")
        if not np.all(np.isfinite(mat.view(float))):
            raise ValueError("operator has non-finite entries")
        scale = max(float(np.abs(mat).max()), 1e-300)
        defect = float(np.abs(mat - mat.conj().T).max())
        if defect > HERMITICITY_RTOL * scale:
            raise ValueError(f"matrix is not Hermitian: max|M - M^dag| = {defect!r}")
        mat = (mat + mat.conj().T) / 2.0
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "_eigenvalues", None)
        object.__setattr__(self, "_eigenvectors", None)
        if require_nondegenerate:
            self.require_nondegenerate()

    def __setattr__(self, name, value):
        raise AttributeError("HermitianOperator is immutable")

    @property
    def dim(self):
        return self.matrix.shape[0]

    @classmethod
    def diagonal(cls, values):
        return cls(np.diag(np.asarray(values, dtype=float)).astype(complex))

    def _eig(self):
        if self._eigenvalues is None:
            vals, vecs = np.linalg.eigh(self.matrix)
            vals.setflags(write=False)
            vecs.setflags(write=False)
            object.__setattr__(self, "_eigenvalues", vals)
            object.__setattr__(self, "_eigenvectors", vecs)
        return self._eigenvalues, self._eigenvectors

    @property
    def eigenvalues(self):
        """Eigenvalues in ascending order."""
        return self._eig()[0]

    @property
    def eigenvectors(self):
        """Unitary matrix whose column k is the eigenvector of eigenvalue k."""
        return self._eig()[1]

    @property
    def spectral_range(self):
        vals = self.eigenvalues
        return float(vals[-1] - vals[0])

    def min_gap(self):
        vals = self.eigenvalues
        return float(np.min(np.diff(vals)))

    def require_nondegenerate(self):
        """Raise DegenerateSpectrumError unless all eigenvalue gaps clear tolerance."""
        rng = max(self.spectral_range, 1e-300)
        if self.min_gap() <= DEGENERACY_RTOL * rng:
            raise DegenerateSpectrumError(
                f"spectrum is degenerate to tolerance: min gap {self.min_gap()!r}, range {rng!r}"
            )

    def apply(self, v: StateVector) -> np.ndarray:
        if v.dim != self.dim:
            raise ValueError(f"dimension mismatch: operator {self.dim}, state {v.dim}")
        return self.matrix @ v.amplitudes

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


class Projector:
    """Rank-one orthogonal projector |v><v| onto a ray."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol=1e-10):
        mat = np.asarray(matrix, dtype=complex).copy()
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("projector must be a square matrix")
        scale = max(float(np.abs(mat).max()), 1e-300)
        if float(np.abs(mat - mat.conj().T).max()) > tol * scale:
            raise ValueError("projector is not self-adjoint")
        if float(np.abs(mat @ mat - mat).max()) > tol * max(scale, 1.0):
            raise ValueError("projector is not idempotent")
        if abs(np.trace(mat).real - 1.0) > tol:
            raise ValueError("projector does not have unit trace")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def __setattr__(self, name, value):
        raise AttributeError("Projector is immutable")

    @classmethod
    def from_state(cls, v: StateVector):
        amp = v.amplitudes
        return cls(np.outer(amp, amp.conj()))


def expectation(A: HermitianOperator, v: StateVector) -> float:
    """<v|Av> for a Hermitian A and normalized v.

    The raw inner product must be real up to round-off; a large imaginary
    residue indicates a non-Hermitian operator and raises.
    """
    raw = np.vdot(v.amplitudes, A.apply(v))
    scale = max(float(np.abs(A.matrix).max()), 1e-300)
    if abs(raw.imag) > 1e-10 * scale:
        raise ValueError(f"expectation has imaginary residue {raw.imag!r}")
    return float(raw.real)


def dispersion_squared(H: HermitianOperator, v: StateVector) -> float:
    """Variance <v|H^2 v> - <v|H v>^2 of H in the state v.

    Computed as |Hv|^2 - <H>^2, which is nonnegative up to round-off;
    small negative round-off is clamped to zero.
    """
    w = H.apply(v)
    mean = np.vdot(v.amplitudes, w).real
    second = np.vdot(w, w).real
    out = float(second - mean * mean)
    if out < 0.0:
        tol = 1e-12 * max(second, 1.0)
        if out < -tol:
            raise ValueError(f"dispersion came out negative beyond round-off: {out!r}")
        out = 0.0
    return out


def evolve(H: HermitianOperator, v: StateVector, t: float) -> StateVector:
    """Schrodinger evolution exp(-iHt) v through the eigendecomposition of H.

    Unitary to round-off; the output is renormalized to kill the residual.
    """
    if v.dim != H.dim:
        raise ValueError(f"dimension mismatch: operator {H.dim}, state {v.dim}")
    vals, vecs = H.eigenvalues, H.eigenvectors
    coeffs = vecs.conj().T @ v.amplitudes
    out = vecs @ (np.exp(-1j * vals * t) * coeffs)
    return StateVector(out, normalize=True)


def survival_probability(H: HermitianOperator, v: StateVector, t: float) -> float:
    """|<v| exp(-iHt) v>|^2."""
    amp = v.inner(evolve(H, v, t))
    return float(min(abs(amp) ** 2, 1.0))


def _as_real_grid(name, obj, dim):
    if not isinstance(obj, list) or len(obj) != dim:
        raise ValueError(f"'{name}' must be a list of {dim} rows")
    out = np.empty((dim, dim), dtype=float)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != dim:
            raise ValueError(f"'{name}[{i}]' must be a list of {dim} numbers")
        for j, entry in enumerate(row):
            if isinstance(entry, bool) or not isinstance(entry, numbers.Real):
                raise ValueError(f"'{name}[{i}][{j}]' is not a number: {entry!r}")
            val = float(entry)
            if not np.isfinite(val):
                raise ValueError(f"'{name}[{i}][{j}]' is not finite: {entry!r}")
            out[i, j] = val
    return out


def hermitian_from_json(source) -> HermitianOperator:
    """Parse a Hermitian operator from JSON.

    Accepts a dict, a JSON string, or a path to a JSON file with layout
    `{"dim": n+1, "re": [[...]], "im": [[...]]}`; "im" may be omitted for
    real symmetric input. Validation errors name the offending entry.
    """
    if isinstance(source, dict):
        data = source
    else:
        text = source
        if not (isinstance(source, str) and source.lstrip().startswith(("{", "["))):
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("hermitian JSON must be an object")
    if "dim" not in data:
        raise ValueError("missing 'dim'")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 2:
        raise ValueError(f"'dim' must be an integer >= 2, got {dim!r}")
    if "re" not in data:
        raise ValueError("missing 're'")
    re = _as_real_grid("re", data["re"], dim)
    if "im" in data and data["im"] is not None:
        im = _as_real_grid("im", data["im"], dim)
    else:
        im = np.zeros((dim, dim))
    return HermitianOperator(re + 1j * im)
