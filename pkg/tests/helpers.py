"""Shared generators for the test suite (seeded, deterministic)."""

import numpy as np

from qhydro.hilbert import HermitianOperator, StateVector


def random_hermitian(rng, dim, spectral_range=1.0):
    """Random nondegenerate Hermitian matrix rescaled to the given spectral range."""
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    H = HermitianOperator((raw + raw.conj().T) / 2.0)
    scale = spectral_range / H.spectral_range
    return HermitianOperator(H.matrix * scale, require_nondegenerate=True)


def random_state(rng, dim):
    raw = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(raw, normalize=True)


def round_sphere(radius=1.0, margin=0.05):
    """Round 2-sphere chart (theta, phi) avoiding the coordinate poles."""
    from qhydro.riemann import ChartManifold

    def metric(x):
        return np.diag([radius**2, radius**2 * np.sin(x[0]) ** 2])

    return ChartManifold(
        2, metric, lambda x: margin < x[0] < np.pi - margin, name="round_sphere"
    )


def euclidean_plane():
    from qhydro.riemann import ChartManifold

    return ChartManifold(2, lambda x: np.eye(2), name="plane")
