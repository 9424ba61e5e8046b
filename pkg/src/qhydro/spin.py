"""Spin wave functions as complex polynomials and their point-vortex content.

A spin-s wave function is a polynomial of degree <= 2s in the inhomogeneous
coordinate zeta of the Riemann sphere. Its phase gradient (the Madelung-Bohm
velocity form) is closed away from the roots, and the winding of the phase
around a loop counts the enclosed root multiplicities: circulation / 2 pi is
an integer vortex strength, and around all roots it equals the full degree,
i.e. 2s for a full-degree polynomial.
"""

from __future__ import annotations

import json
import math
import numbers
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

__all__ = [
    "EXCLUSION_TOL",
    "SZ_ACTION_SIGN",
    "SpinWaveFunction",
    "VorticityDivisor",
    "CircleContour",
    "PolygonContour",
    "SU2Element",
    "ContourTooCloseError",
    "ClusterAmbiguityError",
    "IntegralityRecord",
    "sz_apply",
    "su2_matrix",
    "su2_act",
    "madelung_velocity",
    "circulation",
    "total_spin_circulation",
    "vorticity_divisor",
    "bohr_sommerfeld_check",
    "wavefunction_from_json",
    "contour_from_json",
]

# Quadrature near a root of the wave function is ill-conditioned: the
# integrand has a pole there. Evaluation closer than this is refused.
EXCLUSION_TOL = 1e-6

# The one-parameter diagonal subgroup diag(e^{-i a/2}, e^{+i a/2}) acts on the
# monomial zeta^k by the phase e^{-i(k-s)a}; differentiating at the identity
# gives SZ_ACTION_SIGN * i * (S_z action).
SZ_ACTION_SIGN = -1.0


class ContourTooCloseError(ValueError):
    """Contour passes within the exclusion tolerance of a root."""


class ClusterAmbiguityError(ValueError):
    """Root clustering changes with the clustering radius; multiplicities unsafe."""


class SpinWaveFunction:
    """Polynomial wave function of a spin-s particle, s = two_s / 2.

    Coefficients are indexed lowest power first: chi(zeta) = sum c_k zeta^k,
    k = 0 .. 2s. The natural inner product makes the monomials orthogonal
    with <zeta^k, zeta^k> = 1 / C(2s, k); the rotation action below is
    unitary for it.
    """

    __slots__ = ("two_s", "coeffs", "_divisor")

    def __init__(self, two_s, coeffs, allow_zero=False):
        if not isinstance(two_s, (int, np.integer)) or isinstance(two_s, bool) or two_s < 0:
            raise ValueError(f"two_s must be a nonnegative integer, got {two_s!r}")
        c = np.asarray(coeffs, dtype=complex).copy()
        if c.ndim != 1 or c.size != two_s + 1:
            raise ValueError(f"need {two_s + 1} coefficients for two_s={two_s}, got shape {c.shape}")
        if not np.all(np.isfinite(c.view(float))):
            raise ValueError("coefficients must be finite")
        if not allow_zero and not np.any(c != 0):
            raise ValueError("wave function must not be identically zero")
        c.setflags(write=False)
        object.__setattr__(self, "two_s", int(two_s))
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "_divisor", None)

    def __setattr__(self, name, value):
        raise AttributeError("SpinWaveFunction is immutable")

    @property
    def spin(self):
        return self.two_s / 2.0

    @property
    def effective_degree(self):
        """Degree after stripping trailing coefficients below round-off scale."""
        mags = np.abs(self.coeffs)
        peak = mags.max()
        if peak == 0.0:
            return 0
        live = np.nonzero(mags > 1e-12 * peak)[0]
        return int(live[-1]) if live.size else 0

    @classmethod
    def from_roots(cls, roots_with_mult, two_s=None):
        """Monic polynomial prod (zeta - a)^mu from (root, multiplicity) pairs."""
        c = np.array([1.0 + 0.0j])
        total = 0
        for a, mu in roots_with_mult:
            if not isinstance(mu, (int, np.integer)) or mu < 1:
                raise ValueError(f"multiplicity must be a positive integer, got {mu!r}")
            total += int(mu)
            c = P.polymul(c, P.polypow([-complex(a), 1.0], int(mu)))
        if two_s is None:
            two_s = total
        if total > two_s:
            raise ValueError(f"total multiplicity {total} exceeds 2s = {two_s}")
        coeffs = np.zeros(two_s + 1, dtype=complex)
        coeffs[: c.size] = c
        return cls(two_s, coeffs)

    def __call__(self, zeta):
        return P.polyval(zeta, self.coeffs)

    def derivative_values(self, zeta):
        return P.polyval(zeta, P.polyder(self.coeffs))

    def log_derivative(self, zeta):
        """chi'(zeta) / chi(zeta); poles at the roots."""
        return self.derivative_values(zeta) / self(zeta)

    def weighted_norm(self):
        weights = np.array([1.0 / math.comb(self.two_s, k) for k in range(self.two_s + 1)])
        return float(np.sqrt(np.sum(weights * np.abs(self.coeffs) ** 2)))

    def weighted_inner(self, other):
        if other.two_s != self.two_s:
            raise ValueError("wave functions live in different spin spaces")
        weights = np.array([1.0 / math.comb(self.two_s, k) for k in range(self.two_s + 1)])
        return complex(np.sum(weights * np.conj(self.coeffs) * other.coeffs))

    def normalized(self):
        return SpinWaveFunction(self.two_s, self.coeffs / self.weighted_norm())

    @property
    def is_normalized(self):
        return abs(self.weighted_norm() - 1.0) < 1e-10

    def roots(self):
        """Root locations repeated by multiplicity (from the cached divisor)."""
        div = self.divisor()
        return np.array([a for a, mu in div.entries for _ in range(mu)]) if div.entries else np.array([])

    def divisor(self):
        if self._divisor is None:
            object.__setattr__(self, "_divisor", vorticity_divisor(self))
        return self._divisor

    def __repr__(self):
        return f"SpinWaveFunction(two_s={self.two_s}, coeffs={np.array2string(self.coeffs, precision=4)})"


@dataclass(frozen=True)
class VorticityDivisor:
    """Point vortices of a wave function: (location, integer strength) pairs.

    The strengths sum to the effective polynomial degree; a deficit against
    2s means the remainder sits at infinity.
    """

    entries: tuple

    @property
    def total(self):
        return sum(mu for _, mu in self.entries)

    def locations(self):
        return np.array([a for a, _ in self.entries])


class SU2Element:
    """A special unitary 2x2 matrix [[a, b], [-conj(b), conj(a)]]."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=complex).copy()
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        if float(np.abs(m.conj().T @ m - np.eye(2)).max()) > 1e-12:
            raise ValueError("matrix is not unitary to tolerance")
        if abs(np.linalg.det(m) - 1.0) > 1e-12:
            raise ValueError("matrix does not have unit determinant")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __setattr__(self, name, value):
        raise AttributeError("SU2Element is immutable")

    @property
    def a(self):
        return complex(self.matrix[0, 0])

    @property
    def b(self):
        return complex(self.matrix[0, 1])

    @classmethod
    def identity(cls):
        return cls(np.eye(2))

    @classmethod
    def from_params(cls, a, b):
        return cls(np.array([[a, b], [-np.conj(b), np.conj(a)]]))

    @classmethod
    def diagonal(cls, alpha):
        """The z-rotation diag(e^{-i alpha/2}, e^{+i alpha/2})."""
        return cls.from_params(np.exp(-0.5j * alpha), 0.0)

    @classmethod
    def random(cls, rng):
        """Haar-ish random element from a normalized complex pair."""
        raw = rng.normal(size=4)
        a = raw[0] + 1j * raw[1]
        b = raw[2] + 1j * raw[3]
        nrm = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
        return cls.from_params(a / nrm, b / nrm)

    def __matmul__(self, other):
        return SU2Element(self.matrix @ other.matrix)

    def inverse(self):
        return SU2Element(self.matrix.conj().T)

    def mobius(self, zeta):
        """The Mobius map mu_g with (act(g, chi))(zeta) propto chi(mu_g(zeta)).

        Root locations transform by the inverse map: roots of act(g, chi)
        are g.inverse().mobius(old roots).
        """
        a, b = self.a, self.b
        return (np.conj(b) + a * zeta) / (np.conj(a) - b * zeta)

    def __repr__(self):
        return f"SU2Element(a={self.a:.4g}, b={self.b:.4g})"


def sz_apply(chi: SpinWaveFunction) -> SpinWaveFunction:
    """Spin-z operator in the monomial basis: c_k -> (k - s) c_k.

    The output may be the zero polynomial (when chi is the k = s monomial).
    """
    k = np.arange(chi.two_s + 1, dtype=float)
    return SpinWaveFunction(chi.two_s, (k - chi.spin) * chi.coeffs, allow_zero=True)


def su2_matrix(g: SU2Element, two_s) -> np.ndarray:
    """Matrix of the rotation action on coefficient vectors (monomial basis).

    Column k holds the coefficients of
    (conj(a) - b zeta)^(2s-k) (conj(b) + a zeta)^k: the image of zeta^k
    under precomposition of the degree-2s homogeneous representative with
    g^{-1}, dehomogenized back to zeta.
    """
    a, b = g.a, g.b
    out = np.zeros((two_s + 1, two_s + 1), dtype=complex)
    for k in range(two_s + 1):
        col = P.polymul(
            P.polypow([np.conj(a), -b], two_s - k),
            P.polypow([np.conj(b), a], k),
        )
        out[: col.size, k] = col
    return out


def su2_act(g: SU2Element, chi: SpinWaveFunction) -> SpinWaveFunction:
    """Rotate a wave function; degree preserving and unitary for the weighted product."""
    return SpinWaveFunction(chi.two_s, su2_matrix(g, chi.two_s) @ chi.coeffs, allow_zero=True)


def madelung_velocity(chi: SpinWaveFunction, zeta) -> np.ndarray:
    """Components (v_x, v_y) of the phase-gradient 1-form Im d log chi at zeta.

    With Q = chi'/chi this is Im[Q (dx + i dy)] = (Im Q) dx + (Re Q) dy.
    Refuses evaluation within the exclusion tolerance of a root.
    """
    zeta = complex(zeta)
    locs = chi.roots()
    if locs.size and float(np.abs(locs - zeta).min()) <= EXCLUSION_TOL:
        raise ValueError(f"evaluation point {zeta} is within {EXCLUSION_TOL} of a root")
    q = chi.log_derivative(zeta)
    return np.array([q.imag, q.real])


@dataclass(frozen=True)
class CircleContour:
    """Closed circle for circulation quadrature (trapezoidal, spectrally accurate)."""

    center: complex
    radius: float
    nodes: int = 256
    ccw: bool = True

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.nodes < 4:
            raise ValueError(f"need at least 4 quadrature nodes, got {self.nodes}")

    def quadrature(self):
        """(points, weighted tangents): integral of f dz ~ sum f(points) * tangents."""
        sign = 1.0 if self.ccw else -1.0
        tau = np.arange(self.nodes) / self.nodes
        ring = np.exp(sign * 2j * np.pi * tau)
        points = self.center + self.radius * ring
        tangents = sign * 2j * np.pi * self.radius * ring / self.nodes
        return points, tangents

    def distance_to(self, z) -> float:
        return abs(abs(complex(z) - self.center) - self.radius)


@dataclass(frozen=True)
class PolygonContour:
    """Closed polygonal loop; per-edge Gauss-Legendre quadrature.

    Orientation follows the vertex order; the loop closes from the last
    vertex back to the first.
    """

    vertices: tuple
    nodes_per_edge: int = 32

    def __post_init__(self):
        verts = tuple(complex(v) for v in self.vertices)
        if len(verts) < 3:
            raise ValueError(f"polygon needs at least 3 vertices, got {len(verts)}")
        object.__setattr__(self, "vertices", verts)

    def quadrature(self):
        t, w = np.polynomial.legendre.leggauss(self.nodes_per_edge)
        points = []
        tangents = []
        verts = self.vertices
        for idx in range(len(verts)):
            a, b = verts[idx], verts[(idx + 1) % len(verts)]
            mid, half = (a + b) / 2.0, (b - a) / 2.0
            points.append(mid + t * half)
            tangents.append(w * half)
        return np.concatenate(points), np.concatenate(tangents)

    def distance_to(self, z) -> float:
        z = complex(z)
        best = np.inf
        verts = self.vertices
        for idx in range(len(verts)):
            a, b = verts[idx], verts[(idx + 1) % len(verts)]
            edge = b - a
            length2 = abs(edge) ** 2
            frac = 0.0 if length2 == 0 else np.clip(((z - a) * np.conj(edge)).real / length2, 0.0, 1.0)
            best = min(best, abs(z - (a + frac * edge)))
        return float(best)


def circulation(chi: SpinWaveFunction, contour) -> float:
    """Circulation (1 / 2 pi) of the Madelung-Bohm velocity around a contour.

    Evaluates Im of the contour integral of chi'/chi; by the residue count
    the result is the total multiplicity of the enclosed roots, so it must
    come out an integer to quadrature accuracy.
    """
    locs = chi.roots()
    if locs.size:
        nearest = min(contour.distance_to(a) for a in locs)
        if nearest <= EXCLUSION_TOL:
            raise ContourTooCloseError(
                f"contour passes within {nearest!r} of a root (need > {EXCLUSION_TOL})"
            )
    points, tangents = contour.quadrature()
    integral = np.sum(chi.log_derivative(points) * tangents)
    return float(integral.imag / (2.0 * np.pi))


def total_spin_circulation(chi: SpinWaveFunction, nodes=256) -> float:
    """Circulation around all finite roots: the effective degree of chi.

    Equals 2s for a full-degree wave function. When the degree is deficient
    the missing vorticity sits at infinity and a warning is emitted.
    """
    if chi.effective_degree < chi.two_s:
        warnings.warn(
            f"degree {chi.effective_degree} < 2s = {chi.two_s}: "
            "the remaining vorticity sits at infinity",
            stacklevel=2,
        )
    locs = chi.roots()
    maxmod = float(np.abs(locs).max()) if locs.size else 0.0
    ring = CircleContour(0.0, 2.0 * maxmod + 1.0, nodes=nodes)
    return circulation(chi, ring)


def _cluster(points, radius):
    """Single-linkage clusters of complex points at the given radius."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= radius:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def vorticity_divisor(chi: SpinWaveFunction) -> VorticityDivisor:
    """Roots with multiplicities via companion-matrix eigenvalues.

    Raw roots are clustered within 1e-6 (1 + max modulus); simple roots are
    Newton-polished, multiple roots take the cluster mean. Clustering that
    changes when the radius moves a factor 4 either way raises
    ClusterAmbiguityError instead of guessing.
    """
    deg = chi.effective_degree
    if deg == 0:
        return VorticityDivisor(())
    c = chi.coeffs[: deg + 1]
    dchi = P.polyder(c)

    def polish(z):
        # Newton converges quadratically on simple roots and pulls the
        # eigenvalue cloud of a multiple root well inside the cluster radius
        for _ in range(20):
            deriv = P.polyval(z, dchi)
            if deriv == 0:
                return z
            step = P.polyval(z, c) / deriv
            if abs(step) > 0.1 * (1.0 + abs(z)):
                return z  # left the local basin; keep the eigenvalue estimate
            z -= step
            if abs(step) < 1e-15 * (1.0 + abs(z)):
                break
        return z

    refined = np.array([polish(z) for z in np.roots(c[::-1])])
    radius = 1e-6 * (1.0 + float(np.abs(refined).max()))
    clusters = _cluster(list(refined), radius)
    for factor in (0.25, 4.0):
        if len(_cluster(list(refined), radius * factor)) != len(clusters):
            raise ClusterAmbiguityError(
                f"root clusters unstable near radius {radius!r}; "
                "multiplicities cannot be assigned reliably"
            )
    entries = [(complex(np.mean(refined[group])), len(group)) for group in clusters]
    entries.sort(key=lambda e: (e[0].real, e[0].imag))
    return VorticityDivisor(tuple(entries))


@dataclass(frozen=True)
class IntegralityRecord:
    """Circulation of one contour against the nearest integer."""

    value: float
    nearest: int
    deviation: float
    ok: bool


def bohr_sommerfeld_check(chi: SpinWaveFunction, contours, tol=1e-8) -> list:
    """Quantization check: each contour circulation must be an integer.

    Integer circulation is single-valuedness of the wave function's phase
    (trivial holonomy of the velocity viewed as a flat connection); records
    with deviation beyond tol come back flagged ok=False.
    """
    out = []
    for contour in contours:
        value = circulation(chi, contour)
        nearest = int(np.rint(value))
        deviation = abs(value - nearest)
        out.append(IntegralityRecord(value, nearest, deviation, deviation <= tol))
    return out


def _require_number_list(name, obj, length=None):
    if not isinstance(obj, list):
        raise ValueError(f"'{name}' must be a list")
    if length is not None and len(obj) != length:
        raise ValueError(f"'{name}' must have {length} entries, got {len(obj)}")
    for idx, entry in enumerate(obj):
        if isinstance(entry, bool) or not isinstance(entry, numbers.Real):
            raise ValueError(f"'{name}[{idx}]' is not a number: {entry!r}")
        if not np.isfinite(float(entry)):
            raise ValueError(f"'{name}[{idx}]' is not finite")
    return [float(entry) for entry in obj]


def _load_json(source):
    if isinstance(source, dict):
        return source
    text = source
    if not (isinstance(source, str) and source.lstrip().startswith(("{", "["))):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def wavefunction_from_json(source) -> SpinWaveFunction:
    """Parse a wave function from JSON: coefficient or factored form.

    Coefficient form: {"two_s": 3, "coeffs_re": [...], "coeffs_im": [...]}
    (im optional). Factored form: {"roots": [[re, im, mult], ...]} with an
    optional "two_s" override when the degree is deficient.
    """
    data = _load_json(source)
    if not isinstance(data, dict):
        raise ValueError("wave function JSON must be an object")
    if "roots" in data:
        pairs = []
        if not isinstance(data["roots"], list):
            raise ValueError("'roots' must be a list of [re, im, mult] triples")
        for idx, entry in enumerate(data["roots"]):
            triple = _require_number_list(f"roots[{idx}]", entry, 3)
            mult = triple[2]
            if mult != int(mult) or int(mult) < 1:
                raise ValueError(f"'roots[{idx}][2]' must be a positive integer multiplicity")
            pairs.append((triple[0] + 1j * triple[1], int(mult)))
        return SpinWaveFunction.from_roots(pairs, two_s=data.get("two_s"))
    if "two_s" not in data:
        raise ValueError("missing 'two_s'")
    two_s = data["two_s"]
    if not isinstance(two_s, int) or isinstance(two_s, bool) or two_s < 0:
        raise ValueError(f"'two_s' must be a nonnegative integer, got {two_s!r}")
    if "coeffs_re" not in data:
        raise ValueError("missing 'coeffs_re'")
    re = _require_number_list("coeffs_re", data["coeffs_re"], two_s + 1)
    if "coeffs_im" in data and data["coeffs_im"] is not None:
        im = _require_number_list("coeffs_im", data["coeffs_im"], two_s + 1)
    else:
        im = [0.0] * (two_s + 1)
    return SpinWaveFunction(two_s, np.array(re) + 1j * np.array(im))


def contour_from_json(source):
    """Parse a contour: {"circle": {...}} or {"polygon": {...}}."""
    data = _load_json(source)
    if not isinstance(data, dict):
        raise ValueError("contour JSON must be an object")
    if "circle" in data:
        params = data["circle"]
        if not isinstance(params, dict):
            raise ValueError("'circle' must be an object")
        center = _require_number_list("circle.center", params.get("center", [0.0, 0.0]), 2)
        radius = params.get("radius")
        if isinstance(radius, bool) or not isinstance(radius, numbers.Real) or radius <= 0:
            raise ValueError(f"'circle.radius' must be a positive number, got {radius!r}")
        nodes = params.get("nodes", 256)
        if not isinstance(nodes, int) or isinstance(nodes, bool) or nodes < 4:
            raise ValueError(f"'circle.nodes' must be an integer >= 4, got {nodes!r}")
        return CircleContour(center[0] + 1j * center[1], float(radius), nodes, bool(params.get("ccw", True)))
    if "polygon" in data:
        params = data["polygon"]
        if not isinstance(params, dict):
            raise ValueError("'polygon' must be an object")
        raw = params.get("vertices")
        if not isinstance(raw, list) or len(raw) < 3:
            raise ValueError("'polygon.vertices' must list at least 3 [re, im] pairs")
        verts = []
        for idx, entry in enumerate(raw):
            pair = _require_number_list(f"polygon.vertices[{idx}]", entry, 2)
            verts.append(pair[0] + 1j * pair[1])
        nodes = params.get("nodes_per_edge", 32)
        if not isinstance(nodes, int) or isinstance(nodes, bool) or nodes < 2:
            raise ValueError(f"'polygon.nodes_per_edge' must be an integer >= 2, got {nodes!r}")
        return PolygonContour(tuple(verts), nodes)
    raise ValueError("contour JSON needs a 'circle' or 'polygon' key")
