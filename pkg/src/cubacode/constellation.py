"""Weighted coherent-state constellations and their geometry.

A constellation is a finite set of complex amplitude vectors together with
positive weights summing to one; a code is a family of such constellations
(one per logical state) on a common mode count.  This module holds the data
types, the real/complex embedding, orthogonal rotations, energy rescaling
and the nearest-neighbour resolution metric.  All types are immutable after
construction and all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import ValidationError

# Geometric equality / orthogonality / weight tolerances.  Chosen to sit far
# above double-precision noise at the dimensions handled here (D <= ~8).
GEOM_TOL = 1e-9
ORTHO_TOL = 1e-10
WEIGHT_TOL = 1e-12
DISTINCT_TOL = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_amplitude(coords) -> np.ndarray:
    """Validate and return a single amplitude point as a 1-D complex array."""
    a = np.atleast_1d(np.asarray(coords, dtype=complex))
    if a.ndim != 1 or a.size < 1:
        raise ValidationError("amplitude point must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(a.view(float))):
        raise ValidationError("amplitude point has non-finite entries")
    return a


@dataclass(frozen=True)
class WeightedConstellation:
    """Finite set of n-mode amplitude points with normalized positive weights.

    ``points`` has shape (size, modes); ``weights`` has shape (size,), is
    strictly positive and sums to one.  Points must be pairwise distinct.
    """

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=complex))
        w = np.asarray(self.weights, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValidationError("points must form a (size, modes) array with size, modes >= 1")
        if not np.all(np.isfinite(pts.view(float))):
            raise ValidationError("constellation points have non-finite entries")
        if w.shape != (pts.shape[0],):
            raise ValidationError("weights length must match the number of points")
        if np.any(w <= 0):
            raise ValidationError("all weights must be strictly positive")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValidationError(f"weights must sum to 1 within {WEIGHT_TOL} (got {w.sum()!r})")
        if pts.shape[0] > 1 and min_squared_distance(pts) <= DISTINCT_TOL:
            raise ValidationError("constellation points must be pairwise distinct")
        object.__setattr__(self, "points", _freeze(pts))
        object.__setattr__(self, "weights", _freeze(w))

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def modes(self) -> int:
        return self.points.shape[1]

    def scaled(self, factor: float) -> "WeightedConstellation":
        """Uniformly rescale all amplitudes; weights are unchanged."""
        return WeightedConstellation(self.points * factor, self.weights)

    def radii(self) -> np.ndarray:
        """Euclidean norm of each amplitude point."""
        return np.linalg.norm(self.points, axis=1)


@dataclass(frozen=True)
class CodeSpec:
    """K weighted constellations sharing a mode count, plus metadata.

    ``shells`` lists the nominal shell radii; when non-empty, every point's
    norm must match one of them within GEOM_TOL.  ``claimed_degree`` is the
    nominal cubature degree of each logical constellation (None if unknown).
    """

    name: str
    logicals: tuple
    shells: tuple = ()
    claimed_degree: Optional[int] = None
    warnings: tuple = ()

    def __post_init__(self):
        logicals = tuple(self.logicals)
        if len(logicals) < 1:
            raise ValidationError("a code needs at least one logical constellation")
        n = logicals[0].modes
        if any(c.modes != n for c in logicals):
            raise ValidationError("all logical constellations must share the mode count")
        shells = tuple(float(r) for r in self.shells)
        if any(r < 0 for r in shells):
            raise ValidationError("shell radii must be nonnegative")
        if shells:
            for k, c in enumerate(logicals):
                norms = c.radii()
                dist = np.abs(norms[:, None] - np.asarray(shells)[None, :]).min(axis=1)
                if dist.max() > GEOM_TOL:
                    i = int(dist.argmax())
                    raise ValidationError(
                        f"point {i} of logical {k} has norm {norms[i]!r} matching no declared shell"
                    )
        object.__setattr__(self, "logicals", logicals)
        object.__setattr__(self, "shells", shells)
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @property
    def modes(self) -> int:
        return self.logicals[0].modes

    @property
    def dim(self) -> int:
        """Number of logical states K."""
        return len(self.logicals)

    def all_points(self) -> np.ndarray:
        """Stacked points of every logical constellation, shape (total, modes)."""
        return np.vstack([c.points for c in self.logicals])


@dataclass(frozen=True)
class CodeParams:
    """Code parameter tuple (n, K, d_E, <t_down, d_updown, d_down>)."""

    modes: int
    dim: int
    resolution: float
    t_down: int
    d_updown: int
    d_down: int

    def __post_init__(self):
        if self.resolution < 0:
            raise ValidationError("resolution must be nonnegative")
        if self.t_down > self.d_updown:
            raise ValidationError("t_down cannot exceed d_updown")

    def __str__(self):
        return (
            f"(( {self.modes}, {self.dim}, {self.resolution:.6g}, "
            f"<{self.t_down},{self.d_updown},{self.d_down}> ))"
        )


# ---------------------------------------------------------------------------
# Rotations on the real embedding of amplitude space
# ---------------------------------------------------------------------------

# The complex structure J on interleaved real coordinates (x1, y1, x2, y2, ...)
# is block-diagonal with 2x2 blocks [[0, -1], [1, 0]].  A real orthogonal
# matrix commuting with J is the real picture of a passive U(n) unitary.


def _complex_structure(dim: int) -> np.ndarray:
    j = np.zeros((dim, dim))
    for i in range(0, dim, 2):
        j[i, i + 1] = -1.0
        j[i + 1, i] = 1.0
    return j


@dataclass(frozen=True)
class Rotation:
    """Real orthogonal D x D matrix acting on the real embedding (D = 2n)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError("rotation matrix must be square")
        if m.shape[0] % 2 != 0:
            raise ValidationError("rotation must act on an even real dimension")
        if np.abs(m.T @ m - np.eye(m.shape[0])).max() > ORTHO_TOL:
            raise ValidationError("rotation matrix is not orthogonal within tolerance")
        det = np.linalg.det(m)
        if min(abs(det - 1.0), abs(det + 1.0)) > ORTHO_TOL:
            raise ValidationError("rotation determinant must be +/-1")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def modes(self) -> int:
        return self.dim // 2

    @classmethod
    def identity(cls, modes: int) -> "Rotation":
        return cls(np.eye(2 * modes))

    @classmethod
    def from_complex_unitary(cls, u) -> "Rotation":
        """Real 2n x 2n picture of a passive unitary u in U(n)."""
        u = np.atleast_2d(np.asarray(u, dtype=complex))
        n = u.shape[0]
        m = np.zeros((2 * n, 2 * n))
        m[0::2, 0::2] = u.real
        m[0::2, 1::2] = -u.imag
        m[1::2, 0::2] = u.imag
        m[1::2, 1::2] = u.real
        return cls(m)

    @classmethod
    def mode_phases(cls, angles: Sequence[float]) -> "Rotation":
        """Per-mode phase rotation alpha_j -> exp(i phi_j) alpha_j."""
        return cls.from_complex_unitary(np.diag(np.exp(1j * np.asarray(angles, dtype=float))))

    @classmethod
    def global_phase(cls, modes: int, angle: float) -> "Rotation":
        """Uniform phase rotation of every mode (isoclinic for n = 2)."""
        return cls.mode_phases([angle] * modes)

    def complex_unitary(self) -> Optional[np.ndarray]:
        """The n x n unitary this rotation represents, or None if it is not
        complex-linear (i.e. not a passive optical transformation)."""
        m = self.matrix
        j = _complex_structure(self.dim)
        if np.abs(m @ j - j @ m).max() > ORTHO_TOL:
            return None
        return m[0::2, 0::2] + 1j * m[1::2, 0::2]


# ---------------------------------------------------------------------------
# Embedding and transforms
# ---------------------------------------------------------------------------


def embed_real_to_complex(points) -> np.ndarray:
    """Map real D-vectors to C^{D/2} by pairing consecutive coordinates.

    (x1, ..., xD) -> (x1 + i x2, ..., x_{D-1} + i x_D).  Euclidean norms are
    preserved.  D must be even.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] % 2 != 0:
        raise ValidationError("odd real dimension: the complex embedding needs D even")
    return pts[:, 0::2] + 1j * pts[:, 1::2]


def embed_complex_to_real(points) -> np.ndarray:
    """Inverse of :func:`embed_real_to_complex`: (N, n) complex -> (N, 2n) real."""
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    out = np.empty((pts.shape[0], 2 * pts.shape[1]))
    out[:, 0::2] = pts.real
    out[:, 1::2] = pts.imag
    return out


def apply_rotation(c: WeightedConstellation, r: Rotation) -> WeightedConstellation:
    """Rotate every point of a constellation; weights are unchanged."""
    if r.dim != 2 * c.modes:
        raise ValidationError(f"rotation dimension {r.dim} does not match 2n = {2 * c.modes}")
    rotated = embed_real_to_complex(embed_complex_to_real(c.points) @ r.matrix.T)
    return WeightedConstellation(rotated, c.weights)


def rotate_code(code: CodeSpec, r: Rotation) -> CodeSpec:
    """Apply one common rotation to all logical constellations."""
    return CodeSpec(
        name=code.name,
        logicals=tuple(apply_rotation(c, r) for c in code.logicals),
        shells=code.shells,
        claimed_degree=code.claimed_degree,
        warnings=code.warnings,
    )


def min_squared_distance(points: np.ndarray) -> float:
    """Minimum squared Euclidean distance over all index pairs i < j."""
    pts = np.atleast_2d(np.asarray(points))
    diff = pts[:, None, :] - pts[None, :, :]
    d2 = np.abs(diff * diff.conj()).sum(axis=-1).real
    iu = np.triu_indices(pts.shape[0], k=1)
    return float(d2[iu].min())


def resolution(code: CodeSpec) -> float:
    """Global nearest-neighbour squared distance over the union of all
    logical constellations (the code's resolution)."""
    pts = code.all_points()
    if pts.shape[0] < 2:
        raise ValidationError("resolution needs at least 2 points")
    diff = pts[:, None, :] - pts[None, :, :]
    d2 = np.abs(diff * diff.conj()).sum(axis=-1).real
    iu = np.triu_indices(pts.shape[0], k=1)
    if d2[iu].max() <= DISTINCT_TOL:
        raise ValidationError("resolution needs at least 2 distinct points")
    return float(d2[iu].min())


def mean_photon_number(c: WeightedConstellation) -> float:
    """Weighted mean of ||alpha||^2 (the constellation's effective energy)."""
    return float(c.weights @ (np.abs(c.points) ** 2).sum(axis=1))


def scale_code(code: CodeSpec, factor: float) -> CodeSpec:
    """Rescale every amplitude (and the declared shells) by ``factor``."""
    if factor <= 0:
        raise ValidationError("scale factor must be positive")
    return CodeSpec(
        name=code.name,
        logicals=tuple(c.scaled(factor) for c in code.logicals),
        shells=tuple(r * factor for r in code.shells),
        claimed_degree=code.claimed_degree,
        warnings=code.warnings,
    )


def normalize_energy(code: CodeSpec, target: float) -> tuple:
    """Rescale the code so every logical constellation has mean photon
    number ``target``.  Returns (scaled code, scale factor lambda).

    Fails if the logical constellations disagree on the mean photon number
    (they could not then be normalized simultaneously) or contain only
    zero-amplitude points.
    """
    if target <= 0:
        raise ValidationError("target mean photon number must be positive")
    nbars = [mean_photon_number(c) for c in code.logicals]
    if max(nbars) <= 0:
        raise ValidationError("cannot normalize an all-zero constellation")
    if max(nbars) - min(nbars) > GEOM_TOL:
        raise ValidationError(
            f"logical constellations have unequal mean photon numbers: {nbars}"
        )
    lam = float(np.sqrt(target / nbars[0]))
    return scale_code(code, lam), lam


# ---------------------------------------------------------------------------
# Rotation families and codeword-rotation optimization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RotationFamily:
    """Parameterized family of rotations over a bounded box.

    ``build`` maps a parameter vector (length = len(lower)) to a Rotation.
    """

    lower: np.ndarray
    upper: np.ndarray
    build: Callable
    name: str = ""

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1 or lo.size < 1:
            raise ValidationError("rotation family needs matching 1-D bounds")
        if np.any(hi < lo):
            raise ValidationError("rotation family box has upper < lower")
        object.__setattr__(self, "lower", _freeze(lo))
        object.__setattr__(self, "upper", _freeze(hi))


def plane_rotation_family(lo: float = 0.0, hi: float = 2 * np.pi) -> RotationFamily:
    """Single-mode phase rotations alpha -> exp(i theta) alpha."""
    return RotationFamily(
        lower=np.array([lo]),
        upper=np.array([hi]),
        build=lambda p: Rotation.global_phase(1, float(p[0])),
        name="plane",
    )


def global_phase_family(modes: int, lo: float = 0.0, hi: float = np.pi / 2) -> RotationFamily:
    """Uniform-phase (isoclinic) rotations of all modes."""
    return RotationFamily(
        lower=np.array([lo]),
        upper=np.array([hi]),
        build=lambda p: Rotation.global_phase(modes, float(p[0])),
        name="global-phase",
    )


def mode_phase_family(modes: int, lo: float = 0.0, hi: float = 2 * np.pi) -> RotationFamily:
    """Independent per-mode phase rotations (an n-parameter family)."""
    return RotationFamily(
        lower=np.full(modes, lo),
        upper=np.full(modes, hi),
        build=lambda p: Rotation.mode_phases(np.asarray(p, dtype=float)),
        name="mode-phases",
    )


def _pair_resolution(base: np.ndarray, rotated: np.ndarray) -> float:
    # Multiset resolution of the two-codeword configuration: coincident
    # cross-codeword points (a degenerate code) score 0.
    return min_squared_distance(np.vstack([base, rotated]))


def optimize_codeword_rotation(
    code: CodeSpec, family: RotationFamily, steps: int = 200
) -> tuple:
    """Search a rotation family for the member maximizing the resolution of
    the two-codeword code [C0, R(C0)] built from the first logical.

    Deterministic: a uniform grid scan over the family box followed by
    coordinate-wise golden-section refinement around the best grid point.
    Returns (best rotation, achieved resolution).
    """
    if code.dim != 2:
        raise ValidationError("rotation optimization is defined for K = 2 codes")
    if steps < 1:
        raise ValidationError("rotation search needs at least one step")
    base = code.logicals[0]
    lo, hi = family.lower, family.upper
    d = lo.size

    def objective(params: np.ndarray) -> float:
        rot = family.build(params)
        rotated = apply_rotation(base, rot)
        return _pair_resolution(base.points, rotated.points)

    # Coarse deterministic grid.
    per_dim = max(2, int(round(steps ** (1.0 / d))))
    axes = [np.linspace(lo[i], hi[i], per_dim) for i in range(d)]
    grids = np.meshgrid(*axes, indexing="ij")
    candidates = np.stack([g.ravel() for g in grids], axis=1)
    values = np.array([objective(c) for c in candidates])
    best = candidates[int(values.argmax())].copy()
    best_val = float(values.max())

    # Golden-section refinement, one coordinate at a time.
    golden = (np.sqrt(5.0) - 1.0) / 2.0
    for _ in range(3):
        for i in range(d):
            span = (hi[i] - lo[i]) / max(per_dim - 1, 1)
            if span == 0:
                continue
            a = max(lo[i], best[i] - span)
            b = min(hi[i], best[i] + span)
            x1 = b - golden * (b - a)
            x2 = a + golden * (b - a)
            p1, p2 = best.copy(), best.copy()
            p1[i], p2[i] = x1, x2
            f1, f2 = objective(p1), objective(p2)
            for _ in range(60):
                if f1 < f2:
                    a, x1, f1 = x1, x2, f2
                    x2 = a + golden * (b - a)
                    p2[i] = x2
                    f2 = objective(p2)
                else:
                    b, x2, f2 = x2, x1, f1
                    x1 = b - golden * (b - a)
                    p1[i] = x1
                    f1 = objective(p1)
            for p, f in ((p1, f1), (p2, f2)):
                if f > best_val:
                    best, best_val = p.copy(), float(f)

    return family.build(best), best_val
