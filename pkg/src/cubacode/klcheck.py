"""Error-correction condition checks in exact closed form.

Coherent states have analytic overlaps and ladder-operator matrix elements:

    <a|b>                      = exp(-|a|^2/2 - |b|^2/2 + a* . b)
    <a| prod (a_j^+)^p a_j^q |b> = prod (a_j*)^p_j b_j^q_j * <a|b>

so every block <C_k| E_mu^+ E_nu |C_l> of the correction condition for the
pure-loss error set is a finite weighted sum of such terms, with no Fock
truncation involved.  The asymptotic (large-energy) parameters reduce to
weighted-moment matching and are computed by exhaustive enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from .constellation import CodeSpec, as_amplitude
from .errors import DegenerateCodewordsError, ValidationError
from .moments import multi_indices, multi_indices_upto, weighted_moment


def coherent_overlap(a, b) -> complex:
    """Inner product of two coherent states with amplitude vectors a, b."""
    a = as_amplitude(a)
    b = as_amplitude(b)
    if a.shape != b.shape:
        raise ValidationError("amplitude points must share the mode count")
    return complex(
        np.exp(-0.5 * np.vdot(a, a).real - 0.5 * np.vdot(b, b).real + np.vdot(a, b))
    )


def ladder_matrix_element(a, b, p: Sequence[int], q: Sequence[int]) -> complex:
    """Exact matrix element <a| prod_j (a_j^+)^p_j a_j^q_j |b>."""
    a = as_amplitude(a)
    b = as_amplitude(b)
    p = np.asarray(p, dtype=int)
    q = np.asarray(q, dtype=int)
    if not (a.shape == b.shape == p.shape == q.shape):
        raise ValidationError("amplitudes and multi-indices must share the mode count")
    return complex(np.prod(np.conj(a) ** p * b**q) * coherent_overlap(a, b))


def _pairwise_overlaps(pts_a: np.ndarray, pts_b: np.ndarray) -> np.ndarray:
    # Gram of coherent states: exp(-|a|^2/2 - |b|^2/2 + a* . b), vectorized.
    na = (np.abs(pts_a) ** 2).sum(axis=1)
    nb = (np.abs(pts_b) ** 2).sum(axis=1)
    cross = np.conj(pts_a) @ pts_b.T
    return np.exp(-0.5 * na[:, None] - 0.5 * nb[None, :] + cross)


def codeword_gram(code: CodeSpec, scale: float = 1.0) -> np.ndarray:
    """Gram matrix of the raw codeword vectors sum_a sqrt(w_a) |scale*a>."""
    K = code.dim
    g = np.empty((K, K), dtype=complex)
    for k in range(K):
        for l in range(k, K):
            ck, cl = code.logicals[k], code.logicals[l]
            ov = _pairwise_overlaps(scale * ck.points, scale * cl.points)
            g[k, l] = np.sqrt(ck.weights) @ ov @ np.sqrt(cl.weights)
            g[l, k] = np.conj(g[k, l])
    return g


def lowdin_inverse_sqrt(gram: np.ndarray, rel_floor: float = 1e-12) -> np.ndarray:
    """Hermitian inverse square root of a Gram matrix (symmetric
    orthogonalization).  Raises when the Gram is numerically singular."""
    vals, vecs = np.linalg.eigh(gram)
    if vals.min() <= rel_floor * vals.max():
        raise DegenerateCodewordsError(
            f"degenerate codewords: Gram eigenvalue ratio {vals.min() / vals.max():.3e}"
        )
    return (vecs * (1.0 / np.sqrt(vals))) @ np.conj(vecs.T)


@dataclass(frozen=True)
class KLReport:
    """Blocks <C_k|E_mu^+ E_nu|C_l> for the pure-loss error set, after
    symmetric orthonormalization of the codewords at the given scale.

    ``matrices`` maps (q_mu, q_nu) to the K x K block.  ``off_diag_max`` is
    the largest |k != l| entry over all blocks; ``off_diag_rel`` divides
    each block's off-diagonal maximum by max(its largest diagonal
    magnitude, 1) before taking the maximum, removing the polynomial growth
    of high-order blocks.  ``diag_spread_max`` is the largest per-block
    diagonal spread normalized the same way (the orthonormalized identity
    block sets the unit, so blocks whose diagonals vanish asymptotically
    report ~0 instead of 0/0 noise); ``diag_spread_raw`` is unnormalized.
    """

    error_set_label: str
    matrices: Dict[Tuple[tuple, tuple], np.ndarray]
    off_diag_max: float
    off_diag_rel: float
    diag_spread_max: float
    diag_spread_raw: float
    scale: float


def kl_report(code: CodeSpec, max_loss: int, scale: float) -> KLReport:
    """Evaluate the correction-condition blocks for all loss errors with at
    most ``max_loss`` total lost photons, exactly from coherent-state
    matrix elements."""
    if scale <= 0:
        raise ValidationError("scale must be positive")
    if max_loss < 0:
        raise ValidationError("max_loss must be nonnegative")
    K, n = code.dim, code.modes
    gram = codeword_gram(code, scale)
    ginv = lowdin_inverse_sqrt(gram)

    qs = list(multi_indices_upto(n, int(max_loss)))
    # Precompute weighted point data per codeword at the working scale.
    pts = [scale * c.points for c in code.logicals]
    sqw = [np.sqrt(c.weights) for c in code.logicals]
    overlaps = [[_pairwise_overlaps(pts[k], pts[l]) for l in range(K)] for k in range(K)]

    matrices: Dict[Tuple[tuple, tuple], np.ndarray] = {}
    off_diag_max = 0.0
    off_rel_max = 0.0
    spread_raw_max = 0.0
    spread_norm_max = 0.0
    for mu in qs:
        for nu in qs:
            raw = np.empty((K, K), dtype=complex)
            for k in range(K):
                for l in range(K):
                    # <C_k| prod (a^+)^mu a^nu |C_l> expands over point pairs.
                    fa = np.prod(np.conj(pts[k]) ** np.asarray(mu), axis=1)
                    fb = np.prod(pts[l] ** np.asarray(nu), axis=1)
                    raw[k, l] = (sqw[k] * fa) @ overlaps[k][l] @ (sqw[l] * fb)
            block = ginv @ raw @ ginv
            matrices[(mu, nu)] = block
            off = float(np.abs(block - np.diag(np.diag(block))).max())
            diag = np.diag(block)
            unit = max(float(np.abs(diag).max()), 1.0)
            spread = float(np.abs(diag[:, None] - diag[None, :]).max())
            off_diag_max = max(off_diag_max, off)
            off_rel_max = max(off_rel_max, off / unit)
            spread_raw_max = max(spread_raw_max, spread)
            spread_norm_max = max(spread_norm_max, spread / unit)
    return KLReport(
        error_set_label=f"loss<={max_loss}",
        matrices=matrices,
        off_diag_max=off_diag_max,
        off_diag_rel=off_rel_max,
        diag_spread_max=spread_norm_max,
        diag_spread_raw=spread_raw_max,
        scale=float(scale),
    )


@dataclass(frozen=True)
class ParamTriple:
    """Asymptotic loss-protection parameters <t_down, d_updown, d_down>.

    (t_down - 1) losses are correctable, (d_down - 1) pure losses and
    (d_updown - 1) mixed loss-gain events are detectable.  Values are capped
    by the search ceiling used to compute them.
    """

    t_down: int
    d_updown: int
    d_down: int
    search_ceiling: int

    def __post_init__(self):
        if not (1 <= self.t_down and 1 <= self.d_updown and 1 <= self.d_down):
            raise ValidationError("parameters must be positive")
        if self.d_updown > self.d_down:
            raise ValidationError("loss-gain detection cannot exceed pure-loss detection")
        if max(self.t_down, self.d_updown, self.d_down) > self.search_ceiling:
            raise ValidationError("parameters exceed the search ceiling")

    def astuple(self) -> tuple:
        return (self.t_down, self.d_updown, self.d_down)

    def __str__(self):
        return f"<{self.t_down},{self.d_updown},{self.d_down}>"


def code_parameters(code: CodeSpec, ceiling: int, tol: float = 1e-9) -> ParamTriple:
    """Moment-based parameters by exhaustive multi-index enumeration.

    t_down:   largest k <= ceiling with all moments (p, q), |p|,|q| <= k-1
              matching across codewords within tol;
    d_down:   largest d with all pure-loss moments (0, q), |q| <= d-1 matching;
    d_updown: largest d with all (p, q), |p|+|q| <= d-1 matching.
    """
    if code.dim < 2:
        raise ValidationError("code parameters need at least two codewords")
    if ceiling < 1:
        raise ValidationError("search ceiling must be >= 1")
    n = code.modes
    ceiling = int(ceiling)

    def matches(p, q) -> bool:
        m = np.array([weighted_moment(c, p, q) for c in code.logicals])
        return bool(np.abs(m - m[0]).max() <= tol)

    zero = (0,) * n

    d_down = ceiling
    for degree in range(1, ceiling):
        if not all(matches(zero, q) for q in multi_indices(n, degree)):
            d_down = degree
            break

    d_updown = ceiling
    for degree in range(1, ceiling):
        ok = all(
            matches(pq[:n], pq[n:]) for pq in multi_indices(2 * n, degree)
        )
        if not ok:
            d_updown = degree
            break

    t_down = ceiling
    for k in range(2, ceiling + 1):
        # New pairs at level k have |p| = k-1 or |q| = k-1 (box growth).
        ok = True
        for dp in range(k):
            for dq in range(k):
                if dp != k - 1 and dq != k - 1:
                    continue
                for p in multi_indices(n, dp):
                    for q in multi_indices(n, dq):
                        if not matches(p, q):
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            t_down = k - 1
            break

    return ParamTriple(t_down=t_down, d_updown=d_updown, d_down=d_down, search_ceiling=ceiling)
