import numpy as np
import pytest

from cubacode import (
    DegenerateCodewordsError,
    FockSpace,
    ValidationError,
    build_catalog_code,
    cat_code,
    coherent_fock,
    coherent_overlap,
    code_parameters,
    kl_report,
    ladder_matrix_element,
    polygon_shell_code,
)
from cubacode.fock import annihilation
from cubacode.klcheck import ParamTriple, codeword_gram


def fock_ladder_element(a, b, p, q, cutoff=40):
    space = FockSpace(1, cutoff)
    fa = coherent_fock(np.atleast_1d(a), space).amplitudes
    fb = coherent_fock(np.atleast_1d(b), space).amplitudes
    op = np.linalg.matrix_power(annihilation(cutoff).conj().T, p) @ np.linalg.matrix_power(
        annihilation(cutoff), q
    )
    return complex(np.vdot(fa, op @ fb))


# ---------------------------------------------------------------------------
# Closed-form matrix elements
# ---------------------------------------------------------------------------


def test_overlap_with_itself_is_one():
    a = np.array([0.7 - 0.2j, 1.1 + 0.4j])
    assert coherent_overlap(a, a) == pytest.approx(1.0)


def test_overlap_antipodal_pair():
    assert coherent_overlap([1.0], [-1.0]) == pytest.approx(np.exp(-2.0))


def test_overlap_quarter_turn_magnitude_and_fock_value():
    val = coherent_overlap([1.0], [1.0j])
    assert abs(val) == pytest.approx(np.exp(-1.0))
    fock = fock_ladder_element(1.0, 1.0j, 0, 0)
    assert val == pytest.approx(fock, abs=1e-10)


def test_overlap_magnitude_is_distance_suppressed(rng):
    for _ in range(20):
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        b = rng.normal(size=2) + 1j * rng.normal(size=2)
        mag = abs(coherent_overlap(a, b))
        assert mag == pytest.approx(np.exp(-0.5 * np.linalg.norm(a - b) ** 2), rel=1e-12)


def test_overlap_dimension_mismatch():
    with pytest.raises(ValidationError, match="mode count"):
        coherent_overlap([1.0], [1.0, 2.0])


def test_ladder_element_reduces_to_overlap():
    a, b = np.array([0.4 + 0.1j]), np.array([-0.3 + 0.8j])
    assert ladder_matrix_element(a, b, (0,), (0,)) == pytest.approx(coherent_overlap(a, b))


def test_ladder_element_number_expectation():
    a = np.array([1.3 - 0.7j])
    assert ladder_matrix_element(a, a, (1,), (1,)) == pytest.approx(abs(a[0]) ** 2)


def test_ladder_element_against_fock(rng):
    for _ in range(30):
        a = complex(rng.normal(), rng.normal())
        b = complex(rng.normal(), rng.normal())
        p, q = int(rng.integers(0, 4)), int(rng.integers(0, 4))
        exact = ladder_matrix_element([a], [b], (p,), (q,))
        assert exact == pytest.approx(fock_ladder_element(a, b, p, q), abs=1e-9)


# ---------------------------------------------------------------------------
# KL report
# ---------------------------------------------------------------------------


def test_kl_blocks_are_block_hermitian():
    rep = kl_report(cat_code(2, 2), max_loss=2, scale=2.0)
    for (mu, nu), blk in rep.matrices.items():
        assert np.abs(blk - rep.matrices[(nu, mu)].conj().T).max() < 1e-10


def test_kl_identity_block_is_identity():
    rep = kl_report(cat_code(2, 2), max_loss=1, scale=2.0)
    eye_block = rep.matrices[((0,), (0,))]
    assert np.abs(eye_block - np.eye(2)).max() < 1e-12


def test_kl_off_diagonal_suppression_cat():
    # Off-diagonals follow exp(-d_E s^2 / 2) times a polynomial prefactor;
    # with d_E = 2 they reach 1e-6 near scale 4.4 (at scale 3 the bare
    # suppression floor exp(-9) ~ 1.2e-4 makes a 1e-6 bound unattainable).
    code = cat_code(2, 2)
    assert kl_report(code, 1, 3.0).off_diag_max < 2e-3
    assert kl_report(code, 1, 4.4).off_diag_max < 1e-6


def test_kl_off_diagonal_decay_slope():
    code = cat_code(2, 2)
    scales = [2.0, 2.75, 3.5, 4.25, 5.0]
    offs = [kl_report(code, 1, s).off_diag_max for s in scales]
    assert all(b < a for a, b in zip(offs, offs[1:]))
    slope = np.polyfit([s**2 for s in scales], np.log(offs), 1)[0]
    assert abs(slope - (-1.0)) < 0.1  # -d_E/2 with d_E = 2


def test_kl_24cell_diag_spread_and_scaled_off_diagonals():
    code = build_catalog_code("cube_orthoplex", {"D": 4})
    rep = kl_report(code, max_loss=4, scale=4.0)
    assert rep.diag_spread_max < 1e-3
    assert rep.off_diag_rel < 5e-2
    rep5 = kl_report(code, max_loss=2, scale=5.0)
    assert rep5.off_diag_rel < 1e-3


def test_kl_diag_spread_approaches_moment_spread():
    # Large-scale limit: the diagonal entries converge to the weighted
    # moments, which match exactly for this code.
    rep = kl_report(cat_code(2, 2), max_loss=1, scale=8.0)
    assert rep.diag_spread_max < 1e-12


def test_kl_degenerate_codewords_raise():
    with pytest.raises(DegenerateCodewordsError, match="degenerate"):
        kl_report(cat_code(2, 2), max_loss=1, scale=1e-6)


def test_kl_gram_matches_overlap_sum():
    code = cat_code(2, 2)
    g = codeword_gram(code, 2.0)
    # Raw codeword inner product is the 4-term coherent-overlap sum.
    expected = 0.0
    for a in (2.0, -2.0):
        for b in (2.0j, -2.0j):
            expected += 0.5 * coherent_overlap([a], [b])
    assert g[0, 1] == pytest.approx(expected, abs=1e-14)


# ---------------------------------------------------------------------------
# Code parameters
# ---------------------------------------------------------------------------


def test_parameters_hexagon_two_shell():
    code = polygon_shell_code(6, 2, (1.0, 2.0))
    assert code_parameters(code, ceiling=20).astuple() == (7, 8, 18)


def test_parameters_cell16_qutrit():
    assert code_parameters(build_catalog_code("cell16_qutrit"), ceiling=8).astuple() == (2, 4, 4)


def test_parameters_square_three_shell():
    code = polygon_shell_code(4, 3, (1.0, 2.0, 3.0))
    assert code_parameters(code, ceiling=14).astuple() == (6, 8, 12)


def test_parameters_scale_invariant():
    from cubacode import scale_code

    code = polygon_shell_code(4, 2, (1.0, 2.0))
    a = code_parameters(code, ceiling=10).astuple()
    b = code_parameters(scale_code(code, 0.37), ceiling=10).astuple()
    assert a == b


def test_parameters_need_two_codewords():
    with pytest.raises(ValidationError, match="two codewords"):
        code_parameters(build_catalog_code("cat", {"m": 4, "K": 1}), ceiling=5)


def test_param_triple_invariants():
    with pytest.raises(ValidationError):
        ParamTriple(t_down=3, d_updown=5, d_down=4, search_ceiling=10)
    with pytest.raises(ValidationError):
        ParamTriple(t_down=3, d_updown=4, d_down=11, search_ceiling=10)
