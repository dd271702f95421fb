import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubacode import (
    CodeSpec,
    Rotation,
    ValidationError,
    WeightedConstellation,
    apply_rotation,
    build_catalog_code,
    cat_code,
    embed_complex_to_real,
    embed_real_to_complex,
    global_phase_family,
    mean_photon_number,
    normalize_energy,
    optimize_codeword_rotation,
    plane_rotation_family,
    polygon_shell_code,
    resolution,
    rotate_code,
    scale_code,
    two_shell_24cell_code,
)
from cubacode.constellation import RotationFamily, min_squared_distance


def random_orthogonal(dim, seed):
    gen = np.random.default_rng(seed)
    q, r = np.linalg.qr(gen.normal(size=(dim, dim)))
    return q * np.sign(np.diag(r))


# ---------------------------------------------------------------------------
# Embedding
# ---------------------------------------------------------------------------


def test_embed_basis_vector():
    out = embed_real_to_complex([[1.0, 0.0, 0.0, 0.0]])
    assert np.allclose(out, [[1.0 + 0.0j, 0.0 + 0.0j]])


def test_embed_pairs_second_coordinate_to_imaginary():
    out = embed_real_to_complex([[0.0, 1.0]])
    assert np.allclose(out, [[1.0j]])


def test_embed_rejects_odd_dimension():
    with pytest.raises(ValidationError, match="odd real dimension"):
        embed_real_to_complex([[1.0, 2.0, 3.0]])


@given(st.integers(0, 2**32 - 1))
def test_embed_preserves_norms(seed):
    v = np.random.default_rng(seed).normal(size=(3, 4))
    out = embed_real_to_complex(v)
    assert np.allclose(np.linalg.norm(out, axis=1), np.linalg.norm(v, axis=1))


def test_embed_round_trip():
    v = np.random.default_rng(3).normal(size=(5, 6))
    assert np.allclose(embed_complex_to_real(embed_real_to_complex(v)), v)


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


def test_duplicate_points_rejected():
    pts = np.array([[1.0 + 0j], [1.0 + 0j]])
    with pytest.raises(ValidationError, match="distinct"):
        WeightedConstellation(pts, np.array([0.5, 0.5]))


def test_weights_must_normalize():
    pts = np.array([[1.0 + 0j], [-1.0 + 0j]])
    with pytest.raises(ValidationError, match="sum to 1"):
        WeightedConstellation(pts, np.array([0.5, 0.6]))
    with pytest.raises(ValidationError, match="positive"):
        WeightedConstellation(pts, np.array([1.5, -0.5]))


def test_codespec_shell_mismatch_rejected():
    c = WeightedConstellation(np.array([[1.0 + 0j], [-1.0 + 0j]]), np.array([0.5, 0.5]))
    with pytest.raises(ValidationError, match="shell"):
        CodeSpec(name="bad", logicals=(c,), shells=(2.0,))


def test_rotation_must_be_orthogonal():
    with pytest.raises(ValidationError, match="orthogonal"):
        Rotation(np.array([[1.0, 0.2], [0.0, 1.0]]))


def test_rotation_complex_unitary_round_trip():
    u = np.array([[0, 1], [1, 0]], dtype=complex)
    rot = Rotation.from_complex_unitary(u)
    assert np.allclose(rot.complex_unitary(), u)


def test_conjugation_is_not_complex_linear():
    # alpha -> conj(alpha) is orthogonal on the real embedding but not passive.
    rot = Rotation(np.diag([1.0, -1.0]))
    assert rot.complex_unitary() is None


# ---------------------------------------------------------------------------
# Rotation action
# ---------------------------------------------------------------------------


def test_identity_rotation_is_noop():
    c = cat_code(3, 1).logicals[0]
    out = apply_rotation(c, Rotation.identity(1))
    assert np.allclose(out.points, c.points)
    assert np.allclose(out.weights, c.weights)


def test_cat_base_rotated_quarter_turn():
    base = cat_code(2, 1).logicals[0]
    out = apply_rotation(base, Rotation.global_phase(1, np.pi / 2))
    assert np.allclose(sorted(out.points.ravel(), key=np.angle), [-1j, 1j])


@given(st.integers(0, 2**32 - 1))
def test_rotation_preserves_pairwise_distances(seed):
    c = build_catalog_code("cell16_qutrit").logicals[0]
    rot = Rotation(random_orthogonal(4, seed))
    out = apply_rotation(c, rot)
    diff_in = c.points[:, None] - c.points[None, :]
    diff_out = out.points[:, None] - out.points[None, :]
    d_in = np.abs(diff_in).sum(axis=2)
    d_out = np.abs(diff_out).sum(axis=2)
    assert np.abs((np.abs(diff_in) ** 2).sum(axis=2) - (np.abs(diff_out) ** 2).sum(axis=2)).max() < 1e-10


def test_rotation_dimension_mismatch():
    c = cat_code(2, 1).logicals[0]
    with pytest.raises(ValidationError, match="dimension"):
        apply_rotation(c, Rotation.identity(2))


# ---------------------------------------------------------------------------
# Energy and resolution
# ---------------------------------------------------------------------------


def test_unit_sphere_mean_photon_number():
    c = build_catalog_code("cube_orthoplex", {"D": 4}).logicals[0]
    assert abs(mean_photon_number(c) - 1.0) < 1e-12


def test_mean_photon_number_scales_quadratically():
    c = cat_code(2, 1).logicals[0]
    assert abs(mean_photon_number(c.scaled(3.0)) - 9.0) < 1e-12


def test_hexagon_two_shell_energy_from_direct_sum():
    # Independent evaluation: shell weights 1 and (1/2)^6 per point, six
    # points per shell, shells at radii 1 and 2.
    w1, w2 = 1.0, 2.0**-6
    total = 6 * (w1 + w2)
    expected = (6 * w1 * 1.0 + 6 * w2 * 4.0) / total
    assert abs(expected - 68 / 65) < 1e-15
    code = polygon_shell_code(6, 2, (1.0, 2.0))
    assert abs(mean_photon_number(code.logicals[0]) - expected) < 1e-12


def test_normalize_energy_unit_shell_is_identity():
    code = build_catalog_code("cube_orthoplex", {"D": 4})
    _, lam = normalize_energy(code, 1.0)
    assert abs(lam - 1.0) < 1e-12


def test_normalize_energy_hexagon_lambda():
    code = polygon_shell_code(6, 2, (1.0, 2.0))
    normed, lam = normalize_energy(code, 1.0)
    assert abs(lam**2 - 65 / 68) < 1e-12
    for c in normed.logicals:
        assert abs(mean_photon_number(c) - 1.0) < 1e-10


def test_normalize_energy_square_three_shell():
    code = polygon_shell_code(4, 3, (1.0, 2.0, 3.0))
    normed, _ = normalize_energy(code, 1.0)
    for c in normed.logicals:
        assert abs(mean_photon_number(c) - 1.0) < 1e-10


def test_normalize_energy_rejects_mismatched_codewords():
    a = cat_code(2, 1, radius=1.0).logicals[0]
    b = cat_code(2, 1, radius=2.0).logicals[0]
    code = CodeSpec(name="uneven", logicals=(a, b))
    with pytest.raises(ValidationError, match="unequal"):
        normalize_energy(code, 1.0)


def test_normalize_energy_rejects_zero_constellation():
    c = WeightedConstellation(np.array([[0.0 + 0j]]), np.array([1.0]))
    with pytest.raises(ValidationError, match="zero"):
        normalize_energy(CodeSpec(name="vac", logicals=(c,)), 1.0)


def test_resolution_cat_two():
    assert abs(resolution(cat_code(2, 2)) - 2.0) < 1e-12


def test_resolution_cell16_qutrit():
    assert abs(resolution(build_catalog_code("cell16_qutrit")) - 1.0) < 1e-9


def test_resolution_needs_two_distinct_points():
    c = WeightedConstellation(np.array([[1.0 + 0j]]), np.array([1.0]))
    with pytest.raises(ValidationError, match="2"):
        resolution(CodeSpec(name="single", logicals=(c,)))


@given(st.floats(0.2, 4.0))
def test_scaling_law(lam):
    code = build_catalog_code("qcc8")
    base_res = resolution(code)
    base_nbar = mean_photon_number(code.logicals[0])
    scaled = scale_code(code, lam)
    assert resolution(scaled) == pytest.approx(lam**2 * base_res, rel=1e-12)
    assert mean_photon_number(scaled.logicals[0]) == pytest.approx(lam**2 * base_nbar, rel=1e-12)


def test_common_rotation_preserves_resolution_and_energy():
    code = build_catalog_code("twoshell_24cell", {"tau": 2.0})
    rot = Rotation(random_orthogonal(4, 99))
    rotated = rotate_code(code, rot)
    assert abs(resolution(rotated) - resolution(code)) < 1e-10
    for a, b in zip(code.logicals, rotated.logicals):
        assert abs(mean_photon_number(a) - mean_photon_number(b)) < 1e-10


def test_catalog_weights_normalized():
    for name, params in [
        ("cat", {"m": 8}),
        ("polygon_shells", {"m": 6, "p": 2, "radii": (1.0, 2.0)}),
        ("hypercube", {"D": 4}),
        ("orthoplex", {"D": 4}),
        ("cube_orthoplex", {"D": 4}),
        ("cell16_qutrit", {}),
        ("cell8_cell16_qubit", {}),
        ("twoshell_8_16", {"r1": 1.0, "r2": 2.0}),
        ("twoshell_24cell", {"tau": 2.0}),
    ]:
        code = build_catalog_code(name, params)
        for c in code.logicals:
            assert abs(c.weights.sum() - 1.0) <= 1e-12


# ---------------------------------------------------------------------------
# Codeword rotation search
# ---------------------------------------------------------------------------


def test_optimize_rotation_cat_two_finds_quarter_turn():
    code = cat_code(2, 2)
    rot, d_e = optimize_codeword_rotation(code, plane_rotation_family(0.0, np.pi), steps=60)
    assert abs(d_e - 2.0) < 1e-9
    u = rot.complex_unitary()
    assert abs(abs(np.angle(u[0, 0])) - np.pi / 2) < 1e-6


def test_optimize_rotation_two_shell_24cell_saturates():
    tau = 1.0 + np.sqrt(2.0 - np.sqrt(2.0)) + 0.2
    code = two_shell_24cell_code(tau)
    _, d_e = optimize_codeword_rotation(code, global_phase_family(2), steps=80)
    assert abs(d_e - (2.0 - np.sqrt(2.0))) < 1e-6


def test_optimize_rotation_identity_only_family():
    code = cat_code(2, 2)
    family = RotationFamily(
        lower=np.array([0.0]), upper=np.array([0.0]),
        build=lambda p: Rotation.identity(1),
    )
    rot, d_e = optimize_codeword_rotation(code, family, steps=5)
    assert np.allclose(rot.matrix, np.eye(2))
    # Codeword 2 coincides with codeword 1, so the configuration is degenerate.
    assert d_e < 1e-12


def test_optimize_rotation_requires_two_codewords():
    code = build_catalog_code("cell16_qutrit")
    with pytest.raises(ValidationError, match="K = 2"):
        optimize_codeword_rotation(code, global_phase_family(2), steps=10)


# ---------------------------------------------------------------------------
# Catalog resolution regression (quoted values at unit energy)
# ---------------------------------------------------------------------------


def test_catalog_resolution_regression():
    def d_e_at_unit_energy(code):
        normed, _ = normalize_energy(code, 1.0)
        return resolution(normed)

    assert abs(d_e_at_unit_energy(cat_code(2, 2)) - 2.0) < 1e-9
    assert abs(d_e_at_unit_energy(build_catalog_code("cube_orthoplex", {"D": 2}))
               - 4 * np.sin(np.pi / 16) ** 2) < 1e-9
    assert abs(d_e_at_unit_energy(build_catalog_code("cube_orthoplex", {"D": 4}))
               - (2 - np.sqrt(2))) < 1e-9
    assert abs(d_e_at_unit_energy(cat_code(12, 2)) - 0.07) < 0.01
    assert abs(d_e_at_unit_energy(polygon_shell_code(6, 2, (1.0, 2.0))) - 0.26) < 0.01
    assert abs(d_e_at_unit_energy(polygon_shell_code(4, 3, (1.0, 2.0, 3.0))) - 0.44) < 0.01
    assert abs(d_e_at_unit_energy(two_shell_24cell_code(2.0)) - 0.56) < 0.01
