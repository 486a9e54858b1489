import numpy as np
import pytest

import lindlab as ll
from lindlab.operators import SPIN_OPS, fro_norm, commutator


def dense_site_operator(local: np.ndarray, site: int, n: int, q: int) -> np.ndarray:
    """Brute-force Kronecker oracle, independent of the sparse path."""
    out = np.eye(1, dtype=complex)
    for j in range(1, n + 1):
        factor = local if j == site else np.eye(q, dtype=complex)
        out = np.kron(out, factor)
    return out


class TestHilbertSpace:
    def test_dim(self):
        assert ll.HilbertSpace(4, 2).dim == 16
        assert ll.HilbertSpace(3, 4).dim == 64

    def test_cap_rejected(self):
        with pytest.raises(ValueError, match="cap"):
            ll.HilbertSpace(13, 2)  # 8192 > 4096
        ll.HilbertSpace(13, 2, max_dim=10000)  # raised cap is fine

    @pytest.mark.parametrize("n,q", [(0, 2), (2, 0), (-1, 2)])
    def test_invalid_sizes(self, n, q):
        with pytest.raises(ValueError):
            ll.HilbertSpace(n, q)


class TestSiteOperator:
    def test_sz_single_site(self, qubit):
        op = ll.site_operator("sz", 1, qubit)
        np.testing.assert_array_equal(op.dense(), np.diag([1.0, -1.0]))

    def test_sm_site1_of_two(self):
        space = ll.spin_space(2)
        op = ll.site_operator("sm", 1, space)
        assert op.dim == 4 and op.nnz == 2
        np.testing.assert_array_equal(
            op.dense(), np.kron(SPIN_OPS["sm"], np.eye(2))
        )

    def test_sx_site2_of_three_vs_dense_oracle(self):
        space = ll.spin_space(3)
        op = ll.site_operator("sx", 2, space)
        assert op.nnz == 8
        oracle = dense_site_operator(SPIN_OPS["sx"], 2, 3, 2)
        np.testing.assert_allclose(op.dense(), oracle, atol=0)

    def test_nnz_scaling(self):
        # local nnz times local_dim^(n-1)
        space = ll.spin_space(4)
        assert ll.site_operator("sp", 3, space).nnz == 1 * 2**3

    def test_site_out_of_range(self, qubit):
        with pytest.raises(ValueError, match="out of range"):
            ll.site_operator("sx", 2, qubit)

    def test_local_dim_mismatch(self):
        space = ll.hubbard_space(1)
        with pytest.raises(ValueError, match="local_dim"):
            ll.site_operator("sx", 1, space)

    def test_custom_local_operator(self):
        space = ll.hubbard_space(2)
        local = np.diag([0.0, 1.0, 1.0, 2.0]).astype(complex)
        op = ll.site_operator(local, 2, space)
        oracle = dense_site_operator(local, 2, 2, 4)
        np.testing.assert_allclose(op.dense(), oracle, atol=0)


class TestAlgebra:
    def test_kron_identities(self, qubit):
        eye2 = ll.SparseOperator.identity(qubit)
        eye4 = ll.kron(eye2, eye2)
        np.testing.assert_array_equal(eye4.dense(), np.eye(4))

    def test_adjoint_of_raising_is_lowering(self):
        space = ll.spin_space(2)
        sp_1 = ll.site_operator("sp", 1, space)
        sm_1 = ll.site_operator("sm", 1, space)
        assert fro_norm(sp_1.adjoint() - sm_1) == 0.0

    def test_number_operator_product(self):
        space = ll.spin_space(2)
        prod = ll.site_operator("sp", 1, space) @ ll.site_operator("sm", 1, space)
        np.testing.assert_allclose(prod.dense(), np.diag([1.0, 1.0, 0.0, 0.0]))

    def test_random_expressions_match_dense(self):
        rng = np.random.default_rng(7)
        space = ll.spin_space(3)
        names = ["sx", "sy", "sz", "sp", "sm"]
        for _ in range(20):
            a = ll.site_operator(rng.choice(names), rng.integers(1, 4), space)
            b = ll.site_operator(rng.choice(names), rng.integers(1, 4), space)
            c = complex(rng.standard_normal(), rng.standard_normal())
            expr = (c * a) @ b.adjoint() + b - a
            oracle = (c * a.dense()) @ b.dense().conj().T + b.dense() - a.dense()
            scale = max(np.abs(oracle).max(), 1.0)
            assert np.abs(expr.dense() - oracle).max() <= 1e-14 * scale

    def test_adjoint_involution_and_product_rule(self):
        rng = np.random.default_rng(3)
        space = ll.spin_space(2)
        x = ll.SparseOperator(space, rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        y = ll.SparseOperator(space, rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        assert fro_norm(x.adjoint().adjoint() - x) == 0.0
        assert fro_norm((x @ y).adjoint() - y.adjoint() @ x.adjoint()) < 1e-14

    def test_distinct_site_operators_commute(self):
        space = ll.spin_space(3)
        for alpha in ("sx", "sp"):
            for beta in ("sy", "sz"):
                a = ll.site_operator(alpha, 1, space)
                b = ll.site_operator(beta, 3, space)
                assert fro_norm(commutator(a, b)) == 0.0

    def test_dimension_mismatch(self):
        a = ll.SparseOperator.identity(ll.spin_space(1))
        b = ll.SparseOperator.identity(ll.spin_space(2))
        with pytest.raises(ValueError, match="mismatch"):
            _ = a + b
        with pytest.raises(ValueError, match="mismatch"):
            _ = a @ b

    def test_immutable(self, qubit):
        op = ll.SparseOperator.identity(qubit)
        with pytest.raises(AttributeError):
            op.space = None


class TestApply:
    def test_identity(self):
        space = ll.spin_space(2)
        v = np.arange(4, dtype=complex)
        np.testing.assert_array_equal(
            ll.SparseOperator.identity(space).apply(v), v
        )

    def test_lowering_on_up(self, qubit):
        up = np.array([1.0, 0.0], dtype=complex)
        down = ll.site_operator("sm", 1, qubit).apply(up)
        np.testing.assert_array_equal(down, np.array([0.0, 1.0]))

    def test_random_matvec_vs_dense(self):
        rng = np.random.default_rng(11)
        space = ll.spin_space(3)
        m = rng.standard_normal((8, 8)) * (rng.random((8, 8)) < 0.3)
        op = ll.SparseOperator(space, m.astype(complex))
        v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        got = op.apply(v)
        want = m @ v
        assert np.linalg.norm(got - want) <= 1e-14 * np.linalg.norm(want)

    def test_columns_reproduce_dense(self):
        space = ll.spin_space(2)
        op = ll.site_operator("sy", 2, space)
        dense = op.dense()
        for j in range(4):
            e = np.zeros(4, dtype=complex)
            e[j] = 1.0
            np.testing.assert_array_equal(op.apply(e), dense[:, j])

    def test_length_mismatch(self, qubit):
        with pytest.raises(ValueError, match="length"):
            ll.site_operator("sx", 1, qubit).apply(np.zeros(3))


class TestCoordinateText:
    def test_bit_exact_round_trip(self, tmp_path):
        rng = np.random.default_rng(5)
        space = ll.spin_space(3)
        m = (rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))) * (
            rng.random((8, 8)) < 0.4
        )
        op = ll.SparseOperator(space, m)
        path = tmp_path / "op.txt"
        ll.save_coordinate_text(path, op)
        dim, loaded = ll.load_coordinate_text(path)
        assert dim == 8
        assert (loaded != op.mat).nnz == 0  # bit exact

    def test_round_trip_is_stable(self, tmp_path):
        space = ll.spin_space(2)
        op = ll.site_operator("sy", 1, space)
        p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
        ll.save_coordinate_text(p1, op)
        ll.save_coordinate_text(p2, ll.SparseOperator(space, ll.load_coordinate_text(p1)[1]))
        assert p1.read_text() == p2.read_text()

    def test_header_required(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("0 0 1.0 0.0\n")
        with pytest.raises(ValueError, match="header"):
            ll.load_coordinate_text(bad)

    def test_index_bounds_checked(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("dim 2\n5 0 1.0 0.0\n")
        with pytest.raises(ValueError, match="outside"):
            ll.load_coordinate_text(bad)

    def test_triples_round_trip(self):
        space = ll.spin_space(2)
        op = ll.site_operator("sy", 2, space)
        rebuilt = ll.SparseOperator.from_triples(space, op.triples())
        assert (rebuilt.mat != op.mat).nnz == 0

    def test_from_triples_bounds_checked(self):
        space = ll.spin_space(1)
        with pytest.raises(ValueError, match="outside"):
            ll.SparseOperator.from_triples(space, [(2, 0, 1.0)])

    def test_drop_tolerance_default_keeps_small_entries(self):
        space = ll.spin_space(1)
        op = ll.SparseOperator(space, np.array([[1e-300, 0.0], [0.0, 1.0]]))
        assert op.nnz == 2  # only exact zeros dropped by default
        trimmed = ll.SparseOperator(space, op.mat, drop_tol=1e-200)
        assert trimmed.nnz == 1
