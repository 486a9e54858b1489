import numpy as np
import pytest
import scipy.linalg

import lindlab as ll
from lindlab.operators import anticommutator, commutator, fro_norm

from conftest import all_down_state, one_magnon_node_state


class TestXxzRing:
    def test_all_down_energy(self):
        h, _ = ll.build_xxz_ring(ll.XxzRingParams(n=4, delta=2.0))
        v = all_down_state(4)
        np.testing.assert_allclose(h.apply(v), 8.0 * v, atol=1e-14)

    def test_hermitian(self):
        h, _ = ll.build_xxz_ring(ll.XxzRingParams(n=5, delta=-0.7))
        assert fro_norm(h - h.adjoint()) == 0.0

    def test_one_magnon_node_state_is_zero_mode(self):
        h, _ = ll.build_xxz_ring(ll.XxzRingParams(n=4, delta=2.0))
        v = one_magnon_node_state()
        # dense diagonalization oracle: v reproduces an exact eigenvector
        w, vecs = scipy.linalg.eigh(h.dense())
        res = np.linalg.norm(h.apply(v))
        assert res < 1e-12
        overlaps = np.abs(vecs.conj().T @ v) ** 2
        assert np.all(np.abs(w[overlaps > 1e-12]) < 1e-12)

    def test_loss_set(self):
        space = ll.spin_space(4)
        _, ls = ll.build_xxz_ring(
            ll.XxzRingParams(n=4, delta=1.0, loss_sites=(1, 3), gammas=(0.5, 2.0))
        )
        assert len(ls) == 2
        assert fro_norm(ls.ops[0] - 0.5 * ll.site_operator("sm", 1, space)) == 0.0
        assert fro_norm(ls.ops[1] - 2.0 * ll.site_operator("sm", 3, space)) == 0.0

    def test_total_sz_conserved(self):
        h, _ = ll.build_xxz_ring(ll.XxzRingParams(n=4, delta=1.3))
        space = ll.spin_space(4)
        sz_tot = ll.SparseOperator.zero(space)
        for j in range(1, 5):
            sz_tot = sz_tot + ll.site_operator("sz", j, space)
        assert fro_norm(commutator(h, sz_tot)) < 1e-12

    def test_small_ring_rejected(self):
        with pytest.raises(ValueError, match="n >= 3"):
            ll.XxzRingParams(n=2, delta=1.0)

    def test_nnn_knob(self):
        h0, _ = ll.build_xxz_ring(ll.XxzRingParams(n=4, delta=2.0))
        h1, ls = ll.build_xxz_ring(ll.XxzRingParams(n=4, delta=2.0, nnn_delta=0.3))
        assert fro_norm(h1 - h0) > 0.1
        assert fro_norm(h1 - h1.adjoint()) == 0.0
        # the dark structure survives the integrability-breaking term,
        # with energies shifted by the next-nearest diagonal couplings
        darks = ll.find_dark_states(h1, ls)
        np.testing.assert_allclose(
            [d.energy for d in darks], [-1.2, 0.0, 9.2], atol=1e-9
        )

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(loss_sites=(1, 1), gammas=(1.0, 1.0)),
            dict(loss_sites=(5,), gammas=(1.0,)),
            dict(loss_sites=(1,), gammas=(-1.0,)),
            dict(loss_sites=(1, 2), gammas=(1.0,)),
        ],
    )
    def test_invalid_params(self, kwargs):
        with pytest.raises(ValueError):
            ll.XxzRingParams(n=4, delta=1.0, **kwargs)


class TestHubbardChain:
    def test_single_site_spectrum(self):
        p = ll.HubbardChainParams(l_sites=1, tau=0.7, u=4.0, mu=1.0, epsilon=(0.5,))
        h, _, _ = ll.build_hubbard_chain(p)
        got = np.sort(scipy.linalg.eigvalsh(h.dense()))
        # {0, eps-mu twice, u + 2(eps-mu)}
        want = np.sort([0.0, -0.5, -0.5, 3.0])
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_hermitian(self, hubbard2_spin_dephasing):
        h, _, _ = hubbard2_spin_dephasing
        assert fro_norm(h - h.adjoint()) == 0.0

    def test_canonical_anticommutation(self):
        space = ll.hubbard_space(2)
        c1u = ll.fermion_annihilation(space, 1, "up")
        c2u = ll.fermion_annihilation(space, 2, "up")
        c1d = ll.fermion_annihilation(space, 1, "down")
        eye = ll.SparseOperator.identity(space)
        assert fro_norm(anticommutator(c1u, c2u.adjoint())) == 0.0
        assert fro_norm(anticommutator(c1u, c1u.adjoint()) - eye) == 0.0
        assert fro_norm(anticommutator(c1u, c1d)) == 0.0
        assert fro_norm(anticommutator(c1u, c1d.adjoint())) == 0.0

    def test_number_and_spin_conserved(self, hubbard2_spin_dephasing):
        h, _, sym = hubbard2_spin_dephasing
        assert fro_norm(commutator(h, sym.n_total)) < 1e-12
        assert fro_norm(commutator(h, sym.s_z)) < 1e-12

    def test_dephasing_sets(self):
        space = ll.hubbard_space(2)
        p_spin = ll.HubbardChainParams(
            l_sites=2, dephasing_kind="spin", dephasing_gammas=(0.5, 1.5)
        )
        _, ls, _ = ll.build_hubbard_chain(p_spin)
        assert fro_norm(ls.ops[0] - 0.5 * ll.site_spin_z(space, 1)) == 0.0
        assert fro_norm(ls.ops[1] - 1.5 * ll.site_spin_z(space, 2)) == 0.0
        p_charge = ll.HubbardChainParams(
            l_sites=2, dephasing_kind="charge", dephasing_gammas=(1.0, 1.0)
        )
        _, ls_c, _ = ll.build_hubbard_chain(p_charge)
        assert fro_norm(ls_c.ops[0] - ll.site_number(space, 1)) == 0.0

    def test_doublon_drive_local_and_nilpotent(self):
        p = ll.HubbardChainParams(
            l_sites=2, tau=1.0, u=2.0, doublon_drive=(0.8, 1.2)
        )
        _, ls, sym = ll.build_hubbard_chain(p)
        assert len(ls) == 2
        inject, extract = ls.ops
        # pair creation at site 1 carries the staggered sign (-1)^1
        space = ll.hubbard_space(2)
        up1 = ll.fermion_annihilation(space, 1, "up").adjoint()
        dn1 = ll.fermion_annihilation(space, 1, "down").adjoint()
        assert fro_norm(inject - 0.8 * (-1.0) * (up1 @ dn1)) == 0.0
        assert fro_norm(inject @ inject) == 0.0
        assert fro_norm(extract @ extract) == 0.0

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            ll.HubbardChainParams(l_sites=0)
        with pytest.raises(ValueError):
            ll.HubbardChainParams(l_sites=2, dephasing_kind="bogus")
        with pytest.raises(ValueError):
            ll.HubbardChainParams(l_sites=2, epsilon=(0.0,))
        with pytest.raises(ValueError):
            ll.HubbardChainParams(
                l_sites=2, dephasing_kind="spin", dephasing_gammas=(1.0, -1.0)
            )


class TestSymmetryOperators:
    def test_spin_su2(self, hubbard2_spin_dephasing):
        _, _, sym = hubbard2_spin_dephasing
        assert fro_norm(commutator(sym.s_plus, sym.s_minus) - 2.0 * sym.s_z) < 1e-12

    def test_eta_su2(self, hubbard2_spin_dephasing):
        _, _, sym = hubbard2_spin_dephasing
        assert fro_norm(commutator(sym.eta_plus, sym.eta_minus) - 2.0 * sym.eta_z) < 1e-12
        assert fro_norm(commutator(sym.eta_z, sym.eta_plus) - sym.eta_plus) < 1e-12

    def test_sectors_commute(self, hubbard2_spin_dephasing):
        _, _, sym = hubbard2_spin_dephasing
        assert fro_norm(commutator(sym.eta_plus, sym.s_plus)) < 1e-12
        assert fro_norm(commutator(sym.eta_plus, sym.s_z)) < 1e-12

    def test_pair_raising_is_h_eigenoperator(self, hubbard2_spin_dephasing):
        h, _, sym = hubbard2_spin_dephasing
        com = commutator(h, sym.eta_plus)
        # least-squares fit of the scalar in [H, eta+] = c eta+
        c = complex(
            (sym.eta_plus.mat.conjugate().multiply(com.mat)).sum()
        ) / fro_norm(sym.eta_plus) ** 2
        assert abs(c.imag) < 1e-12
        # u + 2 (eps - mu) for this parameter set
        assert abs(c.real - 2.0) < 1e-12
        assert fro_norm(com - c * sym.eta_plus) < 1e-12

    def test_dephasing_commutes_with_pair_raising(self, hubbard2_spin_dephasing):
        _, ls, sym = hubbard2_spin_dephasing
        for L in ls:
            assert fro_norm(commutator(L, sym.eta_plus)) < 1e-12

    def test_adjoint_relations(self, hubbard2_spin_dephasing):
        _, _, sym = hubbard2_spin_dephasing
        assert fro_norm(sym.s_minus - sym.s_plus.adjoint()) == 0.0
        assert fro_norm(sym.eta_minus - sym.eta_plus.adjoint()) == 0.0
        for op in (sym.s_z, sym.eta_z, sym.n_total):
            assert fro_norm(op - op.adjoint()) == 0.0

    def test_wrong_local_dim(self):
        with pytest.raises(ValueError, match="local_dim-4|local_dim"):
            ll.symmetry_operators(ll.spin_space(2))

    def test_doublon_flow_observable(self):
        p = ll.HubbardChainParams(l_sites=2, tau=1.0, u=2.0)
        h, _, _ = ll.build_hubbard_chain(p)
        space = ll.hubbard_space(2)
        flow = ll.doublon_flow(h, space, 1)
        assert fro_norm(flow - flow.adjoint()) < 1e-12  # observable is Hermitian
