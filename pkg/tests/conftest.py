import numpy as np
import pytest

import lindlab as ll


@pytest.fixture(scope="session")
def qubit():
    return ll.spin_space(1)


@pytest.fixture(scope="session")
def damping_model(qubit):
    """H = 0, L = sm: amplitude damping with unit rate."""
    return ll.SparseOperator.zero(qubit), ll.LindbladSet(
        (ll.site_operator("sm", 1, qubit),)
    )


@pytest.fixture(scope="session")
def xxz4_delta2():
    h, ls = ll.build_xxz_ring(ll.XxzRingParams(n=4, delta=2.0))
    return h, ls


@pytest.fixture(scope="session")
def xxz4_delta2_spectrum(xxz4_delta2):
    h, ls = xxz4_delta2
    s = ll.assemble_superoperator(h, ls)
    spec = ll.full_spectrum(s)
    return s, spec, ll.classify_eigenvalues(spec)


@pytest.fixture(scope="session")
def hubbard2_spin_dephasing():
    params = ll.HubbardChainParams(
        l_sites=2,
        tau=1.0,
        u=4.0,
        mu=1.0,
        dephasing_kind="spin",
        dephasing_gammas=(1.0, 1.0),
    )
    return ll.build_hubbard_chain(params)


def all_down_state(n: int) -> np.ndarray:
    v = np.zeros(2**n, dtype=complex)
    v[-1] = 1.0
    return v


def one_magnon_node_state(n: int = 4) -> np.ndarray:
    """Up-spin amplitudes (0, 1, 0, -1)/sqrt(2) over sites of the n=4 ring."""
    assert n == 4
    v = np.zeros(2**n, dtype=complex)
    # basis index with a single up spin at site j (1-based, site 1 most
    # significant): all-ones minus the bit of site j
    v[2**n - 1 - 2 ** (n - 2)] = 1.0 / np.sqrt(2)  # up at site 2
    v[2**n - 1 - 2 ** (n - 4)] = -1.0 / np.sqrt(2)  # up at site 4
    return v
