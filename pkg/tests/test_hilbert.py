import numpy as np
import pytest

from spinswap.hilbert import (
    GateKind,
    HybridState,
    Pol,
    SpinPreparation,
    apply_photon_op,
    apply_pol_spin_op,
    apply_spin_op,
    empty_state,
    inner,
    make_initial_state,
    product_state,
    project_photon,
    reroute,
)

from oracles import product_vector


def test_spin_vector_matches_kron():
    prep = SpinPreparation(0.3, 1.1, -0.4)
    assert np.allclose(prep.spin_vector(2), product_vector(0.3, 1.1))
    assert np.allclose(prep.spin_vector(3), product_vector(0.3, 1.1, -0.4))


def test_layout_pol_fastest_then_path():
    st = product_state(("a", "b"), ("s",), np.array([0, 1]), Pol.L, "b")
    # index = spin * (P*2) + path * 2 + pol
    assert st.amps[1 * 4 + 1 * 2 + 1] == 1
    assert st.amplitude("L", "b", "d") == 1
    assert st.norm2() == pytest.approx(1)


def test_initial_states_have_expected_dims():
    swap = make_initial_state(SpinPreparation(), GateKind.SWAP_ROOT)
    cswap = make_initial_state(SpinPreparation(), GateKind.CSWAP_ROOT)
    assert swap.n_spins == 2 and cswap.n_spins == 3
    assert swap.amplitude("R", swap.paths[0], "uu") == 1
    assert cswap.amplitude("R", "in", "uuu") == 1


def test_bad_labels_raise():
    st = empty_state(("a",), ("s",))
    with pytest.raises(KeyError):
        st.path_index("zz")
    with pytest.raises(IndexError):
        st.spin_index(3)
    with pytest.raises(IndexError):
        st.spin_index("q")
    with pytest.raises(ValueError):
        HybridState(("a", "a"), ("s",), np.zeros(8))
    with pytest.raises(ValueError):
        HybridState(("a",), ("s",), np.zeros(5))


def test_state_is_immutable():
    st = empty_state(("a",), ("s",))
    with pytest.raises(ValueError):
        st.amps[0] = 1


def test_photon_op_on_one_path_only():
    st = product_state(("a", "b"), ("s",), np.array([1, 0]), Pol.R, "a")
    flip = np.array([[0, 1], [1, 0]])
    out = apply_photon_op(st, flip, ["b"])
    assert inner(st, out) == pytest.approx(1)
    out = apply_photon_op(st, flip, ["a"])
    assert out.amplitude("L", "a", "u") == pytest.approx(1)


def test_spin_op_targets_named_qubit():
    st = product_state(("a",), ("x", "y"), product_vector(0, 0))
    x = np.array([[0, 1], [1, 0]])
    out = apply_spin_op(st, x, "y")
    assert out.amplitude("R", "a", "ud") == pytest.approx(1)
    out = apply_spin_op(st, x, 0)
    assert out.amplitude("R", "a", "du") == pytest.approx(1)


def test_pol_spin_op_basis_order():
    # 4x4 ops are indexed {R up, R down, L up, L down}
    op = np.zeros((4, 4))
    op[3, 0] = 1  # R up -> L down
    st = product_state(("a",), ("s",), np.array([1, 0]))
    out = apply_pol_spin_op(st, op, "s", ["a"])
    assert out.amplitude("L", "a", "d") == pytest.approx(1)


def test_pol_spin_op_leak_accumulates():
    st = product_state(("a",), ("s",), np.array([1, 0]))
    keep = np.eye(4) * np.sqrt(0.75)
    leak = np.eye(4) * 0.5
    out = apply_pol_spin_op(st, keep, "s", ["a"], leak_op=leak)
    assert out.norm2() == pytest.approx(0.75)
    assert out.leaked == pytest.approx(0.25)


def test_reroute_moves_one_polarization():
    st = product_state(("a", "b", "c"), ("s",), np.array([1, 0]))
    st = apply_photon_op(st, np.array([[1, 1], [1, -1]]) / np.sqrt(2), ["a"])
    out = reroute(st, "a", "b", Pol.L)
    assert out.amplitude("L", "b", "u") == pytest.approx(1 / np.sqrt(2))
    assert out.amplitude("R", "a", "u") == pytest.approx(1 / np.sqrt(2))
    occupied = reroute(out, "a", "c", Pol.R)
    with pytest.raises(ValueError):
        reroute(occupied, "b", "c")


def test_project_photon():
    st = product_state(("a",), ("s",), product_vector(0.4))
    amp = project_photon(st, "a", [1, 0])
    assert np.allclose(amp, product_vector(0.4))
    assert np.allclose(project_photon(st, "a", [0, 1]), 0)


def test_inner_rejects_mismatched_layouts():
    with pytest.raises(ValueError):
        inner(empty_state(("a",), ("s",)), empty_state(("b",), ("s",)))
