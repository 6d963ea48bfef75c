import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from purecode.bell import BellDiagonal, werner_state
from purecode.channels import (ChannelSpec, ChannelSpecError, bell_diagonal_of, channel_usable,
                               choi_state, depolarizing_fidelity, entangled_fraction_search,
                               induced_state, load_channel_spec, pauli_to_bell_diagonal,
                               twirl_to_werner)


def test_depolarizing_fidelity():
    assert depolarizing_fidelity(1) == 1.0
    assert depolarizing_fidelity(0) == 0.25
    assert depolarizing_fidelity(0.7462) == pytest.approx(0.80965, abs=1e-12)
    with pytest.raises(ValueError):
        depolarizing_fidelity(1.2)


def test_pauli_to_bell_diagonal():
    assert pauli_to_bell_diagonal((1, 0, 0, 0)).allclose(BellDiagonal((1, 0, 0, 0)))
    assert pauli_to_bell_diagonal((0.9, 0.1, 0, 0)).allclose(BellDiagonal((0.9, 0.1, 0, 0)))
    # Y and Z swap slots: canonical order is (Phi+, Psi+, Phi-, Psi-)
    assert pauli_to_bell_diagonal((0.7, 0.1, 0.15, 0.05)).allclose(BellDiagonal((0.7, 0.1, 0.05, 0.15)))


@pytest.mark.parametrize("x", [0.0, 0.3, 0.7462, 1.0])
def test_depolarizing_is_werner(x):
    spec = ChannelSpec.depolarizing(x)
    assert pauli_to_bell_diagonal(spec.pauli_probabilities()).allclose(
        werner_state(depolarizing_fidelity(x)), atol=1e-15)


def test_twirl_examples():
    assert twirl_to_werner(werner_state(0.83)).allclose(werner_state(0.83))
    assert twirl_to_werner(BellDiagonal((0.1, 0.7, 0.1, 0.1))).allclose(werner_state(0.7))
    assert twirl_to_werner(BellDiagonal((0.4, 0.3, 0.2, 0.1))).allclose(werner_state(0.4))


probs = st.lists(st.floats(0, 1), min_size=4, max_size=4).filter(lambda v: sum(v) > 1e-3).map(
    BellDiagonal.from_unnormalized)


@given(probs)
def test_twirl_idempotent_and_keeps_max(m):
    t = twirl_to_werner(m)
    assert t.fidelity == pytest.approx(max(m), abs=1e-15)
    assert twirl_to_werner(t).allclose(t)


@settings(max_examples=15, deadline=None)
@given(probs)
def test_entangled_fraction_of_bell_diagonal_is_max_entry(m):
    p = m.probs
    spec = ChannelSpec.pauli_channel(p[0], p[1], p[3], p[2])
    frac, _ = entangled_fraction_search(spec.kraus_operators())
    assert frac == pytest.approx(p.max(), abs=1e-6)


def test_choi_of_pauli_channel_is_bell_diagonal():
    spec = ChannelSpec.pauli_channel(0.8, 0.1, 0.06, 0.04)
    diag = bell_diagonal_of(choi_state(spec.kraus_operators()))
    assert diag.allclose(BellDiagonal((0.8, 0.1, 0.04, 0.06)), atol=1e-12)


def test_kraus_amplitude_damping():
    gamma = 0.3
    ops = [np.array([[1, 0], [0, np.sqrt(1 - gamma)]]), np.array([[0, np.sqrt(gamma)], [0, 0]])]
    v = channel_usable(ChannelSpec.from_kraus(ops), 1)
    assert v.f == pytest.approx((1 + np.sqrt(1 - gamma)) ** 2 / 4, abs=1e-8)
    assert v.usable


def test_kraus_rotated_pauli_alignment():
    th = 0.4
    u = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    base = ChannelSpec.pauli_channel(0.85, 0.05, 0.05, 0.05)
    spec = ChannelSpec.from_kraus([u @ k for k in base.kraus_operators()])
    assert induced_state(spec).fidelity == pytest.approx(0.85, abs=1e-7)


def test_channel_usable_examples():
    assert channel_usable(ChannelSpec.depolarizing(1.0), 1).usable
    x = (4 * 0.81 - 1) / 3
    spec = ChannelSpec.depolarizing(x)
    assert not channel_usable(spec, 1).usable
    v5 = channel_usable(spec, 5)
    assert v5.usable and v5.f_c == pytest.approx(0.8096, abs=2e-4)
    assert channel_usable(ChannelSpec.pauli_channel(0.82, 0.06, 0.06, 0.06), 5).usable


@pytest.mark.parametrize("bad", [
    dict(kind="depolarizing", x=1.5),
    dict(kind="pauli", pauli=(0.5, 0.5, 0.5, 0.0)),
    dict(kind="kraus", kraus=(np.eye(2) * 0.5,)),
    dict(kind="amplitude"),
])
def test_invalid_specs(bad):
    with pytest.raises(ChannelSpecError):
        ChannelSpec(**bad)


def test_load_spec_files(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"kind": "pauli", "probabilities": {"I": 0.82, "X": 0.06, "Y": 0.06, "Z": 0.06}}))
    assert load_channel_spec(p).pauli == (0.82, 0.06, 0.06, 0.06)
    p.write_text(json.dumps({"kind": "kraus", "operators": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}))
    assert np.allclose(load_channel_spec(p).kraus[0], np.eye(2))
    p.write_text('{"kind": "depolarizing",\n "x": "high"}')
    with pytest.raises(ChannelSpecError, match="'x'"):
        load_channel_spec(p)
    p.write_text('{"kind": "depolarizing",\n "x": }')
    with pytest.raises(ChannelSpecError, match="line 2"):
        load_channel_spec(p)
    p.write_text(json.dumps({"kind": "kraus", "operators": [[[[1, 0], [0, 0]], [[0, 0]]]]}))
    with pytest.raises(ChannelSpecError, match=r"operators\[0\]\[1\]"):
        load_channel_spec(p)
