# Copyright 2026 The qcontract Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import pathlib

import numpy as np
import pytest

import qcontract as qc

ROOT = pathlib.Path(__file__).resolve().parents[2]
T = np.diag([1, np.exp(1j * np.pi / 4)])
S = np.diag([1, 1j])


def test_gate_catalog():
    assert "cx" in qc.gate_names()
    np.testing.assert_allclose(qc.gate("t").matrix, T, atol=1e-15)
    cx = qc.gate("cx").matrix
    np.testing.assert_allclose(cx[2:, 2:], [[0, 1], [1, 0]])
    np.testing.assert_allclose(qc.gate("t").controlled().matrix[3, 3], T[1, 1])
    with pytest.raises(ValueError):
        qc.gate("toffoli")
    with pytest.raises(ValueError):
        qc.matrix_gate(np.ones((2, 2)))


def test_bell_state_and_bit_order():
    c = qc.Circuit(2)
    c.append(qc.gate("h"), [0]).append(qc.gate("cx"), [0, 1])
    np.testing.assert_allclose(c.run(), np.array([1, 0, 0, 1]) / np.sqrt(2), atol=1e-15)
    # X on qubit 1 sets bit 1 of the index.
    flipped = qc.apply_gate(qc.zero_state(2), qc.gate("x"), [1])
    np.testing.assert_allclose(flipped, [0, 0, 1, 0])


def test_python_conditions_and_violation():
    calls = []

    def norm_kept(pre, post):
        calls.append(1)
        return abs(np.linalg.norm(post) - 1) < 1e-12

    c = qc.Circuit(1)
    c.append(qc.gate("h"), [0]).add_condition("norm", norm_kept)
    c.run()
    assert len(calls) == 1
    c.add_condition("never", lambda pre, post: False)
    with pytest.raises(qc.ContractViolation) as info:
        c.run()
    assert info.value.tag == "never"
    assert info.value.kind == "StateConditionError"
    assert "Condition Error occurred in 'never'" in str(info.value)


def test_hadamard_test_estimate_and_fault():
    value, counts = qc.hadamard_test(qc.gate("t"), T, qc.gate("h"), shots=100000, seed=1)
    assert abs(value - (1 + np.cos(np.pi / 4)) / 2) < 0.01
    assert sum(counts.values()) == 100000
    with pytest.raises(qc.ContractViolation) as info:
        qc.hadamard_test(qc.gate("s"), T, qc.gate("h"))
    assert info.value.tag == "condition1"


def test_hadamard_post_state_matches_formula():
    rng = np.random.default_rng(3)
    for _ in range(10):
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        u, _ = np.linalg.qr(z)
        psi = rng.normal(size=2) + 1j * rng.normal(size=2)
        psi /= np.linalg.norm(psi)
        circ = qc.Circuit(2)
        circ.append_sub(qc.hadamard_test_circuit(qc.matrix_gate(u), u), [0, 1])
        post = circ.run(np.kron(psi, [1, 0]).astype(complex))
        up = u @ psi
        want = np.kron((psi + up) / 2, [1, 0]) + np.kron((psi - up) / 2, [0, 1])
        assert qc.fidelity(post, want) > 1 - 1e-8


def test_qft_matches_numpy_dft():
    for n in range(1, 5):
        dim = 2**n
        got = qc.qft_circuit(n).unitary()
        j, k = np.meshgrid(range(dim), range(dim), indexing="ij")
        want = np.exp(2j * np.pi * j * k / dim) / np.sqrt(dim)
        # One global phase for the whole matrix.
        phase = want[0, 0] / got[0, 0]
        np.testing.assert_allclose(got * phase, want, atol=1e-10)


def test_phase_estimation():
    phase, mode, counts = qc.phase_estimation(qc.gate("t"), qc.gate("x"), 3, expected_phase=0.125)
    assert phase == 0.125
    assert mode == "001"
    assert counts == {"001": 1000}


def test_decompose_round_trip():
    rng = np.random.default_rng(11)
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    u, _ = np.linalg.qr(z)
    alpha, beta, gamma, delta = qc.zyz_angles(u)

    def rz(t):
        return np.diag([np.exp(-1j * t / 2), np.exp(1j * t / 2)])

    def ry(t):
        return np.array([[np.cos(t / 2), -np.sin(t / 2)], [np.sin(t / 2), np.cos(t / 2)]])

    np.testing.assert_allclose(np.exp(1j * alpha) * rz(beta) @ ry(gamma) @ rz(delta), u, atol=1e-10)
    ops, _ = qc.decompose_controlled(u)
    assert sum(1 for name, _, _ in ops if name == "cx") <= 2
    c = qc.Circuit(2)
    c.append(qc.matrix_gate(u).controlled(), [0, 1])
    np.testing.assert_allclose(c.decompose().unitary(), c.unitary(), atol=1e-9)


def test_partial_state_and_entanglement():
    plus = np.array([1, 1]) / np.sqrt(2)
    state = np.kron(plus, [0, 1]).astype(complex)
    assert qc.eq_state(qc.partial_state(state, [1]), plus)
    bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    with pytest.raises(qc.EntangledSubsetError) as info:
        qc.partial_state(bell, [0])
    assert abs(info.value.purity - 0.5) < 1e-12


def test_dsl_expression_and_files():
    v = qc.evaluate_expression("~|+> @ T @ |+>")
    assert abs(v - (1 + np.exp(1j * np.pi / 4)) / 2) < 1e-15
    text = (ROOT / "circuits" / "hadamard_test.qc").read_text()
    summary, counts = qc.run_source(text, shots=100000, seed=1)
    assert summary.startswith("estimate ")
    assert abs(float(summary.split()[1]) - 0.853553) < 0.01
    assert qc.format_source(qc.format_source(text)) == qc.format_source(text)
    with pytest.raises(qc.DslError) as info:
        qc.load_circuit("circuit 1\nfoo 0\n")
    assert (info.value.line, info.value.col_start, info.value.col_end) == (2, 1, 3)


def test_cli_exit_codes():
    code, out, _ = qc.run_cli(["example", "qpe"])
    assert code == 0 and "phase 0.125" in out
    code, _, err = qc.run_cli(["example", "hadamard-test", "--inject-fault"])
    assert code == 1 and "'condition1'" in err
    assert qc.run_cli(["run", "/no/such/file.qc"])[0] == 2


def test_sampling_is_reproducible():
    probs = qc.marginal_probabilities(qc.seeded_random_state(3, 5), [0, 1, 2])
    a = qc.sample_counts(probs, 20000, 42)
    assert a == qc.sample_counts(probs, 20000, 42)
    assert sum(a.values()) == 20000
    assert qc.estimate_real_expectation({"0": 3, "1": 1}) == 0.5
