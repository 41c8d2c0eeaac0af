// Copyright 2026 The qcontract Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file algorithms.hpp
 * Contract-carrying builders for the Hadamard test, the QFT and quantum phase
 * estimation.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qcontract/contracts.hpp"
#include "qcontract/expressions.hpp"
#include "qcontract/gates.hpp"

namespace qcontract {

/// Two-qubit block applying controlled(ugate) through its {rz, rx, cx}
/// decomposition (qubit 0 = control). Tagged "controlled_u": the output equals
/// controlled(ugate) applied to the input.
ContractCircuit controlled_u_circuit(const GateSpec &ugate, double tol = 1e-8);

/// Hadamard test for a one-qubit ugate: ancilla on qubit 0, target on qubit 1.
/// H(0), controlled_u_circuit(ugate) on (0, 1), H(0). Carries "condition1":
///   post == ((psi + U psi)/2) (x) |0> + ((psi - U psi)/2) (x) |1>
/// with psi the partial state of qubit 1 at the block's input. u is the
/// operator the caller claims ugate implements; a mismatch fails condition1.
ContractCircuit hadamard_test_circuit(const GateSpec &ugate, const OperatorExpr &u, double tol = 1e-8);

/// (N0 - N1) / (N0 + N1) over a one-qubit histogram; missing keys count as 0.
double estimate_real_expectation(const Counts &counts);

/// Hadamard-test measurement pipeline: prepares psi with `prep` on qubit 1,
/// runs the Hadamard test, measures qubit 0 and estimates Re<psi|U|psi>.
/// Carries measure condition "condition2": |estimate - Re<psi|u|psi>| <= abs_tol.
MeasuredCircuit<double> hadamard_test_pipeline(const GateSpec &ugate, const OperatorExpr &u,
                                               const ContractCircuit &prep, double abs_tol = 0.01);

/// F[j][k] = w^{jk} / sqrt(2^n), w = e^{2 pi i / 2^n}, under the global bit convention.
Matrix dft_matrix(int n);

/// H + controlled-P ladder and final swaps; unitary equals dft_matrix(n).
/// Tagged "qft_spec". 1 <= n <= 12.
ContractCircuit qft_circuit(int n, double tol = 1e-8);

/// Reverse of qft_circuit with adjoint gates. Tagged "iqft_spec".
ContractCircuit inverse_qft_circuit(int n, double tol = 1e-8);

struct PhaseEstimate {
    double phase = 0.0;  // in [0, 1)
    int m = 0;
    std::string mode_bitstring;
};

/// Most frequent outcome (ties: smallest key) read as a binary fraction.
PhaseEstimate decode_phase(const Counts &counts);

/// min(|a - b|, 1 - |a - b|) for phases in [0, 1).
double circular_phase_distance(double a, double b);

/// Phase estimation with counting qubits 0..m-1 and target qubit m.
/// eigenprep (one qubit) prepares the target; counting qubit j controls
/// U^{2^j}; the inverse QFT follows; counting qubits are measured most
/// significant first. With expected_phase set, carries measure condition
/// "phase_close": circular distance to it <= 1/2^m.
MeasuredCircuit<PhaseEstimate> qpe_circuit(const GateSpec &ugate, const ContractCircuit &eigenprep, int m,
                                           std::optional<double> expected_phase = std::nullopt);

/// Normalized state with Gaussian amplitudes drawn from Xoshiro256StarStar(seed)
/// through Box-Muller (so it is identical on every platform).
StateVector seeded_random_state(int num_qubits, std::uint64_t seed);

}  // namespace qcontract
