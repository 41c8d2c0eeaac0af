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
 * @file decompose.hpp
 * Rewriting into the {h, rx, rz, cx} basis.
 *
 * One-qubit unitaries go through the ZYZ Euler form
 *     U = e^{i alpha} RZ(beta) RY(gamma) RZ(delta),
 * with RY(g) = RZ(pi/2) RX(g) RZ(-pi/2). Singly-controlled one-qubit gates use
 * the two-CNOT A·X·B·X·C construction (Barenco et al. 1995, Lemma 5.1), the
 * relative phase e^{i alpha} being an RZ(alpha) on the control plus a global
 * phase of alpha/2. Global phases are recorded, never dropped.
 */

#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qcontract/contracts.hpp"
#include "qcontract/gates.hpp"
#include "qcontract/numerics.hpp"

namespace qcontract {

struct ZyzAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;  // in [0, pi]
    double delta = 0.0;
};

struct BasisOp {
    GateSpec gate;
    /// Positions in the decomposed gate's argument list (0 = first argument).
    std::vector<int> qubits;
};

struct DecomposedSequence {
    int num_qubits = 1;
    std::vector<BasisOp> gates;
    double global_phase = 0.0;

    /// e^{i global_phase} times the product of the sequence, in gate-argument
    /// order (first argument = most significant bit, as for GateSpec).
    Matrix reconstruct() const;
};

/// Factors of the controlled construction; A*B*C = I and A*X*B*X*C = e^{-i alpha} U.
struct AbcFactors {
    Matrix a;
    Matrix b;
    Matrix c;
};

/// Throws InvalidArgument when u is not a 2x2 unitary. When gamma < 1e-12, beta = 0.
ZyzAngles zyz_angles(const Matrix &u);
AbcFactors abc_factors(const ZyzAngles &angles);

DecomposedSequence decompose_1q(const Matrix &u);
/// Control is argument 0, target argument 1.
DecomposedSequence decompose_controlled(const Matrix &u);

/// The canonical hardware basis.
const std::set<std::string> &default_basis();

/// Parses "h,rx,rz,cx" (whitespace tolerated, names lowercased). Empty or
/// unknown names throw InvalidArgument.
std::set<std::string> parse_basis(std::string_view spec);

/// Rewrites every gate outside `basis` (recursively through sub-circuits,
/// whose conditions are kept). `basis` must contain h, rx, rz and cx.
/// Identity gates are kept as they are. Supports one-qubit gates and
/// singly-controlled one-qubit gates; anything
/// else throws InvalidArgument.
ContractCircuit decompose_circuit(const ContractCircuit &c, const std::set<std::string> &basis = default_basis());

}  // namespace qcontract
