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

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcontract/gates.hpp"
#include "qcontract/numerics.hpp"

namespace qcontract {

/// Outcome histogram. Key character j is the outcome of the j-th measured qubit.
struct Counts {
    int num_bits = 0;
    std::uint64_t total_shots = 0;
    std::map<std::string, std::uint64_t> table;

    /// Number of times key was observed; 0 for outcomes never seen.
    std::uint64_t operator[](std::string_view key) const;
    bool operator==(const Counts &) const = default;
};

/// Distribution over the 2^m outcomes of m measured qubits. Entry index r
/// corresponds to the key whose j-th character is bit (m-1-j) of r, so the key
/// read as a binary number is r.
struct ProbabilityTable {
    int num_bits = 0;
    std::vector<double> probs;
};

/// Key string for outcome index r of an m-bit measurement.
std::string outcome_key(std::uint64_t r, int num_bits);

/// Applies g to the listed qubits (first listed = gate's first argument).
StateVector apply_gate(const StateVector &s, const GateSpec &g, std::span<const int> qubits);

/// In-place kernel behind apply_gate. u must be 2^|qubits| square.
void apply_matrix_in_place(StateVector &s, const Matrix &u, std::span<const int> qubits);

/// Full 2^n x 2^n matrix of u acting on the listed qubits of an n-qubit register.
/// Test and reporting helper; simulation never materialises it.
Matrix embed_matrix(const Matrix &u, std::span<const int> qubits, int num_qubits);

ProbabilityTable marginal_probabilities(const StateVector &s, std::span<const int> qubits);

/// Inverse-CDF sampling over Xoshiro256StarStar(seed). Deterministic for fixed inputs.
Counts sample_counts(const ProbabilityTable &probs, std::uint64_t shots, std::uint64_t seed);

struct RunResult {
    Counts counts;
    StateVector pre_measure_state;
    std::uint64_t seed = 0;
};

}  // namespace qcontract
