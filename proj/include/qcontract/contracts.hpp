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
 * @file contracts.hpp
 * Circuits that carry named assertions.
 *
 * A ContractCircuit is an instruction list (gates and nested sub-circuits)
 * plus state conditions `bool(pre_state, post_state)`. Every run checks
 * every condition of every nested block at the moment the block finishes:
 *
 *   - a top-level circuit's conditions see the full initial and final states;
 *   - a sub-circuit's conditions see partial_state() of the parent register
 *     over the qubits it was appended on (bit j = the sub's qubit j), taken
 *     just before and just after the block. Entanglement of those qubits with
 *     the rest of the register at either point is reported as a violation.
 *
 * Partial states have a canonical global phase, so predicates should compare
 * states with eq_state() rather than entrywise.
 *
 * measure() turns a circuit into a MeasuredCircuit<V>: final-measurement
 * sampling on a list of qubits, a postprocess `V(Counts)` and measure
 * conditions `bool(pre_measure_state, counts, value)`.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "qcontract/errors.hpp"
#include "qcontract/gates.hpp"
#include "qcontract/numerics.hpp"
#include "qcontract/simulator.hpp"

namespace qcontract {

enum class ViolationKind { StateCondition, MeasureCondition, EntangledSubset, Build };

/// "StateConditionError", "MeasureConditionError", "EntangledSubsetError", "BuildError".
const char *violation_kind_name(ViolationKind kind);

/// A failed contract. what() is the one-line report
///   StateConditionError: Condition Error occurred in 'condition1' (path: main/1)
/// where the path is the root circuit name followed by the instruction index
/// of each enclosing sub-circuit.
class ContractViolation : public Error {
   public:
    ContractViolation(ViolationKind kind, std::string tag, std::string path, const std::string &detail = "");

    ViolationKind kind() const { return kind_; }
    const std::string &tag() const { return tag_; }
    const std::string &path() const { return path_; }

   private:
    ViolationKind kind_;
    std::string tag_;
    std::string path_;
};

using StatePredicate = std::function<bool(const StateVector &pre_state, const StateVector &post_state)>;

struct StateCondition {
    std::string tag;
    StatePredicate predicate;
};

class ContractCircuit;

struct GateInstruction {
    GateSpec gate;
    std::vector<int> qubits;
};

struct SubInstruction {
    std::shared_ptr<const ContractCircuit> circuit;
    std::vector<int> qubits;
};

using Instruction = std::variant<GateInstruction, SubInstruction>;

struct RunOptions {
    bool check_conditions = true;
    /// Purity threshold handed to partial_state() for sub-circuit conditions.
    double purity_tol = 1e-8;
};

class ContractCircuit {
   public:
    /// Throws ContractViolation(Build) when size < 1.
    explicit ContractCircuit(int size, std::string name = "main");

    int size() const { return size_; }
    const std::string &name() const { return name_; }
    const std::vector<Instruction> &instructions() const { return instructions_; }
    const std::vector<StateCondition> &conditions() const { return conditions_; }
    bool has_condition(std::string_view tag) const;

    /// Global phase (radians) applied at the end of the block. Decomposition
    /// records the phase it factors out here so that simulated states match
    /// the source circuit exactly.
    double global_phase() const { return global_phase_; }
    void add_global_phase(double radians) { global_phase_ += radians; }

    ContractCircuit &append(const GateSpec &gate, std::vector<int> qubits);
    /// Appends a copy of sub; later edits to sub do not affect this circuit.
    ContractCircuit &append(const ContractCircuit &sub, std::vector<int> qubits);
    ContractCircuit &add_condition(std::string tag, StatePredicate predicate);

   private:
    int size_;
    std::string name_;
    std::vector<Instruction> instructions_;
    std::vector<StateCondition> conditions_;
    double global_phase_ = 0.0;
};

inline ContractCircuit new_circuit(int size) { return ContractCircuit(size); }
inline void append_gate(ContractCircuit &c, const GateSpec &g, std::vector<int> qubits) { c.append(g, std::move(qubits)); }
inline void append_sub(ContractCircuit &c, const ContractCircuit &sub, std::vector<int> qubits) {
    c.append(sub, std::move(qubits));
}
inline void add_condition(ContractCircuit &c, std::string tag, StatePredicate p) {
    c.add_condition(std::move(tag), std::move(p));
}

/// Runs c from `initial` (default |0...0>), checking all conditions depth-first.
StateVector run_state(const ContractCircuit &c, const std::optional<StateVector> &initial = std::nullopt,
                      const RunOptions &options = {});

/// Inlines every sub-circuit; conditions are dropped and phases summed.
ContractCircuit flatten(const ContractCircuit &c);

/// Matrix of the circuit (conditions not checked), columns from basis states.
Matrix circuit_unitary(const ContractCircuit &c);

// ---------------------------------------------------------------------------
// Measurement

template <class V>
struct MeasureOutcome {
    V value;
    Counts counts;
    StateVector pre_measure_state;
    std::uint64_t seed = 0;
};

template <class V>
class MeasuredCircuit {
   public:
    using Postprocess = std::function<V(const Counts &)>;
    using MeasurePredicate = std::function<bool(const StateVector &, const Counts &, const V &)>;

    struct MeasureCondition {
        std::string tag;
        MeasurePredicate predicate;
    };

    MeasuredCircuit(ContractCircuit circuit, std::vector<int> qubits, Postprocess postprocess)
        : circuit_(std::move(circuit)), qubits_(std::move(qubits)), postprocess_(std::move(postprocess)) {
        if (qubits_.empty()) {
            throw ContractViolation(ViolationKind::Build, "", circuit_.name(), "measurement list is empty");
        }
        try {
            validate_qubit_list(qubits_, circuit_.size());
        } catch (const IndexError &e) {
            throw ContractViolation(ViolationKind::Build, "", circuit_.name(), e.what());
        }
    }

    const ContractCircuit &circuit() const { return circuit_; }
    const std::vector<int> &measured_qubits() const { return qubits_; }
    const std::vector<MeasureCondition> &conditions() const { return conditions_; }

    MeasuredCircuit &add_condition(std::string tag, MeasurePredicate predicate) {
        for (const auto &c : conditions_) {
            if (c.tag == tag) {
                throw ContractViolation(ViolationKind::Build, tag, circuit_.name(), "duplicate measure condition tag");
            }
        }
        conditions_.push_back({std::move(tag), std::move(predicate)});
        return *this;
    }

    MeasureOutcome<V> run(std::uint64_t shots, std::uint64_t seed, const RunOptions &options = {}) const {
        if (shots == 0) {
            throw InvalidArgument("shots must be >= 1");
        }
        StateVector state = run_state(circuit_, std::nullopt, options);
        Counts counts = sample_counts(marginal_probabilities(state, qubits_), shots, seed);
        std::optional<V> value;
        try {
            value.emplace(postprocess_(counts));
        } catch (const ContractViolation &) {
            throw;
        } catch (const std::exception &e) {
            throw PostprocessError(std::string("postprocess failed: ") + e.what());
        }
        if (options.check_conditions) {
            for (const auto &c : conditions_) {
                if (!c.predicate(state, counts, *value)) {
                    throw ContractViolation(ViolationKind::MeasureCondition, c.tag, circuit_.name());
                }
            }
        }
        return MeasureOutcome<V>{std::move(*value), std::move(counts), std::move(state), seed};
    }

   private:
    ContractCircuit circuit_;
    std::vector<int> qubits_;
    Postprocess postprocess_;
    std::vector<MeasureCondition> conditions_;
};

template <class F>
auto measure(const ContractCircuit &c, std::vector<int> qubits, F &&postprocess)
    -> MeasuredCircuit<std::decay_t<std::invoke_result_t<F, const Counts &>>> {
    using V = std::decay_t<std::invoke_result_t<F, const Counts &>>;
    return MeasuredCircuit<V>(c, std::move(qubits), std::forward<F>(postprocess));
}

template <class V, class P>
void add_measure_condition(MeasuredCircuit<V> &mc, std::string tag, P &&predicate) {
    mc.add_condition(std::move(tag), std::forward<P>(predicate));
}

template <class V>
MeasureOutcome<V> run_measured(const MeasuredCircuit<V> &mc, std::uint64_t shots, std::uint64_t seed,
                               const RunOptions &options = {}) {
    return mc.run(shots, seed, options);
}

/// Identity postprocess: returns the raw histogram.
inline Counts raw_counts(const Counts &c) { return c; }

}  // namespace qcontract
