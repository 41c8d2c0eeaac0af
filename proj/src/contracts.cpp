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

#include "qcontract/contracts.hpp"

#include <sstream>

#include "qcontract/expressions.hpp"

namespace qcontract {

const char *violation_kind_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::StateCondition:
            return "StateConditionError";
        case ViolationKind::MeasureCondition:
            return "MeasureConditionError";
        case ViolationKind::EntangledSubset:
            return "EntangledSubsetError";
        case ViolationKind::Build:
            return "BuildError";
    }
    return "ContractViolation";
}

namespace {

std::string format_violation(ViolationKind kind, const std::string &tag, const std::string &path,
                             const std::string &detail) {
    std::ostringstream ss;
    ss << violation_kind_name(kind) << ": ";
    switch (kind) {
        case ViolationKind::StateCondition:
        case ViolationKind::MeasureCondition:
            ss << "Condition Error occurred in '" << tag << "'";
            break;
        case ViolationKind::EntangledSubset:
            ss << "cannot check '" << tag << "'";
            break;
        case ViolationKind::Build:
            ss << "invalid circuit";
            break;
    }
    ss << " (path: " << path << ")";
    if (!detail.empty()) {
        ss << ": " << detail;
    }
    return ss.str();
}

struct Runner {
    const RunOptions &options;
    std::string root_name;
    std::vector<std::size_t> path;

    std::string path_string() const {
        std::ostringstream ss;
        ss << root_name;
        for (std::size_t p : path) {
            ss << "/" << p;
        }
        return ss.str();
    }

    void execute(const ContractCircuit &c, StateVector &state, const std::vector<int> &map) {
        const auto &instrs = c.instructions();
        for (std::size_t idx = 0; idx < instrs.size(); ++idx) {
            if (const auto *g = std::get_if<GateInstruction>(&instrs[idx])) {
                std::vector<int> targets;
                targets.reserve(g->qubits.size());
                for (int q : g->qubits) {
                    targets.push_back(map[static_cast<std::size_t>(q)]);
                }
                apply_matrix_in_place(state, g->gate.unitary().matrix(), targets);
                continue;
            }
            const auto &sub = std::get<SubInstruction>(instrs[idx]);
            std::vector<int> child_map;
            child_map.reserve(sub.qubits.size());
            for (int q : sub.qubits) {
                child_map.push_back(map[static_cast<std::size_t>(q)]);
            }
            path.push_back(idx);
            const bool checked = options.check_conditions && !sub.circuit->conditions().empty();
            if (checked) {
                StateVector pre = state;
                execute(*sub.circuit, state, child_map);
                check_sub(*sub.circuit, pre, state, child_map);
            } else {
                execute(*sub.circuit, state, child_map);
            }
            path.pop_back();
        }
        if (c.global_phase() != 0.0) {
            state.mutable_amplitudes() *= std::polar(1.0, c.global_phase());
        }
    }

    StateVector local_state(const ContractCircuit &sub, const StateVector &full, const std::vector<int> &map,
                            const char *when) {
        try {
            return partial_state(full, map, options.purity_tol);
        } catch (const EntangledSubsetError &e) {
            std::ostringstream ss;
            ss << "qubits of '" << sub.name() << "' are entangled with the rest of the register at its " << when
               << "-state (purity " << e.purity() << ")";
            throw ContractViolation(ViolationKind::EntangledSubset, sub.conditions().front().tag, path_string(),
                                    ss.str());
        }
    }

    void check_sub(const ContractCircuit &sub, const StateVector &pre_full, const StateVector &post_full,
                   const std::vector<int> &map) {
        StateVector pre = local_state(sub, pre_full, map, "pre");
        StateVector post = local_state(sub, post_full, map, "post");
        evaluate(sub, pre, post);
    }

    void evaluate(const ContractCircuit &c, const StateVector &pre, const StateVector &post) {
        for (const auto &cond : c.conditions()) {
            bool ok = false;
            try {
                ok = cond.predicate(pre, post);
            } catch (const EntangledSubsetError &e) {
                throw ContractViolation(ViolationKind::EntangledSubset, cond.tag, path_string(), e.what());
            }
            if (!ok) {
                throw ContractViolation(ViolationKind::StateCondition, cond.tag, path_string());
            }
        }
    }
};

void flatten_into(const ContractCircuit &c, const std::vector<int> &map, ContractCircuit &out) {
    for (const auto &instr : c.instructions()) {
        if (const auto *g = std::get_if<GateInstruction>(&instr)) {
            std::vector<int> targets;
            for (int q : g->qubits) {
                targets.push_back(map[static_cast<std::size_t>(q)]);
            }
            out.append(g->gate, std::move(targets));
        } else {
            const auto &sub = std::get<SubInstruction>(instr);
            std::vector<int> child_map;
            for (int q : sub.qubits) {
                child_map.push_back(map[static_cast<std::size_t>(q)]);
            }
            flatten_into(*sub.circuit, child_map, out);
        }
    }
    out.add_global_phase(c.global_phase());
}

std::vector<int> identity_map(int n) {
    std::vector<int> map(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        map[static_cast<std::size_t>(q)] = q;
    }
    return map;
}

}  // namespace

ContractViolation::ContractViolation(ViolationKind kind, std::string tag, std::string path, const std::string &detail)
    : Error(format_violation(kind, tag, path, detail)), kind_(kind), tag_(std::move(tag)), path_(std::move(path)) {}

ContractCircuit::ContractCircuit(int size, std::string name) : size_(size), name_(std::move(name)) {
    if (size < 1) {
        throw ContractViolation(ViolationKind::Build, "", name_, "circuit size must be >= 1");
    }
    if (size > 30) {
        throw ContractViolation(ViolationKind::Build, "", name_, "circuit size must be <= 30");
    }
}

bool ContractCircuit::has_condition(std::string_view tag) const {
    for (const auto &c : conditions_) {
        if (c.tag == tag) {
            return true;
        }
    }
    return false;
}

ContractCircuit &ContractCircuit::append(const GateSpec &gate, std::vector<int> qubits) {
    if (static_cast<int>(qubits.size()) != gate.arity()) {
        std::ostringstream ss;
        ss << "gate '" << gate.name() << "' acts on " << gate.arity() << " qubit(s), got " << qubits.size();
        throw ContractViolation(ViolationKind::Build, "", name_, ss.str());
    }
    try {
        validate_qubit_list(qubits, size_);
    } catch (const IndexError &e) {
        throw ContractViolation(ViolationKind::Build, "", name_, e.what());
    }
    instructions_.push_back(GateInstruction{gate, std::move(qubits)});
    return *this;
}

ContractCircuit &ContractCircuit::append(const ContractCircuit &sub, std::vector<int> qubits) {
    if (static_cast<int>(qubits.size()) != sub.size()) {
        std::ostringstream ss;
        ss << "sub-circuit '" << sub.name() << "' has " << sub.size() << " qubit(s), mapping lists " << qubits.size();
        throw ContractViolation(ViolationKind::Build, "", name_, ss.str());
    }
    try {
        validate_qubit_list(qubits, size_);
    } catch (const IndexError &e) {
        throw ContractViolation(ViolationKind::Build, "", name_, e.what());
    }
    instructions_.push_back(SubInstruction{std::make_shared<const ContractCircuit>(sub), std::move(qubits)});
    return *this;
}

ContractCircuit &ContractCircuit::add_condition(std::string tag, StatePredicate predicate) {
    if (has_condition(tag)) {
        throw ContractViolation(ViolationKind::Build, tag, name_, "duplicate condition tag");
    }
    if (!predicate) {
        throw ContractViolation(ViolationKind::Build, tag, name_, "empty predicate");
    }
    conditions_.push_back({std::move(tag), std::move(predicate)});
    return *this;
}

StateVector run_state(const ContractCircuit &c, const std::optional<StateVector> &initial, const RunOptions &options) {
    StateVector state = initial ? *initial : StateVector::zero(c.size());
    if (state.num_qubits() != c.size()) {
        std::ostringstream ss;
        ss << "initial state has " << state.num_qubits() << " qubit(s), circuit has " << c.size();
        throw DimensionError(ss.str());
    }
    Runner runner{options, c.name(), {}};
    const std::vector<int> map = identity_map(c.size());
    if (options.check_conditions && !c.conditions().empty()) {
        const StateVector pre = state;
        runner.execute(c, state, map);
        runner.evaluate(c, pre, state);
    } else {
        runner.execute(c, state, map);
    }
    return state;
}

ContractCircuit flatten(const ContractCircuit &c) {
    ContractCircuit out(c.size(), c.name());
    flatten_into(c, identity_map(c.size()), out);
    return out;
}

Matrix circuit_unitary(const ContractCircuit &c) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << c.size());
    Matrix u(dim, dim);
    RunOptions unchecked;
    unchecked.check_conditions = false;
    for (Eigen::Index col = 0; col < dim; ++col) {
        u.col(col) = run_state(c, StateVector::basis(c.size(), static_cast<std::uint64_t>(col)), unchecked).amplitudes();
    }
    return u;
}

}  // namespace qcontract
