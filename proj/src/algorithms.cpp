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

#include "qcontract/algorithms.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qcontract/decompose.hpp"
#include "qcontract/errors.hpp"
#include "qcontract/rng.hpp"
#include "qcontract/simulator.hpp"

namespace qcontract {

namespace {

constexpr double kPi = std::numbers::pi;

void append_sequence(ContractCircuit &c, const DecomposedSequence &seq, const std::vector<int> &args) {
    for (const BasisOp &op : seq.gates) {
        std::vector<int> qubits;
        for (int q : op.qubits) {
            qubits.push_back(args[static_cast<std::size_t>(q)]);
        }
        c.append(op.gate, std::move(qubits));
    }
    c.add_global_phase(seq.global_phase);
}

StatePredicate matches_operator(Matrix expected_op, double tol) {
    return [op = std::move(expected_op), tol](const StateVector &pre, const StateVector &post) {
        return eq_state(post, StateVector(op * pre.amplitudes()), tol);
    };
}

}  // namespace

ContractCircuit controlled_u_circuit(const GateSpec &ugate, double tol) {
    if (ugate.arity() != 1) {
        throw InvalidArgument("controlled_u_circuit needs a one-qubit gate");
    }
    ContractCircuit c(2, "controlled_u");
    append_sequence(c, decompose_controlled(ugate.unitary().matrix()), {0, 1});
    const std::vector<int> args = {0, 1};
    c.add_condition("controlled_u", matches_operator(embed_matrix(controlled(ugate).unitary().matrix(), args, 2), tol));
    return c;
}

ContractCircuit hadamard_test_circuit(const GateSpec &ugate, const OperatorExpr &u, double tol) {
    if (ugate.arity() != 1) {
        std::ostringstream ss;
        ss << "hadamard_test_circuit supports one-qubit gates, got arity " << ugate.arity();
        throw InvalidArgument(ss.str());
    }
    ContractCircuit circ(ugate.arity() + 1, "hadamard_test");
    circ.append(gates::h(), {0});
    circ.append(controlled_u_circuit(ugate, tol), {0, 1});
    circ.append(gates::h(), {0});

    circ.add_condition("condition1", [u, tol](const StateVector &pre, const StateVector &post) {
        const std::vector<int> target = {1};
        const StateExpr psi = StateExpr::from_vector(partial_state(pre, target));
        const StateExpr state0 = tensor((psi + u * psi) / 2.0, StateExpr::zero());
        const StateExpr state1 = tensor((psi - u * psi) / 2.0, StateExpr::one());
        return eq_state(post, (state0 + state1).eval(), tol);
    });
    return circ;
}

double estimate_real_expectation(const Counts &counts) {
    if (counts.num_bits != 1) {
        std::ostringstream ss;
        ss << "expected a one-qubit histogram, got " << counts.num_bits << " bits";
        throw InvalidArgument(ss.str());
    }
    const auto n0 = static_cast<double>(counts["0"]);
    const auto n1 = static_cast<double>(counts["1"]);
    if (n0 + n1 == 0.0) {
        throw InvalidArgument("histogram is empty");
    }
    return (n0 - n1) / (n0 + n1);
}

MeasuredCircuit<double> hadamard_test_pipeline(const GateSpec &ugate, const OperatorExpr &u,
                                               const ContractCircuit &prep, double abs_tol) {
    if (prep.size() != 1) {
        throw InvalidArgument("state preparation must act on one qubit");
    }
    const StateVector psi = run_state(prep);

    ContractCircuit circ(2);
    circ.append(prep, {1});
    circ.append(hadamard_test_circuit(ugate, u), {0, 1});

    auto mc = measure(circ, {0}, estimate_real_expectation);
    mc.add_condition("condition2", [psi, u, abs_tol](const StateVector &, const Counts &, const double &est) {
        const double actual = expectation(StateExpr::from_vector(psi), u).real();
        return std::abs(actual - est) <= abs_tol;
    });
    return mc;
}

Matrix dft_matrix(int n) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    Matrix f(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            // Reduce jk mod dim before scaling to keep the angle small.
            const auto e = static_cast<double>((j * k) % dim);
            f(j, k) = std::polar(norm, 2.0 * kPi * e / static_cast<double>(dim));
        }
    }
    return f;
}

namespace {

void check_qft_size(int n) {
    if (n < 1 || n > 12) {
        std::ostringstream ss;
        ss << "QFT size must be in [1, 12], got " << n;
        throw InvalidArgument(ss.str());
    }
}

std::vector<GateInstruction> qft_gates(int n) {
    std::vector<GateInstruction> out;
    for (int j = n - 1; j >= 0; --j) {
        out.push_back({gates::h(), {j}});
        for (int k = j - 1; k >= 0; --k) {
            out.push_back({controlled(gates::p(kPi / static_cast<double>(1 << (j - k)))), {k, j}});
        }
    }
    for (int q = 0; q < n / 2; ++q) {
        out.push_back({gates::swap(), {q, n - 1 - q}});
    }
    return out;
}

}  // namespace

ContractCircuit qft_circuit(int n, double tol) {
    check_qft_size(n);
    ContractCircuit c(n, "qft");
    for (auto &g : qft_gates(n)) {
        c.append(g.gate, std::move(g.qubits));
    }
    c.add_condition("qft_spec", matches_operator(dft_matrix(n), tol));
    return c;
}

ContractCircuit inverse_qft_circuit(int n, double tol) {
    check_qft_size(n);
    ContractCircuit c(n, "inverse_qft");
    auto forward = qft_gates(n);
    for (auto it = forward.rbegin(); it != forward.rend(); ++it) {
        c.append(adjoint(it->gate), it->qubits);
    }
    c.add_condition("iqft_spec", matches_operator(dft_matrix(n).adjoint(), tol));
    return c;
}

PhaseEstimate decode_phase(const Counts &counts) {
    if (counts.table.empty()) {
        throw InvalidArgument("histogram is empty");
    }
    const std::string *mode = nullptr;
    std::uint64_t best = 0;
    for (const auto &[key, n] : counts.table) {
        if (mode == nullptr || n > best) {
            mode = &key;
            best = n;
        }
    }
    PhaseEstimate est;
    est.m = counts.num_bits;
    est.mode_bitstring = *mode;
    std::uint64_t value = 0;
    for (char c : *mode) {
        value = (value << 1) | (c == '1' ? 1U : 0U);
    }
    est.phase = static_cast<double>(value) / static_cast<double>(std::uint64_t{1} << est.m);
    return est;
}

double circular_phase_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 1.0);
    return std::min(d, 1.0 - d);
}

MeasuredCircuit<PhaseEstimate> qpe_circuit(const GateSpec &ugate, const ContractCircuit &eigenprep, int m,
                                           std::optional<double> expected_phase) {
    if (ugate.arity() != 1) {
        throw InvalidArgument("qpe_circuit supports one-qubit gates");
    }
    if (eigenprep.size() != 1) {
        throw InvalidArgument("eigenstate preparation must act on one qubit");
    }
    if (m < 1 || m > 10) {
        std::ostringstream ss;
        ss << "counting register size must be in [1, 10], got " << m;
        throw InvalidArgument(ss.str());
    }

    ContractCircuit c(m + 1, "qpe");
    c.append(eigenprep, {m});
    for (int j = 0; j < m; ++j) {
        c.append(gates::h(), {j});
    }
    Matrix power = ugate.unitary().matrix();
    for (int j = 0; j < m; ++j) {
        append_sequence(c, decompose_controlled(power), {j, m});
        power = power * power;
    }
    std::vector<int> counting;
    for (int j = 0; j < m; ++j) {
        counting.push_back(j);
    }
    c.append(inverse_qft_circuit(m), counting);

    std::vector<int> measured(counting.rbegin(), counting.rend());
    auto mc = measure(c, std::move(measured), decode_phase);
    if (expected_phase) {
        const double phi = *expected_phase;
        const double bound = 1.0 / static_cast<double>(1 << m);
        mc.add_condition("phase_close", [phi, bound](const StateVector &, const Counts &, const PhaseEstimate &est) {
            return circular_phase_distance(est.phase, phi) <= bound;
        });
    }
    return mc;
}

StateVector seeded_random_state(int num_qubits, std::uint64_t seed) {
    if (num_qubits < 1 || num_qubits > 30) {
        throw InvalidArgument("qubit count must be in [1, 30]");
    }
    Xoshiro256StarStar rng(seed);
    auto gaussian = [&rng] {
        const double u1 = 1.0 - rng.next_unit();  // (0, 1]
        const double u2 = rng.next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    };
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
    Vector v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double re = gaussian();
        const double im = gaussian();
        v[k] = Complex(re, im);
    }
    v.normalize();
    return StateVector(std::move(v));
}

}  // namespace qcontract
