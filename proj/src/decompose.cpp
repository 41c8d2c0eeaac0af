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

#include "qcontract/decompose.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qcontract/errors.hpp"
#include "qcontract/simulator.hpp"

namespace qcontract {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleEpsilon = 1e-14;

void require_2x2_unitary(const Matrix &u) {
    if (u.rows() != 2 || u.cols() != 2) {
        throw InvalidArgument("expected a 2x2 matrix");
    }
    if (!u.allFinite() || !is_unitary(u)) {
        throw InvalidArgument("matrix is not unitary");
    }
}

// Appends gates in time order, folding consecutive rz on one qubit and
// dropping rotations by (numerically) zero.
class Emitter {
   public:
    explicit Emitter(int num_qubits) { seq_.num_qubits = num_qubits; }

    void rz(int q, double angle) {
        if (!seq_.gates.empty()) {
            BasisOp &last = seq_.gates.back();
            if (last.gate.name() == "rz" && last.qubits[0] == q) {
                const double merged = last.gate.params()[0] + angle;
                seq_.gates.pop_back();
                push_rotation(gates::rz(merged), q, merged);
                return;
            }
        }
        push_rotation(gates::rz(angle), q, angle);
    }

    void rx(int q, double angle) { push_rotation(gates::rx(angle), q, angle); }

    // RY(g) = RZ(pi/2) RX(g) RZ(-pi/2).
    void ry(int q, double angle) {
        if (std::abs(angle) < kAngleEpsilon) {
            return;
        }
        rz(q, -kPi / 2);
        rx(q, angle);
        rz(q, kPi / 2);
    }

    void cx(int control, int target) { seq_.gates.push_back({gates::cx(), {control, target}}); }

    DecomposedSequence finish(double phase) {
        seq_.global_phase = phase;
        return std::move(seq_);
    }

   private:
    void push_rotation(GateSpec g, int q, double angle) {
        if (std::abs(angle) < kAngleEpsilon) {
            return;
        }
        seq_.gates.push_back({std::move(g), {q}});
    }

    DecomposedSequence seq_;
};

Matrix rz_matrix(double theta) { return gates::rz(theta).unitary().matrix(); }
Matrix ry_matrix(double theta) { return gates::ry(theta).unitary().matrix(); }

}  // namespace

Matrix DecomposedSequence::reconstruct() const {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
    Matrix total = Matrix::Identity(dim, dim);
    for (const BasisOp &op : gates) {
        // Argument j is register qubit (n-1-j) so the register index matches
        // the gate-local (first argument = most significant) ordering.
        std::vector<int> reg;
        for (int q : op.qubits) {
            reg.push_back(num_qubits - 1 - q);
        }
        total = embed_matrix(op.gate.unitary().matrix(), reg, num_qubits) * total;
    }
    return std::polar(1.0, global_phase) * total;
}

ZyzAngles zyz_angles(const Matrix &u) {
    require_2x2_unitary(u);
    ZyzAngles out;
    const Complex det = u.determinant();
    out.alpha = std::arg(det) / 2.0;
    const Matrix v = std::polar(1.0, -out.alpha) * u;  // in SU(2)

    const double c = std::abs(v(1, 1));
    const double s = std::abs(v(1, 0));
    out.gamma = 2.0 * std::atan2(s, c);

    // v = [[e^{-i(b+d)/2} cos, -e^{-i(b-d)/2} sin], [e^{i(b-d)/2} sin, e^{i(b+d)/2} cos]]
    if (out.gamma < 1e-12) {
        out.gamma = 0.0;
        out.beta = 0.0;
        out.delta = 2.0 * std::arg(v(1, 1));
    } else if (c < 1e-12) {
        const double diff = 2.0 * std::arg(v(1, 0));
        out.beta = diff / 2.0;
        out.delta = -diff / 2.0;
    } else {
        const double sum = 2.0 * std::arg(v(1, 1));
        const double diff = 2.0 * std::arg(v(1, 0));
        out.beta = (sum + diff) / 2.0;
        out.delta = (sum - diff) / 2.0;
    }
    return out;
}

AbcFactors abc_factors(const ZyzAngles &z) {
    AbcFactors f;
    f.a = rz_matrix(z.beta) * ry_matrix(z.gamma / 2.0);
    f.b = ry_matrix(-z.gamma / 2.0) * rz_matrix(-(z.delta + z.beta) / 2.0);
    f.c = rz_matrix((z.delta - z.beta) / 2.0);
    return f;
}

DecomposedSequence decompose_1q(const Matrix &u) {
    const ZyzAngles z = zyz_angles(u);
    Emitter e(1);
    e.rz(0, z.delta);
    e.ry(0, z.gamma);
    e.rz(0, z.beta);
    return e.finish(z.alpha);
}

DecomposedSequence decompose_controlled(const Matrix &u) {
    const ZyzAngles z = zyz_angles(u);
    constexpr int control = 0;
    constexpr int target = 1;
    Emitter e(2);
    // C
    e.rz(target, (z.delta - z.beta) / 2.0);
    e.cx(control, target);
    // B = RY(-g/2) RZ(-(d+b)/2)
    e.rz(target, -(z.delta + z.beta) / 2.0);
    e.ry(target, -z.gamma / 2.0);
    e.cx(control, target);
    // A = RZ(b) RY(g/2)
    e.ry(target, z.gamma / 2.0);
    e.rz(target, z.beta);
    // diag(1, e^{i alpha}) = e^{i alpha/2} RZ(alpha)
    e.rz(control, z.alpha);
    return e.finish(z.alpha / 2.0);
}

const std::set<std::string> &default_basis() {
    static const std::set<std::string> basis = {"h", "rx", "rz", "cx"};
    return basis;
}

std::set<std::string> parse_basis(std::string_view spec) {
    std::set<std::string> out;
    const auto &catalog = gates::catalog_names();
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = spec.find(',', start);
        std::string name;
        for (char ch : spec.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)) {
            if (!std::isspace(static_cast<unsigned char>(ch))) {
                name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
            }
        }
        if (name.empty()) {
            throw InvalidArgument("empty gate name in basis '" + std::string(spec) + "'");
        }
        if (std::find(catalog.begin(), catalog.end(), name) == catalog.end()) {
            throw InvalidArgument("unknown gate '" + name + "' in basis");
        }
        out.insert(std::move(name));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

ContractCircuit decompose_circuit(const ContractCircuit &c, const std::set<std::string> &basis) {
    for (const auto &required : default_basis()) {
        if (!basis.contains(required)) {
            throw InvalidArgument("basis must contain h, rx, rz and cx (missing '" + required + "')");
        }
    }

    ContractCircuit out(c.size(), c.name());
    out.add_global_phase(c.global_phase());

    auto emit = [&out](const DecomposedSequence &seq, const std::vector<int> &args) {
        for (const BasisOp &op : seq.gates) {
            std::vector<int> qubits;
            for (int q : op.qubits) {
                qubits.push_back(args[static_cast<std::size_t>(q)]);
            }
            out.append(op.gate, std::move(qubits));
        }
        out.add_global_phase(seq.global_phase);
    };

    for (const auto &instr : c.instructions()) {
        if (const auto *sub = std::get_if<SubInstruction>(&instr)) {
            out.append(decompose_circuit(*sub->circuit, basis), sub->qubits);
            continue;
        }
        const auto &g = std::get<GateInstruction>(instr);
        // The identity passes through untouched whatever the basis.
        if (basis.contains(g.gate.name()) || g.gate.name() == "i") {
            out.append(g.gate, g.qubits);
        } else if (g.gate.arity() == 1) {
            emit(decompose_1q(g.gate.unitary().matrix()), g.qubits);
        } else if (g.gate.is_controlled() && g.gate.controlled_base()->arity() == 1) {
            emit(decompose_controlled(g.gate.controlled_base()->unitary().matrix()), g.qubits);
        } else {
            std::ostringstream ss;
            ss << "cannot decompose gate '" << g.gate.name() << "' (" << g.gate.arity()
               << " qubits); only one-qubit and singly-controlled one-qubit gates are supported";
            throw InvalidArgument(ss.str());
        }
    }

    for (const auto &cond : c.conditions()) {
        out.add_condition(cond.tag, cond.predicate);
    }
    return out;
}

}  // namespace qcontract
