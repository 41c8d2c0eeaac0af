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

#include "qcontract/expressions.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "qcontract/errors.hpp"

namespace qcontract {

struct StateExpr::Node {
    enum class Kind { Ket, Named, Vector, Scaled, Sum, Tensor, Apply } kind;
    std::string text;  // ket labels or state name
    std::optional<StateVector> vec;
    Complex factor{1.0, 0.0};
    std::vector<StateExpr> kids;
    std::vector<OperatorExpr> ops;
};

struct OperatorExpr::Node {
    enum class Kind { Gate, Matrix, Compose, Sum, Scaled, Tensor, Adjoint } kind;
    std::optional<GateSpec> gate;
    Matrix m;
    Complex factor{1.0, 0.0};
    std::vector<OperatorExpr> kids;
};

namespace {

using SK = StateExpr::Node::Kind;
using OK = OperatorExpr::Node::Kind;

Vector single_qubit(char label) {
    const double r = 1.0 / std::numbers::sqrt2;
    Vector v(2);
    switch (label) {
        case '0':
            v << 1.0, 0.0;
            break;
        case '1':
            v << 0.0, 1.0;
            break;
        case '+':
            v << r, r;
            break;
        case '-':
            v << r, -r;
            break;
        default:
            throw InvalidArgument(std::string("invalid ket label '") + label + "'");
    }
    return v;
}

std::string fmt_complex(Complex c) {
    std::ostringstream ss;
    ss.precision(10);
    if (c.imag() == 0.0) {
        ss << c.real();
    } else {
        ss << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    }
    return ss.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// StateExpr

StateExpr StateExpr::ket(std::string_view labels) {
    if (labels.empty()) {
        throw InvalidArgument("empty ket");
    }
    for (char c : labels) {
        (void)single_qubit(c);
    }
    auto n = std::make_shared<Node>();
    n->kind = SK::Ket;
    n->text = std::string(labels);
    return StateExpr(std::move(n));
}

StateExpr StateExpr::named(const char *name, char label) {
    auto n = std::make_shared<Node>();
    n->kind = SK::Named;
    n->text = std::string(1, label) + ":" + name;
    return StateExpr(std::move(n));
}

StateExpr StateExpr::zero() { return named("zero", '0'); }
StateExpr StateExpr::one() { return named("one", '1'); }
StateExpr StateExpr::plus() { return named("plus", '+'); }
StateExpr StateExpr::minus() { return named("minus", '-'); }

StateExpr StateExpr::from_vector(StateVector v) {
    auto n = std::make_shared<Node>();
    n->kind = SK::Vector;
    n->vec = std::move(v);
    return StateExpr(std::move(n));
}

StateExpr StateExpr::scaled(Complex factor, StateExpr e) {
    auto n = std::make_shared<Node>();
    n->kind = SK::Scaled;
    n->factor = factor;
    n->kids = {std::move(e)};
    return StateExpr(std::move(n));
}

StateExpr StateExpr::sum(StateExpr a, StateExpr b) {
    auto n = std::make_shared<Node>();
    n->kind = SK::Sum;
    n->kids = {std::move(a), std::move(b)};
    return StateExpr(std::move(n));
}

StateExpr StateExpr::tensor(StateExpr a, StateExpr b) {
    auto n = std::make_shared<Node>();
    n->kind = SK::Tensor;
    n->kids = {std::move(a), std::move(b)};
    return StateExpr(std::move(n));
}

StateExpr StateExpr::apply(OperatorExpr op, StateExpr e) {
    auto n = std::make_shared<Node>();
    n->kind = SK::Apply;
    n->kids = {std::move(e)};
    n->ops = {std::move(op)};
    return StateExpr(std::move(n));
}

StateExpr StateExpr::operator/(Complex divisor) const {
    if (divisor == Complex{0.0, 0.0}) {
        throw InvalidArgument("division of a state expression by zero");
    }
    return scaled(1.0 / divisor, *this);
}

StateVector StateExpr::eval() const {
    const Node &n = *node_;
    switch (n.kind) {
        case SK::Ket: {
            Vector v = single_qubit(n.text[0]);
            for (std::size_t k = 1; k < n.text.size(); ++k) {
                v = tensor_states(StateVector(v), StateVector(single_qubit(n.text[k]))).amplitudes();
            }
            return StateVector(std::move(v));
        }
        case SK::Named:
            return StateVector(single_qubit(n.text[0]));
        case SK::Vector:
            return *n.vec;
        case SK::Scaled:
            return n.kids[0].eval() * n.factor;
        case SK::Sum: {
            StateVector a = n.kids[0].eval();
            StateVector b = n.kids[1].eval();
            if (a.num_qubits() != b.num_qubits()) {
                std::ostringstream ss;
                ss << "cannot add a " << a.num_qubits() << "-qubit state to a " << b.num_qubits() << "-qubit state";
                throw DimensionError(ss.str());
            }
            return a + b;
        }
        case SK::Tensor:
            return tensor_states(n.kids[0].eval(), n.kids[1].eval());
        case SK::Apply: {
            Matrix m = n.ops[0].eval();
            StateVector v = n.kids[0].eval();
            if (static_cast<std::size_t>(m.cols()) != v.size()) {
                std::ostringstream ss;
                ss << "cannot apply a " << m.rows() << "x" << m.cols() << " operator to a " << v.num_qubits()
                   << "-qubit state";
                throw DimensionError(ss.str());
            }
            return StateVector(m * v.amplitudes());
        }
    }
    throw Error("unreachable");
}

std::string StateExpr::to_string() const {
    const Node &n = *node_;
    switch (n.kind) {
        case SK::Ket:
            return "|" + n.text + ">";
        case SK::Named:
            return n.text.substr(2);
        case SK::Vector: {
            std::ostringstream ss;
            ss << "vec[" << n.vec->num_qubits() << "q]";
            return ss.str();
        }
        case SK::Scaled:
            return fmt_complex(n.factor) + " * " + n.kids[0].to_string();
        case SK::Sum:
            return "(" + n.kids[0].to_string() + " + " + n.kids[1].to_string() + ")";
        case SK::Tensor:
            return "(" + n.kids[0].to_string() + " ^ " + n.kids[1].to_string() + ")";
        case SK::Apply:
            return n.ops[0].to_string() + " @ " + n.kids[0].to_string();
    }
    return "?";
}

// ---------------------------------------------------------------------------
// OperatorExpr

OperatorExpr OperatorExpr::gate(GateSpec g) {
    auto n = std::make_shared<Node>();
    n->kind = OK::Gate;
    n->gate = std::move(g);
    return OperatorExpr(std::move(n));
}

OperatorExpr OperatorExpr::matrix(Matrix m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("operator matrix must be square");
    }
    (void)qubits_for_dimension(static_cast<std::size_t>(m.rows()));
    if (!m.allFinite()) {
        throw InvalidArgument("operator matrix entries must be finite");
    }
    auto n = std::make_shared<Node>();
    n->kind = OK::Matrix;
    n->m = std::move(m);
    return OperatorExpr(std::move(n));
}

OperatorExpr OperatorExpr::identity(int num_qubits) {
    auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
    return matrix(Matrix::Identity(dim, dim));
}

OperatorExpr OperatorExpr::compose(OperatorExpr a, OperatorExpr b) {
    auto n = std::make_shared<Node>();
    n->kind = OK::Compose;
    n->kids = {std::move(a), std::move(b)};
    return OperatorExpr(std::move(n));
}

OperatorExpr OperatorExpr::sum(OperatorExpr a, OperatorExpr b) {
    auto n = std::make_shared<Node>();
    n->kind = OK::Sum;
    n->kids = {std::move(a), std::move(b)};
    return OperatorExpr(std::move(n));
}

OperatorExpr OperatorExpr::scaled(Complex factor, OperatorExpr a) {
    auto n = std::make_shared<Node>();
    n->kind = OK::Scaled;
    n->factor = factor;
    n->kids = {std::move(a)};
    return OperatorExpr(std::move(n));
}

OperatorExpr OperatorExpr::tensor(OperatorExpr a, OperatorExpr b) {
    auto n = std::make_shared<Node>();
    n->kind = OK::Tensor;
    n->kids = {std::move(a), std::move(b)};
    return OperatorExpr(std::move(n));
}

OperatorExpr OperatorExpr::adjoint(OperatorExpr a) {
    auto n = std::make_shared<Node>();
    n->kind = OK::Adjoint;
    n->kids = {std::move(a)};
    return OperatorExpr(std::move(n));
}

Matrix OperatorExpr::eval() const {
    const Node &n = *node_;
    switch (n.kind) {
        case OK::Gate:
            return n.gate->unitary().matrix();
        case OK::Matrix:
            return n.m;
        case OK::Compose:
        case OK::Sum: {
            Matrix a = n.kids[0].eval();
            Matrix b = n.kids[1].eval();
            if (a.rows() != b.rows()) {
                std::ostringstream ss;
                ss << "operator dimensions differ (" << a.rows() << " vs " << b.rows() << ")";
                throw DimensionError(ss.str());
            }
            return n.kind == OK::Compose ? Matrix(a * b) : Matrix(a + b);
        }
        case OK::Scaled:
            return n.factor * n.kids[0].eval();
        case OK::Tensor:
            return kron(n.kids[0].eval(), n.kids[1].eval());
        case OK::Adjoint:
            return n.kids[0].eval().adjoint();
    }
    throw Error("unreachable");
}

std::string OperatorExpr::to_string() const {
    const Node &n = *node_;
    switch (n.kind) {
        case OK::Gate:
            return n.gate->label();
        case OK::Matrix: {
            std::ostringstream ss;
            ss << "matrix[" << n.m.rows() << "x" << n.m.cols() << "]";
            return ss.str();
        }
        case OK::Compose:
            return "(" + n.kids[0].to_string() + " @ " + n.kids[1].to_string() + ")";
        case OK::Sum:
            return "(" + n.kids[0].to_string() + " + " + n.kids[1].to_string() + ")";
        case OK::Scaled:
            return fmt_complex(n.factor) + " * " + n.kids[0].to_string();
        case OK::Tensor:
            return "(" + n.kids[0].to_string() + " ^ " + n.kids[1].to_string() + ")";
        case OK::Adjoint:
            return "~" + n.kids[0].to_string();
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Assertion helpers

Complex expectation(const StateExpr &psi, const OperatorExpr &op) {
    StateVector v = psi.eval();
    if (!v.is_normalized(1e-8)) {
        throw InvalidArgument("expectation requires a normalized state");
    }
    Matrix m = op.eval();
    if (static_cast<std::size_t>(m.rows()) != v.size()) {
        throw DimensionError("expectation: operator and state dimensions differ");
    }
    return v.amplitudes().dot(m * v.amplitudes());
}

StateVector partial_state(const StateVector &s, std::span<const int> keep, double purity_tol) {
    DensityMatrix rho = reduced_density(s, keep);
    const double p = purity(rho);
    if (p < 1.0 - purity_tol) {
        std::ostringstream ss;
        ss << "qubit subset is entangled with the rest of the register (purity " << p << ")";
        throw EntangledSubsetError(p, ss.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());
    Vector v = solver.eigenvectors().col(rho.matrix().cols() - 1);
    v.normalize();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double mag = std::abs(v[k]);
        if (mag > 1e-9) {
            v *= std::conj(v[k]) / mag;
            v[k] = mag;
            break;
        }
    }
    return StateVector(std::move(v));
}

double fidelity(const StateVector &a, const StateVector &b) { return std::norm(inner(a, b)); }

bool eq_state(const StateVector &a, const StateVector &b, double tol) {
    if (a.num_qubits() != b.num_qubits()) {
        std::ostringstream ss;
        ss << "eq_state: comparing a " << a.num_qubits() << "-qubit state with a " << b.num_qubits() << "-qubit state";
        throw DimensionError(ss.str());
    }
    if (!a.is_normalized(1e-6) || !b.is_normalized(1e-6)) {
        throw InvalidArgument("eq_state requires normalized states");
    }
    return fidelity(a, b) >= 1.0 - tol;
}

}  // namespace qcontract
