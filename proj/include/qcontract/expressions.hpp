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
 * @file expressions.hpp
 * Symbolic state and operator expressions for writing assertions, e.g. the
 * expected output of a Hadamard test
 *
 *     auto psi = StateExpr::from_vector(partial_state(pre, {1}));
 *     auto expected = tensor((psi + U * psi) / 2.0, StateExpr::zero())
 *                   + tensor((psi - U * psi) / 2.0, StateExpr::one());
 *     return eq_state(post, expected.eval());
 *
 * Trees are immutable and evaluated on demand. Intermediate values may be
 * subnormalized; only expectation() and eq_state() demand unit norm.
 */

#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "qcontract/gates.hpp"
#include "qcontract/numerics.hpp"

namespace qcontract {

class OperatorExpr;

class StateExpr {
   public:
    /// Computational/Hadamard-basis ket. labels[0] is the highest qubit, so
    /// ket("+0") is |+> (x) |0> with |0> on qubit 0. Allowed labels: 0 1 + -.
    static StateExpr ket(std::string_view labels);
    static StateExpr zero();
    static StateExpr one();
    static StateExpr plus();
    static StateExpr minus();
    static StateExpr from_vector(StateVector v);

    static StateExpr scaled(Complex factor, StateExpr e);
    static StateExpr sum(StateExpr a, StateExpr b);
    /// a (x) b; b occupies the lower qubits.
    static StateExpr tensor(StateExpr a, StateExpr b);
    static StateExpr apply(OperatorExpr op, StateExpr e);

    /// Throws DimensionError on incompatible nodes.
    StateVector eval() const;
    std::string to_string() const;

    StateExpr operator+(const StateExpr &other) const { return sum(*this, other); }
    StateExpr operator-(const StateExpr &other) const { return sum(*this, scaled(-1.0, other)); }
    StateExpr operator*(Complex factor) const { return scaled(factor, *this); }
    StateExpr operator/(Complex divisor) const;

    struct Node;

   private:
    explicit StateExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static StateExpr named(const char *name, char label);
    std::shared_ptr<const Node> node_;
};

class OperatorExpr {
   public:
    static OperatorExpr gate(GateSpec g);
    /// Any square matrix of power-of-two dimension; unitarity not required.
    static OperatorExpr matrix(Matrix m);
    static OperatorExpr identity(int num_qubits);
    /// a @ b: apply b first, then a.
    static OperatorExpr compose(OperatorExpr a, OperatorExpr b);
    static OperatorExpr sum(OperatorExpr a, OperatorExpr b);
    static OperatorExpr scaled(Complex factor, OperatorExpr a);
    static OperatorExpr tensor(OperatorExpr a, OperatorExpr b);
    static OperatorExpr adjoint(OperatorExpr a);

    Matrix eval() const;
    std::string to_string() const;

    OperatorExpr operator*(const OperatorExpr &other) const { return compose(*this, other); }
    StateExpr operator*(const StateExpr &e) const { return StateExpr::apply(*this, e); }
    OperatorExpr operator+(const OperatorExpr &other) const { return sum(*this, other); }
    OperatorExpr operator-(const OperatorExpr &other) const { return sum(*this, scaled(-1.0, other)); }
    OperatorExpr operator*(Complex factor) const { return scaled(factor, *this); }

    struct Node;

   private:
    explicit OperatorExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

inline StateExpr tensor(StateExpr a, StateExpr b) { return StateExpr::tensor(std::move(a), std::move(b)); }
inline OperatorExpr tensor(OperatorExpr a, OperatorExpr b) { return OperatorExpr::tensor(std::move(a), std::move(b)); }

inline StateVector eval_state(const StateExpr &e) { return e.eval(); }

/// <psi|op|psi>. psi must be normalized within 1e-8.
Complex expectation(const StateExpr &psi, const OperatorExpr &op);

/// Pure state of the listed qubits (bit j of the result = keep[j]). Throws
/// EntangledSubsetError when the reduced state has purity < 1 - purity_tol.
/// The result's global phase is fixed: its first amplitude with modulus above
/// 1e-9 is real and positive.
StateVector partial_state(const StateVector &s, std::span<const int> keep, double purity_tol = 1e-8);

/// |<a|b>|^2 >= 1 - tol. Both states must be normalized within 1e-6.
bool eq_state(const StateVector &a, const StateVector &b, double tol = 1e-8);

/// The fidelity used by eq_state.
double fidelity(const StateVector &a, const StateVector &b);

}  // namespace qcontract
