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
 * @file gates.hpp
 * Named gate catalog.
 *
 * A gate's matrix is written in its own argument order: the first qubit
 * argument is the most significant bit of the gate-local index. Hence
 * cx = [I 0; 0 X] with the control as first argument, and a gate acting on
 * qubits (a, b) with matrix kron(A, B) applies A to a and B to b.
 *
 * Canonical lowercase names: i x y z h s t p rx ry rz cx cz swap matrix.
 */

#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcontract/numerics.hpp"

namespace qcontract {

class GateSpec {
   public:
    const std::string &name() const { return name_; }
    const std::vector<double> &params() const { return params_; }
    int arity() const { return arity_; }
    const UnitaryMatrix &unitary() const { return unitary_; }

    /// For a singly-controlled gate (including cx and cz), the gate applied
    /// when the control is |1>. Null otherwise.
    const std::shared_ptr<const GateSpec> &controlled_base() const { return base_; }
    bool is_controlled() const { return base_ != nullptr; }

    /// Name with parameters, e.g. "rz(0.785398)".
    std::string label() const;

   private:
    friend GateSpec make_gate(std::string, std::vector<double>, UnitaryMatrix, std::shared_ptr<const GateSpec>);
    GateSpec(std::string name, std::vector<double> params, UnitaryMatrix u, std::shared_ptr<const GateSpec> base);

    std::string name_;
    std::vector<double> params_;
    int arity_;
    UnitaryMatrix unitary_;
    std::shared_ptr<const GateSpec> base_;
};

GateSpec make_gate(std::string name, std::vector<double> params, UnitaryMatrix u,
                   std::shared_ptr<const GateSpec> base = nullptr);

namespace gates {

GateSpec i();
GateSpec x();
GateSpec y();
GateSpec z();
GateSpec h();
GateSpec s();
GateSpec t();
/// diag(1, e^{i lambda}).
GateSpec p(double lambda);
GateSpec rx(double theta);
GateSpec ry(double theta);
/// diag(e^{-i theta/2}, e^{i theta/2}).
GateSpec rz(double theta);
GateSpec cx();
GateSpec cz();
GateSpec swap();
/// Arbitrary user unitary; throws InvalidArgument if m is not unitary.
GateSpec matrix(const Matrix &m);
GateSpec matrix(UnitaryMatrix u);

/// Looks a catalog gate up by canonical name (case-insensitive). Throws
/// InvalidArgument for unknown names or the wrong parameter count.
GateSpec by_name(std::string_view name, std::span<const double> params = {});

/// Names accepted by by_name().
const std::vector<std::string> &catalog_names();

}  // namespace gates

inline const UnitaryMatrix &unitary_of(const GateSpec &g) { return g.unitary(); }

/// Adds one control as the first qubit argument: [I 0; 0 U].
GateSpec controlled(const GateSpec &g);

/// Conjugate transpose. Rotation gates negate their angle.
GateSpec adjoint(const GateSpec &g);

}  // namespace qcontract
