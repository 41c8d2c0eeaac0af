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

#include "qcontract/gates.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qcontract/errors.hpp"

namespace qcontract {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

GateSpec fixed(std::string name, const Matrix &m) {
    return make_gate(std::move(name), {}, UnitaryMatrix::checked(m));
}

GateSpec rotation(std::string name, double angle, const Matrix &m) {
    return make_gate(std::move(name), {angle}, UnitaryMatrix::checked(m));
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_self_adjoint_name(const std::string &n) {
    return n == "i" || n == "x" || n == "y" || n == "z" || n == "h" || n == "cx" || n == "cz" || n == "swap";
}

}  // namespace

GateSpec::GateSpec(std::string name, std::vector<double> params, UnitaryMatrix u, std::shared_ptr<const GateSpec> base)
    : name_(std::move(name)), params_(std::move(params)), arity_(u.num_qubits()), unitary_(std::move(u)), base_(std::move(base)) {}

GateSpec make_gate(std::string name, std::vector<double> params, UnitaryMatrix u, std::shared_ptr<const GateSpec> base) {
    return GateSpec(std::move(name), std::move(params), std::move(u), std::move(base));
}

std::string GateSpec::label() const {
    std::ostringstream ss;
    ss.precision(12);
    ss << name_;
    if (!params_.empty()) {
        ss << "(";
        for (std::size_t k = 0; k < params_.size(); ++k) {
            ss << (k ? ", " : "") << params_[k];
        }
        ss << ")";
    }
    return ss.str();
}

namespace gates {

GateSpec i() { return fixed("i", Matrix::Identity(2, 2)); }
GateSpec x() { return fixed("x", mat2(0, 1, 1, 0)); }
GateSpec y() { return fixed("y", mat2(0, -kI, kI, 0)); }
GateSpec z() { return fixed("z", mat2(1, 0, 0, -1)); }
GateSpec h() {
    const double r = 1.0 / std::numbers::sqrt2;
    return fixed("h", mat2(r, r, r, -r));
}
GateSpec s() { return fixed("s", mat2(1, 0, 0, kI)); }
GateSpec t() { return fixed("t", mat2(1, 0, 0, std::polar(1.0, std::numbers::pi / 4))); }

GateSpec p(double lambda) { return rotation("p", lambda, mat2(1, 0, 0, std::polar(1.0, lambda))); }

GateSpec rx(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return rotation("rx", theta, mat2(c, -kI * s, -kI * s, c));
}

GateSpec ry(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return rotation("ry", theta, mat2(c, -s, s, c));
}

GateSpec rz(double theta) {
    return rotation("rz", theta, mat2(std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2)));
}

GateSpec cx() { return controlled(x()); }
GateSpec cz() { return controlled(z()); }

GateSpec swap() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
    return fixed("swap", m);
}

GateSpec matrix(const Matrix &m) { return make_gate("matrix", {}, UnitaryMatrix::checked(m)); }
GateSpec matrix(UnitaryMatrix u) { return make_gate("matrix", {}, std::move(u)); }

const std::vector<std::string> &catalog_names() {
    static const std::vector<std::string> names = {"i",  "x",  "y",  "z",  "h",  "s",    "t",
                                                   "p",  "rx", "ry", "rz", "cx", "cz", "swap"};
    return names;
}

GateSpec by_name(std::string_view name, std::span<const double> params) {
    const std::string n = lower(name);
    const bool rotation_name = n == "p" || n == "rx" || n == "ry" || n == "rz";
    const std::size_t want = rotation_name ? 1 : 0;
    const bool known = std::find(catalog_names().begin(), catalog_names().end(), n) != catalog_names().end();
    if (!known) {
        throw InvalidArgument("unknown gate '" + std::string(name) + "'");
    }
    if (params.size() != want) {
        std::ostringstream ss;
        ss << "gate '" << n << "' takes " << want << " parameter(s), got " << params.size();
        throw InvalidArgument(ss.str());
    }
    if (n == "i") return i();
    if (n == "x") return x();
    if (n == "y") return y();
    if (n == "z") return z();
    if (n == "h") return h();
    if (n == "s") return s();
    if (n == "t") return t();
    if (n == "p") return p(params[0]);
    if (n == "rx") return rx(params[0]);
    if (n == "ry") return ry(params[0]);
    if (n == "rz") return rz(params[0]);
    if (n == "cx") return cx();
    if (n == "cz") return cz();
    return swap();
}

}  // namespace gates

GateSpec controlled(const GateSpec &g) {
    const Matrix &u = g.unitary().matrix();
    const Eigen::Index d = u.rows();
    Matrix m = Matrix::Identity(2 * d, 2 * d);
    m.block(d, d, d, d) = u;

    std::string name;
    if (g.name() == "x" || g.name() == "z") {
        name = "c" + g.name();
    } else {
        name = "controlled-" + g.name();
    }
    return make_gate(std::move(name), g.params(), UnitaryMatrix::checked(m), std::make_shared<const GateSpec>(g));
}

GateSpec adjoint(const GateSpec &g) {
    const std::string &n = g.name();
    if (is_self_adjoint_name(n)) {
        return g;
    }
    if (n == "p" || n == "rx" || n == "ry" || n == "rz") {
        return gates::by_name(n, std::vector<double>{-g.params()[0]});
    }
    if (g.is_controlled()) {
        GateSpec base_adj = adjoint(*g.controlled_base());
        return controlled(base_adj);
    }
    UnitaryMatrix u = g.unitary().adjoint();
    if (n == "matrix") {
        return gates::matrix(std::move(u));
    }
    constexpr std::string_view prefix = "adjoint-";
    if (n.starts_with(prefix)) {
        return make_gate(n.substr(prefix.size()), g.params(), std::move(u));
    }
    return make_gate(std::string(prefix) + n, g.params(), std::move(u));
}

}  // namespace qcontract
