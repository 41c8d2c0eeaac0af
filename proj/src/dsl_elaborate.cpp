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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "qcontract/dsl.hpp"
#include "qcontract/simulator.hpp"

namespace qcontract::dsl {

namespace {

[[noreturn]] void fail(const SourceSpan &span, const std::string &msg) { throw DslError(span, msg); }

const char *kind_name(const ExprValue &v) {
    switch (v.index()) {
        case 0:
            return "a scalar";
        case 1:
            return "a state";
        case 2:
            return "an operator";
        default:
            return "a bra";
    }
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool is_bare_i(const Expr &e) { return e.kind == Expr::Kind::Name && e.text == "i"; }

class Evaluator {
   public:
    explicit Evaluator(const std::optional<StateVector> &pre) : pre_(pre) {}

    ExprValue eval(const Expr &e) {
        switch (e.kind) {
            case Expr::Kind::Number:
                return Complex(e.value, 0.0);
            case Expr::Kind::Imaginary:
                return Complex(0.0, e.value);
            case Expr::Kind::Pi:
                return Complex(std::numbers::pi, 0.0);
            case Expr::Kind::Ket:
                return StateExpr::ket(e.text);
            case Expr::Kind::Name:
                return name(e);
            case Expr::Kind::Call:
                return call(e);
            case Expr::Kind::Matrix:
                return OperatorExpr::matrix(matrix_value(e));
            case Expr::Kind::Pre:
                return pre(e);
            case Expr::Kind::Negate:
                return negate(eval(*e.args[0]));
            case Expr::Kind::Adjoint:
                return dagger(eval(*e.args[0]));
            case Expr::Kind::Binary:
                return binary(e);
        }
        fail(e.span, "unsupported expression");
    }

    Complex scalar(const Expr &e, const char *what) {
        ExprValue v = eval(e);
        if (const auto *c = std::get_if<Complex>(&v)) {
            return *c;
        }
        fail(e.span, std::string(what) + " must be a scalar, got " + kind_name(v));
    }

    double real(const Expr &e, const char *what) {
        const Complex c = scalar(e, what);
        if (std::abs(c.imag()) > 1e-12) {
            fail(e.span, std::string(what) + " must be real");
        }
        if (!std::isfinite(c.real())) {
            fail(e.span, std::string(what) + " is not finite");
        }
        return c.real();
    }

    Matrix matrix_value(const Expr &e) {
        const auto n = e.rows.size();
        if (n < 2 || (n & (n - 1)) != 0) {
            fail(e.span, "matrix dimension must be a power of two >= 2, got " + std::to_string(n));
        }
        Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t r = 0; r < n; ++r) {
            if (e.rows[r].size() != n) {
                fail(e.span, "matrix row " + std::to_string(r) + " has " + std::to_string(e.rows[r].size()) +
                                 " entries, expected " + std::to_string(n));
            }
            for (std::size_t c = 0; c < n; ++c) {
                const Complex z = scalar(*e.rows[r][c], "matrix entry");
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                    fail(e.rows[r][c]->span, "matrix entry is not finite");
                }
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = z;
            }
        }
        return m;
    }

   private:
    ExprValue name(const Expr &e) {
        if (e.text == "i") {
            return Complex(0.0, 1.0);
        }
        const std::string key = lower(e.text);
        if (key == "zero") {
            return StateExpr::zero();
        }
        if (key == "one") {
            return StateExpr::one();
        }
        if (key == "plus") {
            return StateExpr::plus();
        }
        if (key == "minus") {
            return StateExpr::minus();
        }
        try {
            return OperatorExpr::gate(gates::by_name(e.text));
        } catch (const Error &) {
            fail(e.span, "unknown name '" + e.text + "'");
        }
    }

    ExprValue call(const Expr &e) {
        const std::string fn = lower(e.text);
        if (fn == "exp" || fn == "sqrt" || fn == "cos" || fn == "sin") {
            if (e.args.size() != 1) {
                fail(e.span, fn + " takes one argument");
            }
            const Complex z = scalar(*e.args[0], "function argument");
            if (fn == "exp") {
                return std::exp(z);
            }
            if (fn == "sqrt") {
                return std::sqrt(z);
            }
            return fn == "cos" ? std::cos(z) : std::sin(z);
        }
        if (fn == "adjoint" || fn == "controlled") {
            if (e.args.size() != 1) {
                fail(e.span, fn + " takes one argument");
            }
            ExprValue v = eval(*e.args[0]);
            const auto *op = std::get_if<OperatorExpr>(&v);
            if (op == nullptr) {
                fail(e.args[0]->span, fn + " needs an operator, got " + kind_name(v));
            }
            if (fn == "adjoint") {
                return OperatorExpr::adjoint(*op);
            }
            const Matrix u = checked(e.args[0]->span, [&] { return op->eval(); });
            const Eigen::Index d = u.rows();
            Matrix c = Matrix::Identity(2 * d, 2 * d);
            c.bottomRightCorner(d, d) = u;
            return OperatorExpr::matrix(c);
        }
        std::vector<double> params;
        for (const auto &a : e.args) {
            params.push_back(real(*a, "gate parameter"));
        }
        try {
            return OperatorExpr::gate(gates::by_name(e.text, params));
        } catch (const Error &err) {
            fail(e.span, err.what());
        }
    }

    ExprValue pre(const Expr &e) {
        if (!pre_) {
            fail(e.span, "'pre' is only available inside an assert");
        }
        if (!e.pre_selected) {
            return StateExpr::from_vector(*pre_);
        }
        const int n = pre_->num_qubits();
        std::set<int> seen;
        for (int q : e.pre_qubits) {
            if (q < 0 || q >= n) {
                fail(e.span, "qubit " + std::to_string(q) + " out of range for a " + std::to_string(n) + "-qubit state");
            }
            if (!seen.insert(q).second) {
                fail(e.span, "qubit " + std::to_string(q) + " selected twice");
            }
        }
        // EntangledSubsetError propagates; the runner reports it against the assert's tag.
        return StateExpr::from_vector(partial_state(*pre_, e.pre_qubits));
    }

    static ExprValue negate(const ExprValue &v) {
        if (const auto *c = std::get_if<Complex>(&v)) {
            return -*c;
        }
        if (const auto *s = std::get_if<StateExpr>(&v)) {
            return StateExpr::scaled(-1.0, *s);
        }
        if (const auto *o = std::get_if<OperatorExpr>(&v)) {
            return OperatorExpr::scaled(-1.0, *o);
        }
        return Bra{StateExpr::scaled(-1.0, std::get<Bra>(v).ket)};
    }

    static ExprValue dagger(const ExprValue &v) {
        if (const auto *c = std::get_if<Complex>(&v)) {
            return std::conj(*c);
        }
        if (const auto *s = std::get_if<StateExpr>(&v)) {
            return Bra{*s};
        }
        if (const auto *o = std::get_if<OperatorExpr>(&v)) {
            return OperatorExpr::adjoint(*o);
        }
        return std::get<Bra>(v).ket;
    }

    template <class F>
    static auto checked(const SourceSpan &span, F &&f) -> decltype(f()) {
        try {
            return f();
        } catch (const DimensionError &err) {
            fail(span, err.what());
        }
    }

    // Forces evaluation so shape errors surface at the node that caused them.
    static ExprValue validated(const SourceSpan &span, ExprValue v) {
        if (const auto *s = std::get_if<StateExpr>(&v)) {
            checked(span, [&] { return s->eval(); });
        } else if (const auto *o = std::get_if<OperatorExpr>(&v)) {
            checked(span, [&] { return o->eval(); });
        } else if (const auto *b = std::get_if<Bra>(&v)) {
            checked(span, [&] { return b->ket.eval(); });
        }
        return v;
    }

    ExprValue binary(const Expr &e) {
        const Expr &le = *e.args[0];
        const Expr &re = *e.args[1];
        ExprValue lhs = eval(le);
        ExprValue rhs = eval(re);

        // A bare i next to an operator is the identity gate.
        const bool lhs_op_context = std::holds_alternative<OperatorExpr>(rhs) ||
                                    (e.op == '@' && !std::holds_alternative<Complex>(rhs));
        const bool rhs_op_context = std::holds_alternative<OperatorExpr>(lhs) || std::holds_alternative<Bra>(lhs);
        if (e.op != '*' && e.op != '/') {
            if (is_bare_i(le) && lhs_op_context) {
                lhs = OperatorExpr::identity(1);
            }
            if (is_bare_i(re) && rhs_op_context) {
                rhs = OperatorExpr::identity(1);
            }
        }
        return validated(e.span, combine(e, lhs, rhs));
    }

    ExprValue combine(const Expr &e, const ExprValue &lhs, const ExprValue &rhs) {
        const auto *lc = std::get_if<Complex>(&lhs);
        const auto *rc = std::get_if<Complex>(&rhs);
        const auto *ls = std::get_if<StateExpr>(&lhs);
        const auto *rs = std::get_if<StateExpr>(&rhs);
        const auto *lo = std::get_if<OperatorExpr>(&lhs);
        const auto *ro = std::get_if<OperatorExpr>(&rhs);
        const auto *lb = std::get_if<Bra>(&lhs);
        const auto *rb = std::get_if<Bra>(&rhs);
        auto mismatch = [&](const char *verb) -> ExprValue {
            fail(e.span, std::string("cannot ") + verb + " " + kind_name(lhs) + " and " + kind_name(rhs));
        };

        switch (e.op) {
            case '+':
            case '-': {
                const Complex sign = e.op == '+' ? 1.0 : -1.0;
                if (lc && rc) {
                    return *lc + sign * *rc;
                }
                if (ls && rs) {
                    return StateExpr::sum(*ls, StateExpr::scaled(sign, *rs));
                }
                if (lo && ro) {
                    return OperatorExpr::sum(*lo, OperatorExpr::scaled(sign, *ro));
                }
                if (lb && rb) {
                    return Bra{StateExpr::sum(lb->ket, StateExpr::scaled(sign, rb->ket))};
                }
                return mismatch(e.op == '+' ? "add" : "subtract");
            }
            case '*': {
                if (lc && rc) {
                    return *lc * *rc;
                }
                const Complex *c = lc ? lc : rc;
                const ExprValue &other = lc ? rhs : lhs;
                if (c == nullptr) {
                    fail(e.span, std::string("'*' multiplies by a scalar; use '@' to apply ") + kind_name(lhs));
                }
                return scale(*c, other);
            }
            case '/': {
                if (rc == nullptr) {
                    fail(e.args[1]->span, std::string("divisor must be a scalar, got ") + kind_name(rhs));
                }
                if (std::abs(*rc) == 0.0) {
                    fail(e.args[1]->span, "division by zero");
                }
                return scale(1.0 / *rc, lhs);
            }
            case '@': {
                if (lo && ro) {
                    return OperatorExpr::compose(*lo, *ro);
                }
                if (lo && rs) {
                    return StateExpr::apply(*lo, *rs);
                }
                if (lb && ro) {
                    return Bra{StateExpr::apply(OperatorExpr::adjoint(*ro), lb->ket)};
                }
                if (lb && rs) {
                    const StateVector a = checked(e.span, [&] { return lb->ket.eval(); });
                    const StateVector b = checked(e.span, [&] { return rs->eval(); });
                    if (a.size() != b.size()) {
                        fail(e.span, "inner product of states with different qubit counts");
                    }
                    return inner(a, b);
                }
                return mismatch("apply '@' to");
            }
            case '^': {
                if (ls && rs) {
                    return StateExpr::tensor(*ls, *rs);
                }
                if (lo && ro) {
                    return OperatorExpr::tensor(*lo, *ro);
                }
                if (lb && rb) {
                    return Bra{StateExpr::tensor(lb->ket, rb->ket)};
                }
                return mismatch("take the tensor product of");
            }
            default:
                break;
        }
        fail(e.span, std::string("unknown operator '") + e.op + "'");
    }

    static ExprValue scale(Complex c, const ExprValue &v) {
        if (const auto *z = std::get_if<Complex>(&v)) {
            return c * *z;
        }
        if (const auto *s = std::get_if<StateExpr>(&v)) {
            return StateExpr::scaled(c, *s);
        }
        if (const auto *o = std::get_if<OperatorExpr>(&v)) {
            return OperatorExpr::scaled(c, *o);
        }
        return Bra{StateExpr::scaled(std::conj(c), std::get<Bra>(v).ket)};
    }

    const std::optional<StateVector> &pre_;
};

// -- circuit elaboration ----------------------------------------------------

void check_qubits(const std::vector<QubitArg> &qs, int size, const std::string &circuit) {
    std::set<int> seen;
    for (const QubitArg &q : qs) {
        if (q.index < 0 || q.index >= size) {
            fail(q.span, "qubit " + std::to_string(q.index) + " out of range for circuit '" + circuit + "' of size " +
                             std::to_string(size));
        }
        if (!seen.insert(q.index).second) {
            fail(q.span, "qubit " + std::to_string(q.index) + " used twice");
        }
    }
}

std::vector<int> indices(const std::vector<QubitArg> &qs) {
    std::vector<int> out;
    out.reserve(qs.size());
    for (const QubitArg &q : qs) {
        out.push_back(q.index);
    }
    return out;
}

GateSpec resolve_gate(const GateRef &ref) {
    Evaluator ev(std::nullopt);
    GateSpec g = gates::i();
    if (lower(ref.name) == "matrix") {
        if (!ref.params.empty()) {
            fail(ref.span, "the matrix gate takes no parameters");
        }
        const Matrix m = ev.matrix_value(*ref.matrix);
        if (!is_unitary(m)) {
            fail(ref.matrix->span, "matrix is not unitary");
        }
        g = gates::matrix(m);
    } else {
        std::vector<double> params;
        for (const auto &p : ref.params) {
            params.push_back(ev.real(*p, "gate parameter"));
        }
        try {
            g = gates::by_name(ref.name, params);
        } catch (const Error &err) {
            fail(ref.span, err.what());
        }
    }
    for (auto it = ref.modifiers.rbegin(); it != ref.modifiers.rend(); ++it) {
        g = *it == "controlled" ? controlled(g) : adjoint(g);
    }
    return g;
}

std::string display_name(const CircuitDef &def) { return def.name.empty() ? "main" : def.name; }

ContractCircuit build_circuit(const CircuitDef &def, const std::map<std::string, ContractCircuit> &defined,
                              const ElaborateOptions &options) {
    const std::string name = display_name(def);
    ContractCircuit c(def.size, name);
    for (const Statement &s : def.body) {
        if (const auto *g = std::get_if<GateStmt>(&s)) {
            const GateSpec gate = resolve_gate(g->gate);
            if (static_cast<std::size_t>(gate.arity()) != g->qubits.size()) {
                fail(g->span, "gate '" + gate.name() + "' acts on " + std::to_string(gate.arity()) +
                                  " qubit(s), got " + std::to_string(g->qubits.size()));
            }
            check_qubits(g->qubits, def.size, name);
            c.append(gate, indices(g->qubits));
        } else if (const auto *sub = std::get_if<SubStmt>(&s)) {
            auto it = defined.find(sub->name);
            if (it == defined.end()) {
                fail(sub->name_span, "unknown circuit '" + sub->name + "' (circuits must be defined before use)");
            }
            if (static_cast<std::size_t>(it->second.size()) != sub->qubits.size()) {
                fail(sub->span, "circuit '" + sub->name + "' has " + std::to_string(it->second.size()) +
                                    " qubit(s), got " + std::to_string(sub->qubits.size()));
            }
            check_qubits(sub->qubits, def.size, name);
            c.append(it->second, indices(sub->qubits));
        } else {
            const auto &a = std::get<AssertStmt>(s);
            // Dry run against |0...0> to report shape errors before anything executes.
            const std::optional<StateVector> probe = StateVector::basis(def.size, 0);
            ExprValue v = Evaluator(probe).eval(*a.expected);
            const auto *st = std::get_if<StateExpr>(&v);
            if (st == nullptr) {
                fail(a.expected->span, std::string("assert expects a state, got ") + kind_name(v));
            }
            const int got = st->eval().num_qubits();
            if (got != def.size) {
                fail(a.expected->span, "assert expects a " + std::to_string(def.size) + "-qubit state, got " +
                                           std::to_string(got) + " qubit(s)");
            }
            ExprPtr expected = a.expected;
            const double tol = options.eq_tolerance;
            c.add_condition(a.tag, [expected, tol](const StateVector &pre, const StateVector &post) {
                const std::optional<StateVector> bound = pre;
                const StateVector want = std::get<StateExpr>(Evaluator(bound).eval(*expected)).eval();
                if (!want.is_normalized(1e-6)) {
                    return false;
                }
                return eq_state(post, want, tol);
            });
        }
    }
    return c;
}

Counts raw_postprocess(const Counts &c) { return c; }

}  // namespace

ExprValue evaluate(const Expr &e, const std::optional<StateVector> &pre) { return Evaluator(pre).eval(e); }

StateExpr parse_state_expr(std::string_view src, const std::optional<StateVector> &pre) {
    ExprPtr e = parse_expression(src);
    ExprValue v = evaluate(*e, pre);
    if (auto *s = std::get_if<StateExpr>(&v)) {
        return *s;
    }
    fail(e->span, std::string("expected a state, got ") + kind_name(v));
}

Program elaborate(const CircuitFile &f, const ElaborateOptions &options) {
    if (f.circuits.empty()) {
        fail({}, "no circuit defined");
    }
    std::map<std::string, ContractCircuit> defined;
    for (std::size_t k = 0; k + 1 < f.circuits.size(); ++k) {
        const CircuitDef &def = f.circuits[k];
        defined.emplace(def.name, build_circuit(def, defined, options));
    }
    Program prog{build_circuit(f.main(), defined, options), std::nullopt, std::nullopt};
    if (!f.measure) {
        return prog;
    }

    const MeasureStmt &m = *f.measure;
    check_qubits(m.qubits, f.num_qubits(), "main");
    prog.shots = m.shots;

    std::function<DslValue(const Counts &)> post;
    if (m.postprocess == "real_expectation") {
        if (m.qubits.size() != 1) {
            fail(m.postprocess_span, "real_expectation needs exactly one measured qubit");
        }
        post = [](const Counts &c) -> DslValue { return estimate_real_expectation(c); };
    } else if (m.postprocess == "phase") {
        post = [](const Counts &c) -> DslValue { return decode_phase(c); };
    } else {
        if (m.interval) {
            fail(m.postprocess_span, "raw counts cannot be checked against an interval");
        }
        post = [](const Counts &c) -> DslValue { return raw_postprocess(c); };
    }
    prog.measured.emplace(prog.circuit, indices(m.qubits), post);

    if (m.interval) {
        Evaluator ev(std::nullopt);
        const double lo = ev.real(*m.interval->first, "interval bound");
        const double hi = ev.real(*m.interval->second, "interval bound");
        if (lo > hi) {
            fail(merge(m.interval->first->span, m.interval->second->span), "interval is empty");
        }
        prog.measured->add_condition("expect", [lo, hi](const StateVector &, const Counts &, const DslValue &v) {
            const double x = std::holds_alternative<double>(v) ? std::get<double>(v) : std::get<PhaseEstimate>(v).phase;
            return x >= lo && x <= hi;
        });
    }
    return prog;
}

std::string format_value(const DslValue &v) {
    std::ostringstream ss;
    if (const auto *d = std::get_if<double>(&v)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", *d);
        ss << "estimate " << buf;
    } else if (const auto *p = std::get_if<PhaseEstimate>(&v)) {
        ss << "phase " << p->phase << " (mode " << p->mode_bitstring << ", m=" << p->m << ")";
    } else {
        const auto &c = std::get<Counts>(v);
        ss << "counts";
        for (const auto &[key, n] : c.table) {
            ss << " " << key << ":" << n;
        }
    }
    return ss.str();
}

}  // namespace qcontract::dsl
