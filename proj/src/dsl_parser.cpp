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

#include <cstdio>
#include <set>
#include <sstream>

#include "qcontract/dsl.hpp"

namespace qcontract::dsl {

namespace {

constexpr int kMaxCircuitSize = 30;

std::string describe(const Token &t) {
    switch (t.kind) {
        case TokenKind::Identifier:
        case TokenKind::Keyword:
        case TokenKind::Integer:
        case TokenKind::Real:
        case TokenKind::Imaginary:
            return "'" + t.text + "'";
        case TokenKind::Ket:
            return "ket '|" + t.text + ">'";
        default:
            return token_kind_name(t.kind);
    }
}

class Parser {
   public:
    Parser(const std::vector<Token> &tokens, std::size_t pos) : toks_(tokens), pos_(pos) {}

    std::size_t position() const { return pos_; }

    CircuitFile file() {
        CircuitFile f;
        std::set<std::string> names;
        std::set<std::string> tags;
        skip_newlines();
        while (!at(TokenKind::End)) {
            const Token &first = peek();
            if (f.measure) {
                fail(first.span, "measure must be the last statement of the file");
            }
            if (at_keyword("circuit")) {
                if (!f.circuits.empty() && f.circuits.back().name.empty()) {
                    fail(f.circuits.back().span, "only the last circuit may be unnamed");
                }
                CircuitDef def = circuit_header();
                if (!def.name.empty() && !names.insert(def.name).second) {
                    fail(def.span, "duplicate circuit name '" + def.name + "'");
                }
                f.circuits.push_back(std::move(def));
                tags.clear();
            } else if (f.circuits.empty()) {
                fail(first.span, "expected 'circuit <size>' before " + describe(first));
            } else if (at_keyword("measure")) {
                f.measure = measure_stmt();
            } else if (at_keyword("sub")) {
                f.circuits.back().body.emplace_back(sub_stmt());
            } else if (at_keyword("assert")) {
                AssertStmt a = assert_stmt();
                if (!tags.insert(a.tag).second) {
                    fail(a.span, "duplicate condition tag '" + a.tag + "'");
                }
                f.circuits.back().body.emplace_back(std::move(a));
            } else if (at(TokenKind::Identifier)) {
                f.circuits.back().body.emplace_back(gate_stmt());
            } else {
                fail(first.span, "expected a statement, found " + describe(first));
            }
            end_of_statement();
            skip_newlines();
        }
        if (f.circuits.empty()) {
            fail(peek().span, "expected 'circuit <size>'");
        }
        return f;
    }

    ExprPtr expression() {
        ExprPtr lhs = tensor();
        while (at(TokenKind::Plus) || at(TokenKind::Minus)) {
            const char op = take().text[0];
            lhs = binary(op, lhs, tensor());
        }
        return lhs;
    }

   private:
    // -- token helpers -----------------------------------------------------

    const Token &peek(std::size_t ahead = 0) const {
        const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    bool at(TokenKind k) const { return peek().kind == k; }
    bool at_keyword(std::string_view kw) const { return at(TokenKind::Keyword) && peek().text == kw; }
    const Token &take() {
        const Token &t = peek();
        if (pos_ < toks_.size() - 1) {
            ++pos_;
        }
        return t;
    }
    const Token &expect(TokenKind k, const std::string &what) {
        if (!at(k)) {
            fail(peek().span, "expected " + what + ", found " + describe(peek()));
        }
        return take();
    }
    const Token &expect_keyword(std::string_view kw) {
        if (!at_keyword(kw)) {
            fail(peek().span, "expected '" + std::string(kw) + "', found " + describe(peek()));
        }
        return take();
    }
    [[noreturn]] static void fail(const SourceSpan &span, const std::string &msg) { throw DslError(span, msg); }

    void skip_newlines() {
        while (at(TokenKind::Newline)) {
            take();
        }
    }
    void end_of_statement() {
        if (!at(TokenKind::Newline) && !at(TokenKind::End)) {
            fail(peek().span, "expected end of line, found " + describe(peek()));
        }
    }

    int integer(const std::string &what) {
        const Token &t = expect(TokenKind::Integer, what);
        if (t.number > 1e9) {
            fail(t.span, what + " is too large");
        }
        return static_cast<int>(t.number);
    }

    std::vector<QubitArg> qubit_list() {
        std::vector<QubitArg> out;
        const Token &first = expect(TokenKind::Integer, "a qubit index");
        out.push_back({static_cast<int>(std::min(first.number, 1e9)), first.span});
        while (at(TokenKind::Integer) || (at(TokenKind::Comma) && peek(1).kind == TokenKind::Integer)) {
            if (at(TokenKind::Comma)) {
                take();
            }
            const Token &t = take();
            out.push_back({static_cast<int>(std::min(t.number, 1e9)), t.span});
        }
        return out;
    }

    // -- statements --------------------------------------------------------

    CircuitDef circuit_header() {
        const Token &kw = expect_keyword("circuit");
        CircuitDef def;
        if (at(TokenKind::Identifier)) {
            def.name = take().text;
        }
        const Token &size = expect(TokenKind::Integer, "circuit size");
        if (size.number < 1 || size.number > kMaxCircuitSize) {
            std::ostringstream ss;
            ss << "circuit size must be between 1 and " << kMaxCircuitSize << ", got " << size.text;
            fail(size.span, ss.str());
        }
        def.size = static_cast<int>(size.number);
        def.span = merge(kw.span, size.span);
        return def;
    }

    GateStmt gate_stmt() {
        GateStmt s;
        s.gate = gate_ref();
        s.qubits = qubit_list();
        s.span = merge(s.gate.span, s.qubits.back().span);
        return s;
    }

    GateRef gate_ref() {
        GateRef g;
        const Token *name = &expect(TokenKind::Identifier, "a gate name");
        g.span = name->span;
        while ((name->text == "controlled" || name->text == "adjoint") && at(TokenKind::Minus)) {
            g.modifiers.push_back(name->text);
            take();
            name = &expect(TokenKind::Identifier, "a gate name after '" + g.modifiers.back() + "-'");
        }
        g.name = name->text;
        g.span = merge(g.span, name->span);
        if (at(TokenKind::LParen)) {
            take();
            g.params.push_back(expression());
            while (at(TokenKind::Comma)) {
                take();
                g.params.push_back(expression());
            }
            g.span = merge(g.span, expect(TokenKind::RParen, "')'").span);
        }
        if (g.name == "matrix") {
            if (!at(TokenKind::LBracket)) {
                fail(peek().span, "the matrix gate needs a matrix literal");
            }
            g.matrix = atom();
            g.span = merge(g.span, g.matrix->span);
        }
        return g;
    }

    SubStmt sub_stmt() {
        SubStmt s;
        const Token &kw = expect_keyword("sub");
        const Token &name = expect(TokenKind::Identifier, "a circuit name");
        s.name = name.text;
        s.name_span = name.span;
        s.qubits = qubit_list();
        s.span = merge(kw.span, s.qubits.back().span);
        return s;
    }

    AssertStmt assert_stmt() {
        AssertStmt a;
        const Token &kw = expect_keyword("assert");
        const Token &tag = expect(TokenKind::Identifier, "a condition tag");
        a.tag = tag.text;
        a.span = merge(kw.span, tag.span);
        expect(TokenKind::Colon, "':'");
        expect_keyword("post");
        expect(TokenKind::EqualEqual, "'=='");
        a.expected = expression();
        return a;
    }

    MeasureStmt measure_stmt() {
        MeasureStmt m;
        const Token &kw = expect_keyword("measure");
        m.qubits = qubit_list();
        m.span = merge(kw.span, m.qubits.back().span);
        if (at_keyword("shots")) {
            take();
            const Token &n = expect(TokenKind::Integer, "a shot count");
            if (n.number < 1) {
                fail(n.span, "shots must be >= 1");
            }
            m.shots = static_cast<std::uint64_t>(n.number);
        }
        if (at_keyword("expect")) {
            take();
            const Token &name = expect(TokenKind::Identifier, "a postprocess name");
            if (name.text != "real_expectation" && name.text != "phase" && name.text != "raw") {
                fail(name.span, "unknown postprocess '" + name.text + "' (expected real_expectation, phase or raw)");
            }
            m.postprocess = name.text;
            m.postprocess_span = name.span;
            if (at(TokenKind::Identifier) && peek().text == "in") {
                take();
                const Token &open = expect(TokenKind::LBracket, "'['");
                ExprPtr lo = expression();
                expect(TokenKind::Comma, "','");
                ExprPtr hi = expression();
                const Token &close = expect(TokenKind::RBracket, "']'");
                (void)open;
                (void)close;
                m.interval = std::make_pair(lo, hi);
            }
        }
        return m;
    }

    // -- expressions -------------------------------------------------------

    static ExprPtr binary(char op, const ExprPtr &lhs, const ExprPtr &rhs) {
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Binary;
        e->op = op;
        e->args = {lhs, rhs};
        e->span = merge(lhs->span, rhs->span);
        return e;
    }

    ExprPtr tensor() {
        ExprPtr lhs = product();
        while (at(TokenKind::Caret)) {
            take();
            lhs = binary('^', lhs, product());
        }
        return lhs;
    }

    ExprPtr product() {
        ExprPtr lhs = unary();
        while (at(TokenKind::Star) || at(TokenKind::Slash) || at(TokenKind::At)) {
            const char op = take().text[0];
            lhs = binary(op, lhs, unary());
        }
        return lhs;
    }

    ExprPtr unary() {
        if (at(TokenKind::Minus) || at(TokenKind::Tilde)) {
            const Token &t = take();
            auto e = std::make_shared<Expr>();
            e->kind = t.kind == TokenKind::Minus ? Expr::Kind::Negate : Expr::Kind::Adjoint;
            ExprPtr operand = unary();
            e->span = merge(t.span, operand->span);
            e->args = {operand};
            return e;
        }
        return atom();
    }

    ExprPtr atom() {
        const Token &t = peek();
        auto e = std::make_shared<Expr>();
        e->span = t.span;
        switch (t.kind) {
            case TokenKind::Integer:
            case TokenKind::Real:
                take();
                e->kind = Expr::Kind::Number;
                e->value = t.number;
                e->is_integer = t.kind == TokenKind::Integer;
                return e;
            case TokenKind::Imaginary:
                take();
                e->kind = Expr::Kind::Imaginary;
                e->value = t.number;
                e->is_integer = t.text.find_first_of(".eE") == std::string::npos;
                return e;
            case TokenKind::Pi:
                take();
                e->kind = Expr::Kind::Pi;
                return e;
            case TokenKind::Ket:
                take();
                e->kind = Expr::Kind::Ket;
                e->text = t.text;
                return e;
            case TokenKind::Keyword:
                if (t.text == "pre") {
                    take();
                    e->kind = Expr::Kind::Pre;
                    if (at(TokenKind::LBracket)) {
                        pre_selection(*e);
                    }
                    return e;
                }
                break;
            case TokenKind::Identifier:
                take();
                e->text = t.text;
                if (at(TokenKind::LParen)) {
                    take();
                    e->kind = Expr::Kind::Call;
                    e->args.push_back(expression());
                    while (at(TokenKind::Comma)) {
                        take();
                        e->args.push_back(expression());
                    }
                    e->span = merge(e->span, expect(TokenKind::RParen, "')'").span);
                } else {
                    e->kind = Expr::Kind::Name;
                }
                return e;
            case TokenKind::LBracket:
                return matrix_literal();
            case TokenKind::LParen: {
                take();
                ExprPtr inner = expression();
                expect(TokenKind::RParen, "')'");
                return inner;
            }
            default:
                break;
        }
        fail(t.span, "expected an expression, found " + describe(t));
    }

    void pre_selection(Expr &e) {
        take();  // '['
        e.pre_selected = true;
        const Token &first = expect(TokenKind::Integer, "a qubit index");
        if (at(TokenKind::DotDot)) {
            take();
            const Token &last = expect(TokenKind::Integer, "a qubit index");
            if (last.number < first.number) {
                fail(merge(first.span, last.span), "empty qubit range");
            }
            e.pre_range = true;
            for (auto q = static_cast<long>(first.number); q <= static_cast<long>(last.number); ++q) {
                e.pre_qubits.push_back(static_cast<int>(q));
                if (e.pre_qubits.size() > kMaxCircuitSize) {
                    fail(merge(first.span, last.span), "qubit range too large");
                }
            }
        } else {
            e.pre_qubits.push_back(static_cast<int>(std::min(first.number, 1e9)));
            while (at(TokenKind::Comma)) {
                take();
                const Token &t = expect(TokenKind::Integer, "a qubit index");
                e.pre_qubits.push_back(static_cast<int>(std::min(t.number, 1e9)));
            }
        }
        e.span = merge(e.span, expect(TokenKind::RBracket, "']'").span);
    }

    ExprPtr matrix_literal() {
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Matrix;
        const Token &open = expect(TokenKind::LBracket, "'['");
        e->span = open.span;
        do {
            if (at(TokenKind::Comma)) {
                take();
            }
            expect(TokenKind::LBracket, "'[' starting a matrix row");
            std::vector<ExprPtr> row;
            row.push_back(expression());
            while (at(TokenKind::Comma)) {
                take();
                row.push_back(expression());
            }
            expect(TokenKind::RBracket, "']' closing a matrix row");
            e->rows.push_back(std::move(row));
        } while (at(TokenKind::Comma));
        e->span = merge(e->span, expect(TokenKind::RBracket, "']' closing the matrix").span);
        return e;
    }

    const std::vector<Token> &toks_;
    std::size_t pos_;
};

// -- printing -------------------------------------------------------------

std::string number_text(double v, bool is_integer) {
    char buf[64];
    if (is_integer) {
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".e") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string qubits_text(const std::vector<QubitArg> &qs, const char *sep) {
    std::string out;
    for (std::size_t k = 0; k < qs.size(); ++k) {
        out += (k ? sep : "") + std::to_string(qs[k].index);
    }
    return out;
}

bool same_qubits(const std::vector<QubitArg> &a, const std::vector<QubitArg> &b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].index != b[k].index) {
            return false;
        }
    }
    return true;
}

bool same_list(const std::vector<ExprPtr> &a, const std::vector<ExprPtr> &b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!same_structure(*a[k], *b[k])) {
            return false;
        }
    }
    return true;
}

bool same_gate(const GateRef &a, const GateRef &b) {
    if (a.modifiers != b.modifiers || a.name != b.name || !same_list(a.params, b.params)) {
        return false;
    }
    if (!a.matrix || !b.matrix) {
        return !a.matrix && !b.matrix;
    }
    return same_structure(*a.matrix, *b.matrix);
}

}  // namespace

ExprPtr parse_expression(const std::vector<Token> &tokens, std::size_t &pos) {
    Parser p(tokens, pos);
    ExprPtr e = p.expression();
    pos = p.position();
    return e;
}

ExprPtr parse_expression(std::string_view src) {
    std::vector<Token> toks = tokenize(src);
    std::size_t pos = 0;
    ExprPtr e = parse_expression(toks, pos);
    while (toks[pos].kind == TokenKind::Newline) {
        ++pos;
    }
    if (toks[pos].kind != TokenKind::End) {
        throw DslError(toks[pos].span, "unexpected " + describe(toks[pos]) + " after expression");
    }
    return e;
}

CircuitFile parse_file(std::string_view src) {
    std::vector<Token> toks = tokenize(src);
    return Parser(toks, 0).file();
}

std::string to_source(const Expr &e) {
    switch (e.kind) {
        case Expr::Kind::Number:
            return number_text(e.value, e.is_integer);
        case Expr::Kind::Imaginary:
            return number_text(e.value, e.is_integer) + "i";
        case Expr::Kind::Pi:
            return "pi";
        case Expr::Kind::Ket:
            return "|" + e.text + ">";
        case Expr::Kind::Name:
            return e.text;
        case Expr::Kind::Call: {
            std::string out = e.text + "(";
            for (std::size_t k = 0; k < e.args.size(); ++k) {
                out += (k ? ", " : "") + to_source(*e.args[k]);
            }
            return out + ")";
        }
        case Expr::Kind::Matrix: {
            std::string out = "[";
            for (std::size_t r = 0; r < e.rows.size(); ++r) {
                out += r ? ", [" : "[";
                for (std::size_t c = 0; c < e.rows[r].size(); ++c) {
                    out += (c ? ", " : "") + to_source(*e.rows[r][c]);
                }
                out += "]";
            }
            return out + "]";
        }
        case Expr::Kind::Pre: {
            if (!e.pre_selected) {
                return "pre";
            }
            if (e.pre_range) {
                return "pre[" + std::to_string(e.pre_qubits.front()) + ".." + std::to_string(e.pre_qubits.back()) + "]";
            }
            std::string out = "pre[";
            for (std::size_t k = 0; k < e.pre_qubits.size(); ++k) {
                out += (k ? ", " : "") + std::to_string(e.pre_qubits[k]);
            }
            return out + "]";
        }
        case Expr::Kind::Negate:
            return "-(" + to_source(*e.args[0]) + ")";
        case Expr::Kind::Adjoint:
            return "~(" + to_source(*e.args[0]) + ")";
        case Expr::Kind::Binary:
            return "(" + to_source(*e.args[0]) + " " + std::string(1, e.op) + " " + to_source(*e.args[1]) + ")";
    }
    return "";
}

std::string to_source(const CircuitFile &f) {
    std::ostringstream ss;
    for (const CircuitDef &c : f.circuits) {
        ss << "circuit " << (c.name.empty() ? "" : c.name + " ") << c.size << "\n";
        for (const Statement &s : c.body) {
            if (const auto *g = std::get_if<GateStmt>(&s)) {
                for (const auto &mod : g->gate.modifiers) {
                    ss << mod << "-";
                }
                ss << g->gate.name;
                if (!g->gate.params.empty()) {
                    ss << "(";
                    for (std::size_t k = 0; k < g->gate.params.size(); ++k) {
                        ss << (k ? ", " : "") << to_source(*g->gate.params[k]);
                    }
                    ss << ")";
                }
                if (g->gate.matrix) {
                    ss << " " << to_source(*g->gate.matrix);
                }
                ss << " " << qubits_text(g->qubits, " ") << "\n";
            } else if (const auto *sub = std::get_if<SubStmt>(&s)) {
                ss << "sub " << sub->name << " " << qubits_text(sub->qubits, " ") << "\n";
            } else {
                const auto &a = std::get<AssertStmt>(s);
                ss << "assert " << a.tag << ": post == " << to_source(*a.expected) << "\n";
            }
        }
    }
    if (f.measure) {
        const MeasureStmt &m = *f.measure;
        ss << "measure " << qubits_text(m.qubits, ", ");
        if (m.shots) {
            ss << " shots " << *m.shots;
        }
        ss << " expect " << m.postprocess;
        if (m.interval) {
            ss << " in [" << to_source(*m.interval->first) << ", " << to_source(*m.interval->second) << "]";
        }
        ss << "\n";
    }
    return ss.str();
}

bool same_structure(const Expr &a, const Expr &b) {
    if (a.kind != b.kind) {
        return false;
    }
    switch (a.kind) {
        case Expr::Kind::Number:
        case Expr::Kind::Imaginary:
            return a.value == b.value && a.is_integer == b.is_integer;
        case Expr::Kind::Pi:
            return true;
        case Expr::Kind::Ket:
        case Expr::Kind::Name:
            return a.text == b.text;
        case Expr::Kind::Call:
            return a.text == b.text && same_list(a.args, b.args);
        case Expr::Kind::Matrix:
            if (a.rows.size() != b.rows.size()) {
                return false;
            }
            for (std::size_t r = 0; r < a.rows.size(); ++r) {
                if (!same_list(a.rows[r], b.rows[r])) {
                    return false;
                }
            }
            return true;
        case Expr::Kind::Pre:
            return a.pre_selected == b.pre_selected && a.pre_range == b.pre_range && a.pre_qubits == b.pre_qubits;
        case Expr::Kind::Negate:
        case Expr::Kind::Adjoint:
            return same_list(a.args, b.args);
        case Expr::Kind::Binary:
            return a.op == b.op && same_list(a.args, b.args);
    }
    return false;
}

bool same_structure(const CircuitFile &a, const CircuitFile &b) {
    if (a.circuits.size() != b.circuits.size() || a.measure.has_value() != b.measure.has_value()) {
        return false;
    }
    for (std::size_t k = 0; k < a.circuits.size(); ++k) {
        const CircuitDef &ca = a.circuits[k];
        const CircuitDef &cb = b.circuits[k];
        if (ca.name != cb.name || ca.size != cb.size || ca.body.size() != cb.body.size()) {
            return false;
        }
        for (std::size_t s = 0; s < ca.body.size(); ++s) {
            if (ca.body[s].index() != cb.body[s].index()) {
                return false;
            }
            if (const auto *g = std::get_if<GateStmt>(&ca.body[s])) {
                const auto &h = std::get<GateStmt>(cb.body[s]);
                if (!same_gate(g->gate, h.gate) || !same_qubits(g->qubits, h.qubits)) {
                    return false;
                }
            } else if (const auto *sa = std::get_if<SubStmt>(&ca.body[s])) {
                const auto &sb = std::get<SubStmt>(cb.body[s]);
                if (sa->name != sb.name || !same_qubits(sa->qubits, sb.qubits)) {
                    return false;
                }
            } else {
                const auto &x = std::get<AssertStmt>(ca.body[s]);
                const auto &y = std::get<AssertStmt>(cb.body[s]);
                if (x.tag != y.tag || !same_structure(*x.expected, *y.expected)) {
                    return false;
                }
            }
        }
    }
    if (a.measure) {
        const MeasureStmt &x = *a.measure;
        const MeasureStmt &y = *b.measure;
        if (!same_qubits(x.qubits, y.qubits) || x.shots != y.shots || x.postprocess != y.postprocess ||
            x.interval.has_value() != y.interval.has_value()) {
            return false;
        }
        if (x.interval && (!same_structure(*x.interval->first, *y.interval->first) ||
                           !same_structure(*x.interval->second, *y.interval->second))) {
            return false;
        }
    }
    return true;
}

}  // namespace qcontract::dsl
