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
 * @file dsl.hpp
 * The `.qc` circuit-with-contracts format: tokenizer, recursive-descent
 * parser, pretty-printer and elaboration into ContractCircuit /
 * MeasuredCircuit. The grammar is documented in docs/qc_format.md.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qcontract/algorithms.hpp"
#include "qcontract/contracts.hpp"
#include "qcontract/errors.hpp"
#include "qcontract/expressions.hpp"

namespace qcontract::dsl {

/// 1-based line and columns; col_end is inclusive.
struct SourceSpan {
    int line = 1;
    int col_start = 1;
    int col_end = 1;

    bool operator==(const SourceSpan &) const = default;
};

SourceSpan merge(const SourceSpan &a, const SourceSpan &b);

/// Lexical, syntax or elaboration error; what() is "line:col: message".
class DslError : public Error {
   public:
    DslError(SourceSpan span, const std::string &message);
    const SourceSpan &span() const { return span_; }
    const std::string &message() const { return message_; }

   private:
    SourceSpan span_;
    std::string message_;
};

// ---------------------------------------------------------------------------
// Tokens

enum class TokenKind {
    Identifier,
    Keyword,  // circuit sub assert measure shots post pre expect
    Integer,
    Real,
    Imaginary,  // 3i, 0.5i
    Pi,
    Ket,  // text holds the labels
    Plus,
    Minus,
    Star,
    Slash,
    At,
    Tilde,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    EqualEqual,
    DotDot,
    Newline,
    End,
};

const char *token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind;
    std::string text;
    double number = 0.0;
    SourceSpan span;
};

std::vector<Token> tokenize(std::string_view src);

// ---------------------------------------------------------------------------
// AST

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind {
        Number,     // value, is_integer
        Imaginary,  // value * i
        Pi,
        Ket,     // text = labels
        Name,    // text = identifier (state, gate, scalar function or i)
        Call,    // text = name, args
        Matrix,  // rows
        Pre,     // pre_qubits; pre_range marks the a..b form
        Negate,
        Adjoint,
        Binary,  // op in + - * / @ ^, args = {lhs, rhs}
    };
    Kind kind;
    SourceSpan span;
    double value = 0.0;
    bool is_integer = false;
    std::string text;
    char op = 0;
    std::vector<ExprPtr> args;
    std::vector<std::vector<ExprPtr>> rows;
    std::vector<int> pre_qubits;
    bool pre_range = false;
    bool pre_selected = false;
};

struct GateRef {
    std::vector<std::string> modifiers;  // "controlled" / "adjoint", outermost first
    std::string name;
    std::vector<ExprPtr> params;
    ExprPtr matrix;  // only for the "matrix" gate
    SourceSpan span;
};

struct QubitArg {
    int index;
    SourceSpan span;
};

struct GateStmt {
    GateRef gate;
    std::vector<QubitArg> qubits;
    SourceSpan span;
};

struct SubStmt {
    std::string name;
    SourceSpan name_span;
    std::vector<QubitArg> qubits;
    SourceSpan span;
};

struct AssertStmt {
    std::string tag;
    ExprPtr expected;
    SourceSpan span;
};

using Statement = std::variant<GateStmt, SubStmt, AssertStmt>;

struct CircuitDef {
    std::string name;  // empty only for the final (main) circuit
    int size = 0;
    std::vector<Statement> body;
    SourceSpan span;
};

struct MeasureStmt {
    std::vector<QubitArg> qubits;
    std::optional<std::uint64_t> shots;
    std::string postprocess = "raw";  // real_expectation | phase | raw
    SourceSpan postprocess_span;
    std::optional<std::pair<ExprPtr, ExprPtr>> interval;
    SourceSpan span;
};

struct CircuitFile {
    /// Sub-circuit definitions first; the last entry is the main circuit.
    std::vector<CircuitDef> circuits;
    std::optional<MeasureStmt> measure;

    const CircuitDef &main() const { return circuits.back(); }
    int num_qubits() const { return main().size; }
};

/// Parses one expression from the token range [pos, end); pos is advanced.
ExprPtr parse_expression(const std::vector<Token> &tokens, std::size_t &pos);
ExprPtr parse_expression(std::string_view src);

CircuitFile parse_file(std::string_view src);

std::string to_source(const Expr &e);
std::string to_source(const CircuitFile &f);

/// Structural equality, ignoring source spans.
bool same_structure(const Expr &a, const Expr &b);
bool same_structure(const CircuitFile &a, const CircuitFile &b);

// ---------------------------------------------------------------------------
// Elaboration

/// Value of an expression: scalar, ket, operator or bra (~ket).
struct Bra {
    StateExpr ket;
};
using ExprValue = std::variant<Complex, StateExpr, OperatorExpr, Bra>;

/// Evaluates an expression. `pre` binds the `pre` keyword; without it, `pre`
/// is an error.
ExprValue evaluate(const Expr &e, const std::optional<StateVector> &pre = std::nullopt);

/// Parses and evaluates src, requiring a ket.
StateExpr parse_state_expr(std::string_view src, const std::optional<StateVector> &pre = std::nullopt);

using DslValue = std::variant<double, PhaseEstimate, Counts>;

struct ElaborateOptions {
    double eq_tolerance = 1e-8;
};

struct Program {
    ContractCircuit circuit;
    std::optional<MeasuredCircuit<DslValue>> measured;
    std::optional<std::uint64_t> shots;  // as declared in the file
};

Program elaborate(const CircuitFile &f, const ElaborateOptions &options = {});

std::string format_value(const DslValue &v);

}  // namespace qcontract::dsl
