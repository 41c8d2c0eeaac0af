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
#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "qcontract/dsl.hpp"

namespace qcontract::dsl {

SourceSpan merge(const SourceSpan &a, const SourceSpan &b) {
    if (a.line != b.line) {
        return a.line < b.line ? a : b;
    }
    return {a.line, std::min(a.col_start, b.col_start), std::max(a.col_end, b.col_end)};
}

namespace {
std::string format_error(const SourceSpan &span, const std::string &message) {
    std::ostringstream ss;
    ss << span.line << ":" << span.col_start << ": " << message;
    return ss.str();
}
}  // namespace

DslError::DslError(SourceSpan span, const std::string &message)
    : Error(format_error(span, message)), span_(span), message_(message) {}

const char *token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Identifier:
            return "identifier";
        case TokenKind::Keyword:
            return "keyword";
        case TokenKind::Integer:
            return "integer";
        case TokenKind::Real:
            return "real";
        case TokenKind::Imaginary:
            return "imaginary literal";
        case TokenKind::Pi:
            return "'pi'";
        case TokenKind::Ket:
            return "ket";
        case TokenKind::Plus:
            return "'+'";
        case TokenKind::Minus:
            return "'-'";
        case TokenKind::Star:
            return "'*'";
        case TokenKind::Slash:
            return "'/'";
        case TokenKind::At:
            return "'@'";
        case TokenKind::Tilde:
            return "'~'";
        case TokenKind::Caret:
            return "'^'";
        case TokenKind::LParen:
            return "'('";
        case TokenKind::RParen:
            return "')'";
        case TokenKind::LBracket:
            return "'['";
        case TokenKind::RBracket:
            return "']'";
        case TokenKind::Comma:
            return "','";
        case TokenKind::Colon:
            return "':'";
        case TokenKind::EqualEqual:
            return "'=='";
        case TokenKind::DotDot:
            return "'..'";
        case TokenKind::Newline:
            return "end of line";
        case TokenKind::End:
            return "end of file";
    }
    return "token";
}

namespace {

constexpr std::array<std::string_view, 8> kKeywords = {"circuit", "sub",  "assert", "measure",
                                                       "shots",   "post", "pre",    "expect"};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
   public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    advance();
                }
            } else if (c == '\n') {
                out.push_back(make(TokenKind::Newline, "\n", col_, col_));
                advance();
                ++line_;
                col_ = 1;
            } else if (is_digit(c) || (c == '.' && peek_digit(1))) {
                out.push_back(number());
            } else if (is_ident_start(c)) {
                out.push_back(identifier());
            } else if (c == '|') {
                out.push_back(ket());
            } else {
                out.push_back(punct());
            }
        }
        out.push_back(make(TokenKind::End, "", col_, col_));
        return out;
    }

   private:
    Token make(TokenKind kind, std::string text, int start, int end) const {
        Token t{kind, std::move(text), 0.0, {line_, start, end}};
        return t;
    }

    // Columns count code points: UTF-8 continuation bytes do not advance them.
    void advance() {
        ++pos_;
        if (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) {
            return;
        }
        ++col_;
    }

    bool peek_digit(std::size_t ahead) const {
        return pos_ + ahead < src_.size() && is_digit(src_[pos_ + ahead]);
    }

    [[noreturn]] void fail(int start, int end, const std::string &msg) const {
        throw DslError({line_, start, std::max(start, end)}, msg);
    }

    Token number() {
        const int start = col_;
        const std::size_t begin = pos_;
        bool real = false;
        while (pos_ < src_.size() && is_digit(src_[pos_])) {
            advance();
        }
        if (pos_ < src_.size() && src_[pos_] == '.' && peek_digit(1)) {
            real = true;
            advance();
            while (pos_ < src_.size() && is_digit(src_[pos_])) {
                advance();
            }
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) {
                ++look;
            }
            if (look < src_.size() && is_digit(src_[look])) {
                real = true;
                while (pos_ < look) {
                    advance();
                }
                while (pos_ < src_.size() && is_digit(src_[pos_])) {
                    advance();
                }
            }
        }
        std::string text(src_.substr(begin, pos_ - begin));
        double value = std::strtod(text.c_str(), nullptr);
        TokenKind kind = real ? TokenKind::Real : TokenKind::Integer;
        if (pos_ < src_.size() && src_[pos_] == 'i' && !(pos_ + 1 < src_.size() && is_ident_char(src_[pos_ + 1]))) {
            advance();
            kind = TokenKind::Imaginary;
            text += "i";
        } else if (pos_ < src_.size() && is_ident_char(src_[pos_])) {
            const int bad = col_;
            fail(start, bad, "malformed number '" + text + std::string(1, src_[pos_]) + "'");
        }
        if (kind == TokenKind::Integer && text.size() > 18) {
            fail(start, col_ - 1, "integer literal too large");
        }
        Token t = make(kind, text, start, col_ - 1);
        t.number = value;
        return t;
    }

    Token identifier() {
        const int start = col_;
        const std::size_t begin = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) {
            advance();
        }
        std::string text(src_.substr(begin, pos_ - begin));
        TokenKind kind = TokenKind::Identifier;
        if (text == "pi") {
            kind = TokenKind::Pi;
        } else if (std::find(kKeywords.begin(), kKeywords.end(), text) != kKeywords.end()) {
            kind = TokenKind::Keyword;
        }
        return make(kind, std::move(text), start, col_ - 1);
    }

    Token ket() {
        const int start = col_;
        advance();  // '|'
        std::string labels;
        while (pos_ < src_.size() && src_[pos_] != '>') {
            const char c = src_[pos_];
            if (c == '\n') {
                fail(start, col_ - 1, "unterminated ket");
            }
            if (c != '0' && c != '1' && c != '+' && c != '-') {
                fail(col_, col_, std::string("invalid ket label '") + c + "' (expected 0, 1, + or -)");
            }
            labels.push_back(c);
            advance();
        }
        if (pos_ >= src_.size()) {
            fail(start, col_ - 1, "unterminated ket");
        }
        advance();  // '>'
        if (labels.empty()) {
            fail(start, col_ - 1, "empty ket");
        }
        return make(TokenKind::Ket, std::move(labels), start, col_ - 1);
    }

    Token punct() {
        const int start = col_;
        const char c = src_[pos_];
        auto single = [&](TokenKind k) {
            advance();
            return make(k, std::string(1, c), start, start);
        };
        switch (c) {
            case '+':
                return single(TokenKind::Plus);
            case '-':
                return single(TokenKind::Minus);
            case '*':
                return single(TokenKind::Star);
            case '/':
                return single(TokenKind::Slash);
            case '@':
                return single(TokenKind::At);
            case '~':
                return single(TokenKind::Tilde);
            case '^':
                return single(TokenKind::Caret);
            case '(':
                return single(TokenKind::LParen);
            case ')':
                return single(TokenKind::RParen);
            case '[':
                return single(TokenKind::LBracket);
            case ']':
                return single(TokenKind::RBracket);
            case ',':
                return single(TokenKind::Comma);
            case ':':
                return single(TokenKind::Colon);
            default:
                break;
        }
        if (c == '=' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
            advance();
            advance();
            return make(TokenKind::EqualEqual, "==", start, start + 1);
        }
        if (c == '.' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '.') {
            advance();
            advance();
            return make(TokenKind::DotDot, "..", start, start + 1);
        }
        if (static_cast<unsigned char>(c) >= 0x80) {
            fail(start, start, "unexpected non-ASCII character");
        }
        fail(start, start, std::string("unexpected character '") + c + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view src) { return Lexer(src).run(); }

}  // namespace qcontract::dsl
