#pragma once

// Internal tokenizer shared by the rule parser and the assertion parser.

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "achieve/assertion.hpp"
#include "achieve/error.hpp"

namespace achieve::detail {

inline bool cmpOpFromText(const std::string& s, CmpOp& out) {
    if (s == "=") out = CmpOp::Eq;
    else if (s == "!=") out = CmpOp::Ne;
    else if (s == "<") out = CmpOp::Lt;
    else if (s == "<=") out = CmpOp::Le;
    else if (s == ">") out = CmpOp::Gt;
    else if (s == ">=") out = CmpOp::Ge;
    else return false;
    return true;
}

enum class Tok { End, Int, Ident, UIdent, Punct, Annotation };

struct Token {
    Tok type = Tok::End;
    std::string text;
    std::int64_t ival = 0;
    int line = 1;
    int col = 1;
};

inline bool isIdentChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Tokenizes the whole input. "%@..." lines become Annotation tokens carrying
// the text after "%@"; plain "%..." comments are skipped.
inline std::vector<Token> lex(const std::string& text, const std::string& file) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto here = [&](std::string what) {
        return ParseError(std::move(what), SourceSpan{file, line, col});
    };
    while (i < n) {
        char c = text[i];
        if (c == '\n') {
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            ++col;
            continue;
        }
        if (c == '%') {
            bool ann = i + 1 < n && text[i + 1] == '@';
            Token t{Tok::Annotation, "", 0, line, col};
            i += ann ? 2 : 1;
            col += ann ? 2 : 1;
            std::size_t start = i;
            while (i < n && text[i] != '\n') {
                ++i;
                ++col;
            }
            if (ann) {
                std::string payload = text.substr(start, i - start);
                std::size_t a = payload.find_first_not_of(" \t\r");
                std::size_t b = payload.find_last_not_of(" \t\r");
                t.text = a == std::string::npos ? "" : payload.substr(a, b - a + 1);
                out.push_back(std::move(t));
            }
            continue;
        }
        Token t{Tok::Punct, "", 0, line, col};
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
                ++i;
                ++col;
            }
            t.type = Tok::Int;
            t.text = text.substr(start, i - start);
            try {
                t.ival = std::stoll(t.text);
            } catch (const std::exception&) {
                throw here("integer literal out of range: " + t.text);
            }
            out.push_back(std::move(t));
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < n && isIdentChar(text[i])) {
                ++i;
                ++col;
            }
            t.type = std::islower(static_cast<unsigned char>(c)) ? Tok::Ident : Tok::UIdent;
            t.text = text.substr(start, i - start);
            out.push_back(std::move(t));
            continue;
        }
        auto two = [&](const char* op) {
            return i + 1 < n && text[i] == op[0] && text[i + 1] == op[1];
        };
        if (two(":-") || two("..") || two("!=") || two("<=") || two(">=")) {
            t.text = text.substr(i, 2);
            i += 2;
            col += 2;
            out.push_back(std::move(t));
            continue;
        }
        if (c == '#') {
            std::size_t start = i;
            ++i;
            ++col;
            while (i < n && isIdentChar(text[i])) {
                ++i;
                ++col;
            }
            if (i == start + 1) throw here("stray '#'");
            t.text = text.substr(start, i - start);
            out.push_back(std::move(t));
            continue;
        }
        if (std::string(".,;:(){}=<>+-*/|!").find(c) != std::string::npos) {
            t.text = std::string(1, c);
            ++i;
            ++col;
            out.push_back(std::move(t));
            continue;
        }
        throw here(std::string("unexpected character '") + c + "'");
    }
    out.push_back(Token{Tok::End, "", 0, line, col});
    return out;
}

// Cursor over a token vector with common expect/accept helpers.
class Cursor {
public:
    Cursor(std::vector<Token> toks, std::string file)
        : toks_(std::move(toks)), file_(std::move(file)) {}

    const Token& peek(int ahead = 0) const {
        std::size_t j = pos_ + static_cast<std::size_t>(ahead);
        return j < toks_.size() ? toks_[j] : toks_.back();
    }
    const Token& next() {
        const Token& t = peek();
        if (t.type != Tok::End) ++pos_;
        return t;
    }
    bool atEnd() const { return peek().type == Tok::End; }
    std::size_t save() const { return pos_; }
    void restore(std::size_t p) { pos_ = p; }

    bool isPunct(const std::string& s, int ahead = 0) const {
        const Token& t = peek(ahead);
        return t.type == Tok::Punct && t.text == s;
    }
    bool acceptPunct(const std::string& s) {
        if (!isPunct(s)) return false;
        ++pos_;
        return true;
    }
    void expectPunct(const std::string& s, const std::string& what) {
        if (!acceptPunct(s)) fail("expected '" + s + "' " + what);
    }
    bool isIdent(const std::string& s, int ahead = 0) const {
        const Token& t = peek(ahead);
        return t.type == Tok::Ident && t.text == s;
    }
    bool acceptIdent(const std::string& s) {
        if (!isIdent(s)) return false;
        ++pos_;
        return true;
    }
    SourceSpan span() const { return SourceSpan{file_, peek().line, peek().col}; }
    [[noreturn]] void fail(const std::string& msg) const {
        std::string got = peek().type == Tok::End ? "end of input" : "'" + peek().text + "'";
        throw ParseError(msg + ", got " + got, span());
    }
    const std::string& file() const { return file_; }

private:
    std::vector<Token> toks_;
    std::string file_;
    std::size_t pos_ = 0;
};

// Assertion sub-parser entry used by the program parser for %@ payloads.
Assertion parseAssertionTokens(Cursor& c);

} // namespace achieve::detail
