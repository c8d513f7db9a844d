#include "flatline/parser.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <vector>

namespace flatline {

ParseError::ParseError(int line, int column, std::string expected, std::string found)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": expected " + expected + ", found " + found),
      line_(line), column_(column), expected_(std::move(expected)), found_(std::move(found))
{
}

namespace {

enum class Tok
{
    Ident,
    Keyword,
    Int,
    Symbol,
    End,
};

struct Token
{
    Tok kind;
    std::string text;
    int line;
    int column;
};

const char* const kKeywords[] = {"skip", "if",    "then",   "else",   "end",    "while", "do", "or",
                                 "not",  "true",  "false",  "secret", "public", "switch", "case"};

bool is_keyword(std::string_view w)
{
    for (const char* k : kKeywords)
        if (w == k)
            return true;
    return false;
}

std::vector<Token> lex(std::string_view src)
{
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char ch = src[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            advance(1);
            continue;
        }
        if (ch == '#') {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        int tl = line;
        int tc = col;
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            std::string word(src.substr(i, j - i));
            out.push_back({is_keyword(word) ? Tok::Keyword : Tok::Ident, word, tl, tc});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            out.push_back({Tok::Int, std::string(src.substr(i, j - i)), tl, tc});
            advance(j - i);
            continue;
        }
        std::string_view rest = src.substr(i);
        std::string sym;
        for (std::string_view two : {":=", "<=", "=="})
            if (rest.starts_with(two))
                sym = std::string(two);
        if (sym.empty()) {
            if (std::string_view("+-*/%;:(),=").find(ch) == std::string_view::npos)
                throw ParseError(tl, tc, "a token", std::string("'") + ch + "'");
            sym = std::string(1, ch);
        }
        out.push_back({Tok::Symbol, sym, tl, tc});
        advance(sym.size());
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser
{
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program program()
    {
        Program p;
        while (peek_keyword("secret") || peek_keyword("public")) {
            bool secret = next().text == "secret";
            do {
                auto name = expect_ident();
                auto& into = secret ? p.secrets : p.publics;
                auto& other = secret ? p.publics : p.secrets;
                if (other.contains(name))
                    fail_at(toks_[pos_ - 1], "a variable not declared both secret and public");
                into.insert(name);
            } while (accept(","));
            expect(";");
        }
        p.body = cmd();
        if (cur().kind != Tok::End)
            fail("end of input");
        p.dialect = contains_switch(*p.body) ? Dialect::Target : Dialect::Source;
        return p;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& cur() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    static std::string describe(const Token& t)
    {
        switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::Ident: return "identifier '" + t.text + "'";
        case Tok::Int: return "integer " + t.text;
        default: return "'" + t.text + "'";
        }
    }

    [[noreturn]] void fail_at(const Token& t, const std::string& expected) const
    {
        throw ParseError(t.line, t.column, expected, describe(t));
    }
    [[noreturn]] void fail(const std::string& expected) const { fail_at(cur(), expected); }

    bool peek_keyword(std::string_view kw) const { return cur().kind == Tok::Keyword && cur().text == kw; }
    bool peek_symbol(std::string_view s) const { return cur().kind == Tok::Symbol && cur().text == s; }

    bool accept(std::string_view s)
    {
        if (peek_symbol(s) || peek_keyword(s)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(std::string_view s)
    {
        if (!accept(s))
            fail("'" + std::string(s) + "'");
    }

    std::string expect_ident()
    {
        if (cur().kind != Tok::Ident)
            fail("identifier");
        return next().text;
    }

    Value expect_int(bool negative)
    {
        if (cur().kind != Tok::Int)
            fail("integer");
        const Token& t = next();
        std::string digits = (negative ? "-" : "") + t.text;
        Value v{};
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (ec != std::errc() || ptr != digits.data() + digits.size())
            fail_at(t, "a 64-bit integer");
        return v;
    }

    CmdPtr cmd()
    {
        auto first = simple();
        if (accept(";"))
            return seq(first, cmd());
        return first;
    }

    CmdPtr simple()
    {
        if (accept("skip"))
            return skip();
        if (accept("if")) {
            auto b = bexpr();
            expect("then");
            auto t = cmd();
            expect("else");
            auto e = cmd();
            expect("end");
            return if_(b, t, e);
        }
        if (accept("while")) {
            auto b = bexpr();
            expect("do");
            auto body = cmd();
            expect("end");
            return while_(b, body);
        }
        if (accept("switch")) {
            auto scrutinee = aexpr();
            expect(":");
            CaseList cases;
            while (peek_keyword("case")) {
                const Token& at = next();
                bool neg = accept("-");
                Value guard = expect_int(neg);
                if (!cases.empty() && guard <= cases.back().guard)
                    fail_at(at, "case guards in strictly increasing order");
                expect(":");
                cases.push_back({guard, cmd()});
            }
            expect("end");
            return switch_(scrutinee, std::move(cases));
        }
        if (accept("(")) {
            auto inner = cmd();
            expect(")");
            return inner;
        }
        if (cur().kind == Tok::Ident) {
            auto name = next().text;
            expect(":=");
            return assign(name, aexpr());
        }
        fail("a command");
    }

    BExprPtr bexpr()
    {
        auto lhs = bnot();
        while (accept("or"))
            lhs = lor(lhs, bnot());
        return lhs;
    }

    BExprPtr bnot()
    {
        if (accept("not"))
            return lnot(bnot());
        if (accept("true"))
            return boolean(true);
        if (accept("false"))
            return boolean(false);
        if (peek_symbol("(")) {
            // Either a parenthesised boolean or a comparison whose left operand
            // starts with a parenthesis: try the comparison first.
            std::size_t save = pos_;
            std::optional<ParseError> first_error;
            try {
                return comparison();
            } catch (const ParseError& e) {
                first_error = e;
            }
            pos_ = save;
            try {
                expect("(");
                auto inner = bexpr();
                expect(")");
                return inner;
            } catch (const ParseError& e) {
                // Report whichever attempt got further.
                if (e.line() > first_error->line() ||
                    (e.line() == first_error->line() && e.column() >= first_error->column()))
                    throw;
                throw *first_error;
            }
        }
        return comparison();
    }

    BExprPtr comparison()
    {
        auto lhs = aexpr();
        if (accept("<="))
            return leq(lhs, aexpr());
        if (accept("=="))
            return eq(lhs, aexpr());
        fail("'<=' or '=='");
    }

    AExprPtr aexpr()
    {
        auto lhs = term();
        while (true) {
            if (accept("+"))
                lhs = arith(ArithOp::Add, lhs, term());
            else if (accept("-"))
                lhs = arith(ArithOp::Sub, lhs, term());
            else
                return lhs;
        }
    }

    AExprPtr term()
    {
        auto lhs = factor();
        while (true) {
            if (accept("*"))
                lhs = arith(ArithOp::Mul, lhs, factor());
            else if (accept("/"))
                lhs = arith(ArithOp::Div, lhs, factor());
            else if (accept("%"))
                lhs = arith(ArithOp::Mod, lhs, factor());
            else
                return lhs;
        }
    }

    AExprPtr factor()
    {
        if (cur().kind == Tok::Int)
            return lit(expect_int(false));
        if (accept("-"))
            return lit(expect_int(true));
        if (cur().kind == Tok::Ident)
            return var(next().text);
        if (accept("(")) {
            auto inner = aexpr();
            expect(")");
            return inner;
        }
        fail("an arithmetic expression");
    }
};

} // namespace

Program parse_program(std::string_view text)
{
    Parser parser(lex(text));
    return parser.program();
}

Store parse_store(std::string_view text)
{
    Store out;
    auto toks = lex(text);
    std::size_t i = 0;
    auto fail = [&](const std::string& expected) -> void {
        const Token& t = toks[i];
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(t.line, t.column, expected, found);
    };
    if (toks[0].kind == Tok::End)
        return out;
    while (true) {
        if (toks[i].kind != Tok::Ident)
            fail("variable name");
        const Token& name = toks[i++];
        if (!(toks[i].kind == Tok::Symbol && toks[i].text == "="))
            fail("'='");
        ++i;
        bool neg = false;
        if (toks[i].kind == Tok::Symbol && toks[i].text == "-") {
            neg = true;
            ++i;
        }
        if (toks[i].kind != Tok::Int)
            fail("integer");
        std::string digits = (neg ? "-" : "") + toks[i].text;
        Value v{};
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (ec != std::errc() || ptr != digits.data() + digits.size())
            fail("a 64-bit integer");
        ++i;
        if (out.contains(name.text))
            throw ParseError(name.line, name.column, "distinct bindings", "duplicate binding of '" + name.text + "'");
        out.emplace(name.text, v);
        if (toks[i].kind == Tok::End)
            return out;
        if (!(toks[i].kind == Tok::Symbol && toks[i].text == ","))
            fail("',' or end of input");
        ++i;
    }
}

} // namespace flatline
