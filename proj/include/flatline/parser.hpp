/// @file parser.hpp
/// @brief Concrete syntax front-end (`.imp` files).
///
/// Grammar:
/// ```ebnf
/// program  = { decl } cmd ;
/// decl     = ( "secret" | "public" ) ident { "," ident } ";" ;
/// cmd      = simple [ ";" cmd ] ;                     (* right-associative *)
/// simple   = "skip" | ident ":=" aexpr
///          | "if" bexpr "then" cmd "else" cmd "end"
///          | "while" bexpr "do" cmd "end"
///          | "switch" aexpr ":" { "case" int ":" cmd } "end"
///          | "(" cmd ")" ;
/// bexpr    = bnot { "or" bnot } ;
/// bnot     = "not" bnot | "true" | "false" | aexpr ( "<=" | "==" ) aexpr
///          | "(" bexpr ")" ;
/// aexpr    = term { ( "+" | "-" ) term } ;
/// term     = factor { ( "*" | "/" | "%" ) factor } ;
/// factor   = int | "-" int | ident | "(" aexpr ")" ;
/// ```
/// `#` starts a comment that runs to the end of the line.

#pragma once

#include "flatline/ast.hpp"
#include "flatline/semantics.hpp"

#include <string>
#include <string_view>

namespace flatline {

class ParseError : public Error
{
public:
    ParseError(int line, int column, std::string expected, std::string found);

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    int line_;
    int column_;
    std::string expected_;
    std::string found_;
};

/// Parses a whole program. The result is uncolored; the dialect is Target
/// iff the text uses `switch`.
Program parse_program(std::string_view text);

/// Parses comma-separated `name=int` bindings. Empty text is the empty store.
Store parse_store(std::string_view text);

} // namespace flatline
