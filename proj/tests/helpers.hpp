#pragma once

#include "flatline/ast.hpp"
#include "flatline/parser.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace testing {

inline flatline::Program prog(const std::string& text) { return flatline::assign_colors(flatline::parse_program(text)); }

inline flatline::CmdPtr cmd(const std::string& text) { return prog(text).body; }

inline std::string corpus_text(const std::string& name)
{
    std::ifstream in(std::string(FLATLINE_CORPUS) + "/" + name);
    if (!in)
        throw flatline::Error("missing corpus file " + name);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline flatline::Program corpus(const std::string& name) { return prog(corpus_text(name)); }

} // namespace testing
