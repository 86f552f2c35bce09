#ifndef MOST_PARSER_HPP
#define MOST_PARSER_HPP

#include <string_view>

#include "most/syntax.hpp"

namespace most {

// Parses a `.most` source file. Abbreviations are expanded eagerly, every
// binder is renamed apart, and the grammar side conditions are enforced.
// Throws ParseError / ScopeError / WfError with positions.
Program parse_program(std::string_view source);

// Parses into an existing program (shares the name table); used by tests.
void parse_into(Program& prog, std::string_view source);

}  // namespace most

#endif
