#ifndef MOST_DENOTE_HPP
#define MOST_DENOTE_HPP

#include "most/syntax.hpp"
#include "most/trace.hpp"

namespace most {

// Trace denotation of a process. Total on well-formed processes; every
// returned trace carries only observable signs.
TraceSet denote(const ProcP& p, NameTable& names, size_t limit = 0);

struct UnknownName : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TraceSet denote_decl(Program& prog, const std::string& name, size_t limit = 0);

}  // namespace most

#endif
