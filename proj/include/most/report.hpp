#ifndef MOST_REPORT_HPP
#define MOST_REPORT_HPP

#include <string>

#include "most/syntax.hpp"

namespace most {

// Exit codes: 0 all pass, 1 check/verify failure, 2 usage or parse error.
struct Report {
  int exit_code = 0;
  std::string text;  // human-readable; includes timing
  std::string json;  // stable machine-readable form; empty unless requested
};

struct CliOptions {
  bool json = false;
  bool derivation = false;
  size_t limit = 0;
  bool parallel = false;
};

Report cmd_check(Program& prog, const CliOptions& opts);
Report cmd_traces(Program& prog, const std::string& proc, const CliOptions& opts);
Report cmd_spec_traces(Program& prog, const std::string& proc, const CliOptions& opts);
Report cmd_verify(Program& prog, const CliOptions& opts);

}  // namespace most

#endif
