#include <CLI11.hpp>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "most/denote.hpp"
#include "most/parser.hpp"
#include "most/report.hpp"
#include "most/trace.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool use_color() {
  const char* v = std::getenv("MOST_COLOR");
  if (v && std::string(v) == "never") return false;
  return isatty(2);
}

void print_error(const std::string& kind, const std::string& msg, most::Pos pos) {
  bool color = use_color();
  std::cerr << (color ? "\x1b[31m" : "") << kind << (color ? "\x1b[0m" : "");
  if (pos.line) std::cerr << " at line " << pos.line << ", column " << pos.col;
  std::cerr << ": " << msg << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"most - a typechecker for message-observing session types"};
  app.require_subcommand(1);

  std::string file, proc;
  most::CliOptions opts;

  auto add_common = [&](CLI::App* cmd, bool with_proc) {
    cmd->add_option("file", file, "a .most source file")->required();
    if (with_proc) cmd->add_option("--proc", proc, "declaration name")->required();
    cmd->add_flag("--json", opts.json, "emit machine-readable JSON");
    cmd->add_option("--limit", opts.limit, "bound trace-set sizes");
  };

  CLI::App* check = app.add_subcommand("check", "typecheck every declaration");
  add_common(check, false);
  check->add_flag("--derivation", opts.derivation, "record the typing derivation");
  check->add_flag("--parallel", opts.parallel, "check declarations in parallel");

  CLI::App* traces = app.add_subcommand("traces", "print a process's trace denotation");
  add_common(traces, true);

  CLI::App* spec_traces =
      app.add_subcommand("spec-traces", "enumerate the traces a specification permits");
  add_common(spec_traces, true);

  CLI::App* verify =
      app.add_subcommand("verify", "typecheck and machine-check the soundness theorem");
  add_common(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    most::Program prog = most::parse_program(read_file(file));
    most::Report rep;
    if (check->parsed()) rep = most::cmd_check(prog, opts);
    if (traces->parsed()) rep = most::cmd_traces(prog, proc, opts);
    if (spec_traces->parsed()) rep = most::cmd_spec_traces(prog, proc, opts);
    if (verify->parsed()) rep = most::cmd_verify(prog, opts);
    if (opts.json)
      std::cout << rep.json;
    else
      std::cout << rep.text;
    return rep.exit_code;
  } catch (const most::ParseError& e) {
    print_error("parse error", e.what(), e.pos);
    return 2;
  } catch (const most::ScopeError& e) {
    print_error("scope error", e.what(), e.pos);
    return 2;
  } catch (const most::WfError& e) {
    print_error("well-formedness error", e.what(), e.pos);
    return 2;
  } catch (const most::UnknownName& e) {
    print_error("usage error", e.what(), most::Pos{});
    return 2;
  } catch (const most::ResourceLimit& e) {
    print_error("resource limit", e.what(), most::Pos{});
    return 1;
  } catch (const std::exception& e) {
    print_error("error", e.what(), most::Pos{});
    return 2;
  }
}
