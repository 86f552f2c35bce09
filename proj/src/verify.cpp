#include "most/verify.hpp"

#include "most/denote.hpp"
#include "most/typesem.hpp"

namespace most {

VerifyResult verify_decl(const Decl& d, NameTable& names, size_t limit) {
  VerifyResult out;
  CheckOutcome res = check_decl(d, names, CheckOptions{false, limit, false});
  if (auto* err = std::get_if<CheckError>(&res)) {
    out.check_error = *err;
    return out;
  }
  out.checked = true;
  const TraceSet& constraints = std::get<CheckResult>(res).constraints;
  out.constraint_count = constraints.size();

  TraceSet erased = erase_constraints(constraints);
  TraceSet denotation = denote(d.body, names, limit);
  out.erasure_matches = set_eq(erased, denotation);
  if (!out.erasure_matches) {
    for (auto& t : erased)
      if (!denotation.count(t))
        out.counterexamples.push_back("extra execution: " + trace_text(t, names));
    for (auto& t : denotation)
      if (!erased.count(t))
        out.counterexamples.push_back("missing execution: " + trace_text(t, names));
  }

  out.members_ok = true;
  for (auto& t : constraints) {
    if (!spec_member(t, d.spec, names)) {
      out.members_ok = false;
      out.counterexamples.push_back("not permitted by the specification: " +
                                    trace_text(t, names));
    }
  }
  return out;
}

std::map<std::string, VerifyResult> verify_program(Program& prog, size_t limit) {
  std::map<std::string, VerifyResult> out;
  for (auto& d : prog.decls) out.emplace(d.name, verify_decl(d, prog.names, limit));
  return out;
}

}  // namespace most
