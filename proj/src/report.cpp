#include "most/report.hpp"

#include <chrono>
#include <json.hpp>
#include <sstream>

#include "most/check.hpp"
#include "most/denote.hpp"
#include "most/typesem.hpp"
#include "most/verify.hpp"

namespace most {

namespace {

using nlohmann::json;

double ms_since(std::chrono::steady_clock::time_point start) {
  auto d = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double, std::milli>(d).count();
}

json trace_json(const Trace& t, const NameTable& names) {
  json arr = json::array();
  for (auto& e : t.elems) {
    json el;
    switch (e.sign) {
      case Sign::Out: el["sign"] = "O"; break;
      case Sign::In: el["sign"] = "I"; break;
      case Sign::Sync: el["sign"] = "S"; break;
      case Sign::Constr: el["sign"] = "C"; break;
    }
    switch (e.msg) {
      case MsgKind::Close: el["message"] = "close"; break;
      case MsgKind::Label: el["message"] = "label"; break;
      case MsgKind::Chan: el["message"] = "chan"; break;
    }
    el["carrier"] = names.chan_display(e.carrier);
    if (e.msg == MsgKind::Label) el["label"] = names.label_text(e.label);
    json binders = json::array();
    for (Chan b : e.binders) binders.push_back(names.chan_display(b));
    el["binders"] = binders;
    arr.push_back(el);
  }
  return arr;
}

json trace_set_json(const TraceSet& ts, const NameTable& names) {
  // sorted on the canonical text form for stable output
  std::vector<const Trace*> order;
  for (auto& t : ts) order.push_back(&t);
  std::sort(order.begin(), order.end(), [&](const Trace* a, const Trace* b) {
    return trace_text(*a, names) < trace_text(*b, names);
  });
  json arr = json::array();
  for (auto* t : order) arr.push_back(trace_json(*t, names));
  return arr;
}

json deriv_json(const DerivP& n, const NameTable& names) {
  json out;
  out["rule"] = n->rule;
  out["judgment"] = n->judgment;
  out["traces"] = json::array();
  for (auto& s : sorted_trace_texts(n->out, names)) out["traces"].push_back(s);
  json kids = json::array();
  for (auto& k : n->kids) kids.push_back(deriv_json(k, names));
  out["kids"] = kids;
  return out;
}

void deriv_text(const DerivP& n, const NameTable& names, int depth, std::ostream& os) {
  std::string pad(static_cast<size_t>(depth) * 2, ' ');
  os << pad << n->rule << "  " << n->judgment << "\n";
  for (auto& s : sorted_trace_texts(n->out, names)) os << pad << "  | " << s << "\n";
  for (auto& k : n->kids) deriv_text(k, names, depth + 1, os);
}

json error_json(const CheckError& e, const NameTable& names) {
  json out;
  out["kind"] = err_kind_name(e.kind);
  out["rule"] = e.rule;
  out["message"] = e.message;
  out["judgment"] = e.judgment;
  out["line"] = e.pos.line;
  out["col"] = e.pos.col;
  if (e.witnesses) {
    out["witnesses"] =
        json::array({trace_text(e.witnesses->first, names), trace_text(e.witnesses->second, names)});
  }
  return out;
}

std::string error_text(const CheckError& e, const NameTable& names) {
  std::ostringstream os;
  os << err_kind_name(e.kind);
  if (!e.rule.empty()) os << " at " << e.rule;
  if (e.pos.line) os << " (line " << e.pos.line << ")";
  os << ": " << e.message;
  if (e.witnesses) {
    os << "\n    witness: " << trace_text(e.witnesses->first, names)
       << "\n    witness: " << trace_text(e.witnesses->second, names);
  }
  return os.str();
}

}  // namespace

Report cmd_check(Program& prog, const CliOptions& opts) {
  Report rep;
  auto start = std::chrono::steady_clock::now();
  CheckOptions copts{opts.derivation, opts.limit, opts.parallel};
  auto results = check_program(prog, copts);
  json decls = json::array();
  std::ostringstream text;
  for (auto& d : prog.decls) {
    const CheckOutcome& outcome = results.at(d.name);
    json jd;
    jd["name"] = d.name;
    if (auto* ok = std::get_if<CheckResult>(&outcome)) {
      jd["status"] = "ok";
      jd["constraints"] = trace_set_json(ok->constraints, prog.names);
      if (opts.derivation && ok->derivation)
        jd["derivation"] = deriv_json(ok->derivation, prog.names);
      text << "ok    " << d.name << "  (" << ok->constraints.size() << " constraint trace"
           << (ok->constraints.size() == 1 ? "" : "s") << ")\n";
      if (opts.derivation && ok->derivation) {
        deriv_text(ok->derivation, prog.names, 1, text);
      }
    } else {
      const CheckError& err = std::get<CheckError>(outcome);
      jd["status"] = "error";
      jd["error"] = error_json(err, prog.names);
      text << "FAIL  " << d.name << "  " << error_text(err, prog.names) << "\n";
      rep.exit_code = 1;
    }
    decls.push_back(jd);
  }
  text << (rep.exit_code == 0 ? "all declarations check" : "some declarations fail") << "  ("
       << ms_since(start) << " ms)\n";
  rep.text = text.str();
  if (opts.json) {
    json out;
    out["schema"] = 1;
    out["command"] = "check";
    out["decls"] = decls;
    out["ok"] = rep.exit_code == 0;
    rep.json = out.dump(2) + "\n";
  }
  return rep;
}

Report cmd_traces(Program& prog, const std::string& proc, const CliOptions& opts) {
  Report rep;
  auto start = std::chrono::steady_clock::now();
  TraceSet ts = denote_decl(prog, proc, opts.limit);
  std::ostringstream text;
  for (auto& line : sorted_trace_texts(ts, prog.names)) text << line << "\n";
  text << "# " << ts.size() << " trace" << (ts.size() == 1 ? "" : "s") << "  ("
       << ms_since(start) << " ms)\n";
  rep.text = text.str();
  if (opts.json) {
    json out;
    out["schema"] = 1;
    out["command"] = "traces";
    out["proc"] = proc;
    out["traces"] = trace_set_json(ts, prog.names);
    rep.json = out.dump(2) + "\n";
  }
  return rep;
}

Report cmd_spec_traces(Program& prog, const std::string& proc, const CliOptions& opts) {
  Report rep;
  auto start = std::chrono::steady_clock::now();
  const Decl* d = prog.find(proc);
  if (!d) throw UnknownName("unknown process '" + proc + "'");
  TraceSet ts = spec_enumerate(d->spec, prog.names, opts.limit);
  std::ostringstream text;
  for (auto& line : sorted_trace_texts(ts, prog.names)) text << line << "\n";
  text << "# " << ts.size() << " trace" << (ts.size() == 1 ? "" : "s") << "  ("
       << ms_since(start) << " ms)\n";
  rep.text = text.str();
  if (opts.json) {
    json out;
    out["schema"] = 1;
    out["command"] = "spec-traces";
    out["proc"] = proc;
    out["traces"] = trace_set_json(ts, prog.names);
    rep.json = out.dump(2) + "\n";
  }
  return rep;
}

Report cmd_verify(Program& prog, const CliOptions& opts) {
  Report rep;
  auto start = std::chrono::steady_clock::now();
  auto results = verify_program(prog, opts.limit);
  json decls = json::array();
  std::ostringstream text;
  for (auto& d : prog.decls) {
    const VerifyResult& r = results.at(d.name);
    json jd;
    jd["name"] = d.name;
    jd["checked"] = r.checked;
    jd["erasure_matches"] = r.erasure_matches;
    jd["members_ok"] = r.members_ok;
    jd["constraints"] = r.constraint_count;
    if (r.check_error) jd["error"] = error_json(*r.check_error, prog.names);
    json cex = json::array();
    for (auto& c : r.counterexamples) cex.push_back(c);
    jd["counterexamples"] = cex;
    decls.push_back(jd);
    if (r.ok()) {
      text << "ok    " << d.name << "  |T| = " << r.constraint_count << "\n";
    } else {
      rep.exit_code = 1;
      text << "FAIL  " << d.name;
      if (r.check_error)
        text << "  " << error_text(*r.check_error, prog.names) << "\n";
      else {
        text << (r.erasure_matches ? "" : "  erased constraints differ from the denotation")
             << (r.members_ok ? "" : "  constraint trace outside the specification") << "\n";
        for (auto& c : r.counterexamples) text << "    " << c << "\n";
      }
    }
  }
  text << (rep.exit_code == 0 ? "soundness verified" : "soundness violated or check failed")
       << "  (" << ms_since(start) << " ms)\n";
  rep.text = text.str();
  if (opts.json) {
    json out;
    out["schema"] = 1;
    out["command"] = "verify";
    out["decls"] = decls;
    out["ok"] = rep.exit_code == 0;
    rep.json = out.dump(2) + "\n";
  }
  return rep;
}

}  // namespace most
