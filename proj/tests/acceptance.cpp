// Acceptance suite: runs each acceptance criterion and prints one line per
// criterion. Exit code 0 iff every criterion passes.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "most/check.hpp"
#include "most/denote.hpp"
#include "most/parser.hpp"
#include "most/typesem.hpp"
#include "most/verify.hpp"

using namespace most;

namespace {

struct Harness {
  int failures = 0;
  std::vector<std::string> notes;

  void criterion(int num, const std::string& name, const std::function<bool()>& body) {
    notes.clear();
    bool ok = false;
    std::string why;
    try {
      ok = body();
    } catch (const std::exception& e) {
      why = e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << "  " << num << ". " << name << "\n";
    if (!ok) {
      ++failures;
      for (auto& n : notes) std::cout << "      " << n << "\n";
      if (!why.empty()) std::cout << "      exception: " << why << "\n";
    }
  }

  bool expect(bool cond, const std::string& what) {
    if (!cond) notes.push_back(what);
    return cond;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Program corpus(const std::string& name) {
  return parse_program(read_file(std::string(CORPUS_DIR) + "/" + name));
}

// Small trace-building helper over a declaration's interface names.
struct Names {
  NameTable& table;
  std::map<std::string, Chan> env;

  Chan operator()(const std::string& s) {
    auto it = env.find(s);
    if (it != env.end()) return it->second;
    Chan c = table.fresh_chan(s);
    env.emplace(s, c);
    return c;
  }
  void bind_interface(const Decl& d) {
    for (auto& [c, t] : d.spec.ambient.items) env.emplace(table.chan_display(c), c);
    const Interface& i = d.spec.interfaces[0];
    for (auto& [c, t] : i.used.items) env.emplace(table.chan_display(c), c);
    for (auto& [c, t] : i.internal.items) env.emplace(table.chan_display(c), c);
    env.emplace(table.chan_display(i.provided), i.provided);
  }
  Trace trace(const std::string& text) {
    std::vector<TraceElem> elems;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
      Sign sign;
      if (tok == "O") sign = Sign::Out;
      else if (tok == "I") sign = Sign::In;
      else if (tok == "S") sign = Sign::Sync;
      else sign = Sign::Constr;
      in >> tok;
      if (tok == "close") {
        in >> tok;
        elems.push_back(elem_close(sign, (*this)(tok)));
      } else if (tok == "chan") {
        in >> tok;
        Chan a = (*this)(tok);
        in >> tok;
        Chan b = (*this)(tok.substr(1, tok.size() - 2));
        elems.push_back(elem_chan(sign, a, b));
      } else {
        auto dot = tok.find('.');
        Chan a = (*this)(tok.substr(0, dot));
        elems.push_back(elem_label(sign, a, table.label(tok.substr(dot + 1))));
      }
      if (!(in >> tok)) break;
    }
    return Trace::canon(std::move(elems));
  }
  TraceSet set(std::initializer_list<std::string> texts) {
    TraceSet out;
    for (auto& t : texts) out.insert(trace(t));
    return out;
  }
};

// Independent oracle for criterion 1: enumerates synchronized interleavings
// of two constraint-free, binder-free traces directly, then hides a name set.
void oracle_merge(const std::vector<TraceElem>& t1, size_t i, const std::vector<TraceElem>& t2,
                  size_t j, std::vector<TraceElem> acc, std::vector<std::vector<TraceElem>>& out) {
  if (i == t1.size() && j == t2.size()) {
    out.push_back(std::move(acc));
    return;
  }
  auto shared = [&](Chan c, const std::vector<TraceElem>& t, size_t k) {
    for (; k < t.size(); ++k)
      if (t[k].carrier == c) return true;
    return false;
  };
  if (i < t1.size()) {
    const TraceElem& e = t1[i];
    if (j < t2.size() && e.carrier == t2[j].carrier) {
      // must synchronize
      const TraceElem& f = t2[j];
      bool dual = (e.sign == Sign::Out && f.sign == Sign::In) ||
                  (e.sign == Sign::In && f.sign == Sign::Out);
      if (dual && e.msg == f.msg && (e.msg != MsgKind::Label || e.label == f.label)) {
        TraceElem s = e;
        s.sign = Sign::Sync;
        auto acc2 = acc;
        acc2.push_back(s);
        oracle_merge(t1, i + 1, t2, j + 1, std::move(acc2), out);
      }
      return;
    }
    if (!shared(e.carrier, t2, j)) {
      auto acc2 = acc;
      acc2.push_back(e);
      oracle_merge(t1, i + 1, t2, j, std::move(acc2), out);
    }
  }
  if (j < t2.size()) {
    const TraceElem& f = t2[j];
    if (i < t1.size() && f.carrier == t1[i].carrier) return;
    if (!shared(f.carrier, t1, i)) {
      auto acc2 = acc;
      acc2.push_back(f);
      oracle_merge(t1, i, t2, j + 1, std::move(acc2), out);
    }
  }
}

TraceSet oracle_compose_hide(const TraceSet& left, const TraceSet& right,
                             const std::set<Chan>& hide) {
  TraceSet out;
  for (auto& a : left)
    for (auto& b : right) {
      std::vector<std::vector<TraceElem>> merges;
      oracle_merge(a.elems, 0, b.elems, 0, {}, merges);
      for (auto& m : merges) {
        std::vector<TraceElem> kept;
        for (auto& e : m)
          if (!hide.count(e.carrier)) kept.push_back(e);
        out.insert(Trace::canon(std::move(kept)));
      }
    }
  return out;
}

int run_binary(const char* path) {
  std::string cmd = std::string(path) + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return rc;
}

}  // namespace

int main() {
  Harness h;

  h.criterion(1, "denotation goldens (neg, comp, doubleNeg')", [&]() {
    bool ok = true;
    {
      Program p = corpus("neg.most");
      const Decl& d = *p.find("negPlain");
      Names n{p.names, {}};
      n.bind_interface(d);
      TraceSet expect = n.set({"I i.0 ; O o.1 ; I close i ; O close o",
                               "I i.1 ; O o.0 ; I close i ; O close o"});
      ok &= h.expect(set_eq(denote_decl(p, "negPlain"), expect), "neg denotation differs");
    }
    {
      Program p = corpus("comp.most");
      TraceSet ts = denote_decl(p, "comp");
      ok &= h.expect(ts.size() == 1, "comp denotation is not a single trace");
      const Decl& d = *p.find("comp");
      Names n{p.names, {}};
      n.env["c"] = d.spec.interfaces[0].provided;
      n.env["a"] = d.spec.interfaces[0].internal.items[0].first;
      Trace expect = n.trace("S chan a [b] ; S close a ; S close b ; O close c");
      ok &= h.expect(ts.count(expect) == 1, "comp trace shape differs");
    }
    {
      Program p = corpus("doubleneg.most");
      const Decl& d = *p.find("doubleNegP");
      // oracle: exhaustively merge the two neg denotations and hide c
      const ProcP& body = d.body;
      TraceSet left = denote(body->cont->cont, p.names);
      TraceSet right = denote(body->cont->cont2, p.names);
      std::set<Chan> hide;
      for (auto& [c, t] : body->bindings) hide.insert(c);
      TraceSet expect = oracle_compose_hide(left, right, hide);
      TraceSet got = denote_decl(p, "doubleNegP");
      ok &= h.expect(got.size() == 4, "doubleNeg' should have exactly 4 traces");
      ok &= h.expect(set_eq(got, expect), "doubleNeg' differs from the oracle");
      Names n{p.names, {}};
      n.bind_interface(d);
      ok &= h.expect(got.count(n.trace("I i.0 ; O o.0 ; I close i ; O close o")) == 1,
                     "missing the sequential trace with c hidden");
      ok &= h.expect(got.count(n.trace("I i.0 ; I close i ; O o.0 ; O close o")) == 1,
                     "missing the reordered trace with c hidden");
    }
    return ok;
  });

  h.criterion(2, "trace-operator goldens (deletion, interleaving, deadlock)", [&]() {
    NameTable names;
    Names n{names, {}};
    bool ok = true;
    Trace ex51 = n.trace("I chan a [b] ; I close a ; I close b ; O close c");
    ok &= h.expect(delete_names(ex51, {n("a")}) == n.trace("O close c"), "transmitted-name deletion differs");
    ok &= h.expect(set_eq(interleave(n.trace("O close a"), n.trace("I close b ; I close a")),
                          n.set({"I close b ; S close a"})),
                   "synchronizing interleaving differs");
    ok &= h.expect(
        interleave(n.trace("I close a ; O close b"), n.trace("I close b ; O close a")).empty(),
        "deadlock pair should have no interleavings");
    ok &= h.expect(set_eq(interleave(n.trace("O close a"), n.trace("I close b ; C close a")),
                          n.set({"O close a ; I close b", "I close b ; O close a"})),
                   "constraint-satisfying interleavings differ");
    ok &= h.expect(
        interleave(n.trace("C close a ; I close b"), n.trace("O close b ; O close a")).empty(),
        "synchronization-boundary pair should have no interleavings");
    return ok;
  });

  h.criterion(3, "spec-semantics goldens (enumeration and membership)", [&]() {
    bool ok = true;
    {
      Program p = corpus("neg.most");
      const Decl& d = *p.find("negPrecise");
      Names n{p.names, {}};
      n.bind_interface(d);
      TraceSet got = spec_enumerate(d.spec, p.names);
      ok &= h.expect(set_eq(got, n.set({"I i.0 ; O o.1 ; I close i ; O close o",
                                        "I i.0 ; I close i ; O o.1 ; O close o",
                                        "I i.1 ; O o.0 ; I close i ; O close o",
                                        "I i.1 ; I close i ; O o.0 ; O close o"})),
                     "precise neg spec traces differ");
    }
    {
      Program p = corpus("neg.most");
      const Decl& d = *p.find("negAmbient");
      Names n{p.names, {}};
      n.bind_interface(d);
      ok &= h.expect(
          spec_member(n.trace("C c.0 ; I i.1 ; O o.0 ; C close c ; I close i ; O close o"),
                      d.spec, p.names),
          "ambient neg spec: first trace not a member");
      ok &= h.expect(
          spec_member(n.trace("C c.0 ; C close c ; I i.1 ; O o.0 ; I close i ; O close o"),
                      d.spec, p.names),
          "ambient neg spec: second trace not a member");
    }
    {
      Program p = corpus("case_orders.most");
      const Decl& d = p.decls[0];
      Names n{p.names, {}};
      n.bind_interface(d);
      TraceSet got = spec_enumerate(d.spec, p.names);
      ok &= h.expect(set_eq(got, n.set({"C close a ; C close b ; O close c",
                                        "C close b ; C close a ; O close c"})),
                     "close-observation spec traces differ");
    }
    {
      Program p = corpus("check_only/spec_only_pair.most");
      const Decl& d = p.decls[0];
      TraceSet got = spec_enumerate(d.spec, p.names);
      ok &= h.expect(got.size() == 1, "transmission spec should have exactly one trace");
      Names n{p.names, {}};
      n.env["a"] = d.spec.interfaces[0].provided;
      ok &= h.expect(set_eq(got, n.set({"O chan a [b] ; O close b ; O close a"})),
                     "transmission spec trace differs");
    }
    return ok;
  });

  h.criterion(4, "typechecker goldens (relay, forwarder, id pair, auction, doubleNeg)", [&]() {
    bool ok = true;
    {
      Program p = corpus("close_relay.most");
      const Decl& d = p.decls[0];
      CheckOptions opts;
      opts.derivation = true;
      auto res = check_decl(d, p.names, opts);
      auto* result = std::get_if<CheckResult>(&res);
      if (!h.expect(result != nullptr, "close relay does not check")) return false;
      Chan a = d.spec.interfaces[0].used.items[0].first;
      Chan c = d.spec.interfaces[0].provided;
      Chan b = d.body->bindings[0].first;
      TraceSet l1{Trace::canon({elem_close(Sign::Out, b)})};
      TraceSet l2 = prefix_set(elem_close(Sign::In, a), l1);
      TraceSet r1{Trace::canon({elem_close(Sign::Out, c)})};
      TraceSet r2 = prefix_set(elem_close(Sign::Constr, a), r1);
      TraceSet r3 = prefix_set(elem_close(Sign::In, b), r2);
      TraceSet final_t{Trace::canon({elem_close(Sign::In, a), elem_close(Sign::Out, c)})};
      ok &= h.expect(set_eq(result->constraints, final_t), "close relay final set differs");
      // locate the recorded intermediate sets
      const DerivP& new_node = result->derivation;
      const DerivP& par = new_node->kids.at(0);
      const DerivP& lfoc = par->kids.at(0);
      const DerivP& rfoc = par->kids.at(1);
      const DerivP& l_leaf = lfoc->kids.at(0)->kids.at(0)->kids.at(0);
      const DerivP& red = rfoc->kids.at(0)->kids.at(0)->kids.at(0);
      ok &= h.expect(set_eq(l_leaf->out, l1), "L1 differs");
      ok &= h.expect(set_eq(lfoc->out, l2), "L2 differs");
      ok &= h.expect(set_eq(red->kids.at(0)->out, r1), "R1 differs");
      ok &= h.expect(set_eq(red->out, r2), "R2 differs");
      ok &= h.expect(set_eq(rfoc->out, r3), "R3 differs");
    }
    {
      Program p = corpus("check_only/bad_constant_forward.most");
      auto res = check_decl(p.decls[0], p.names);
      auto* err = std::get_if<CheckError>(&res);
      ok &= h.expect(err && err->kind == ErrKind::ConstraintIncompatible,
                     "constant forwarder should fail with incompatible constraints");
      if (err && err->witnesses) {
        std::string w1 = trace_text(err->witnesses->first, p.names);
        std::string w2 = trace_text(err->witnesses->second, p.names);
        ok &= h.expect(w1.rfind("I a.1 ; O b.0", 0) == 0, "first witness differs: " + w1);
        ok &= h.expect(w2.rfind("I b.0 ; C a.0", 0) == 0, "second witness differs: " + w2);
      } else {
        ok = h.expect(false, "constant forwarder witnesses missing");
      }
    }
    {
      Program good = corpus("id.most");
      for (auto& [name, outcome] : check_program(good))
        ok &= h.expect(std::holds_alternative<CheckResult>(outcome), name + " should check");
      Program bad = corpus("check_only/bad_swap_id.most");
      auto res = check_decl(bad.decls[0], bad.names);
      auto* err = std::get_if<CheckError>(&res);
      ok &= h.expect(err && err->kind == ErrKind::LabelNotPermitted,
                     "label-swapping id should be rejected");
    }
    {
      Program p = corpus("auction.most");
      for (auto& [name, outcome] : check_program(p))
        ok &= h.expect(std::holds_alternative<CheckResult>(outcome), name + " should check");
      Program zero = corpus("check_only/bids_zero.most");
      auto rz = check_decl(zero.decls[0], zero.names);
      ok &= h.expect(std::holds_alternative<CheckResult>(rz), "BidsZero should check");
      Program unfair = corpus("check_only/bad_unfair.most");
      auto ru = check_decl(unfair.decls[0], unfair.names);
      auto* err = std::get_if<CheckError>(&ru);
      ok &= h.expect(err && err->kind == ErrKind::LabelNotPermitted,
                     "always-win auctioneer should be rejected");
    }
    {
      Program p = corpus("doubleneg.most");
      for (auto& [name, outcome] : check_program(p))
        ok &= h.expect(std::holds_alternative<CheckResult>(outcome), name + " should check");
      Program q = corpus("neg.most");
      for (auto& [name, outcome] : check_program(q))
        ok &= h.expect(std::holds_alternative<CheckResult>(outcome), name + " should check");
    }
    return ok;
  });

  h.criterion(5, "soundness oracle over the corpus", [&]() {
    bool ok = true;
    size_t decls = 0;
    std::set<TypeKind> kinds;
    bool mutual = false, casechan = false;
    std::function<void(const TypeP&)> scan = [&](const TypeP& t) {
      kinds.insert(t->kind);
      if (t->kind == TypeKind::CaseChan) casechan = true;
      if (t->kind == TypeKind::Tensor || t->kind == TypeKind::Lolly) {
        if (free_channels(t->right).count(t->bind1) && free_channels(t->left).count(t->bind2))
          mutual = true;
        // free_channels removes the binders; check occurrences directly
        auto raw_mentions = [](const TypeP& ty, Chan c) {
          std::function<bool(const TypeP&)> go = [&](const TypeP& u) -> bool {
            if (u->subj == c) return true;
            if (u->left && go(u->left)) return true;
            if (u->right && go(u->right)) return true;
            for (auto& [l, bb] : u->branches)
              if (go(bb)) return true;
            return false;
          };
          return go(ty);
        };
        if (raw_mentions(t->right, t->bind1) && raw_mentions(t->left, t->bind2)) mutual = true;
      }
      if (t->left) scan(t->left);
      if (t->right) scan(t->right);
      for (auto& [l, b] : t->branches) scan(b);
    };
    for (auto& entry : std::filesystem::directory_iterator(CORPUS_DIR)) {
      if (entry.path().extension() != ".most") continue;
      Program p = parse_program(read_file(entry.path().string()));
      for (auto& d : p.decls) {
        ++decls;
        for (auto& [c, t] : d.spec.ambient.items) scan(t);
        const Interface& i = d.spec.interfaces[0];
        for (auto& [c, t] : i.used.items) scan(t);
        for (auto& [c, t] : i.internal.items) scan(t);
        scan(i.ptype);
        VerifyResult r = verify_decl(d, p.names);
        if (!r.ok()) {
          std::string why = !r.checked ? "does not check"
                            : !r.erasure_matches ? "erased constraints differ from denotation"
                                                 : "constraint trace outside the specification";
          ok = h.expect(false, entry.path().filename().string() + "/" + d.name + ": " + why);
        }
      }
    }
    ok &= h.expect(decls >= 15, "corpus has fewer than 15 declarations");
    ok &= h.expect(kinds.size() == 8, "corpus does not cover every type constructor");
    ok &= h.expect(mutual, "corpus lacks mutual observation through transmission");
    ok &= h.expect(casechan, "corpus lacks higher-order observation");
    return ok;
  });

  h.criterion(6, "randomized property suites (fixed seed, >=1000 cases each)", [&]() {
    return h.expect(run_binary(PROPS_BIN) == 0, "property suite failed");
  });

  h.criterion(7, "compositionality on generated pairs", [&]() {
    return h.expect(run_binary(COMPOSE_BIN) == 0, "compositionality suite failed");
  });

  if (h.failures == 0) {
    std::cout << "acceptance: all criteria pass\n";
    return 0;
  }
  std::cout << "acceptance: " << h.failures << " criteria FAILED\n";
  return 1;
}
