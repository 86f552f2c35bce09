#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen.hpp"
#include "helpers.hpp"
#include "most/check.hpp"

using namespace most;
using most_test::Gen;

namespace {

// Plain session types (no observations) with unused transmission binders.
TypeP gen_plain_type(Gen& g, int depth) {
  if (depth <= 0) return t_one();
  auto sub = [&]() { return gen_plain_type(g, depth - 1); };
  switch (g.pick(5)) {
    case 0:
      return t_one();
    case 1:
      return t_choice(TypeKind::IChoice, g.branches(2, sub));
    case 2:
      return t_choice(TypeKind::EChoice, g.branches(2, sub));
    case 3:
      return t_tensor(g.names.fresh_chan("x"), sub(), g.names.fresh_chan("y"), sub());
    default:
      return t_lolly(g.names.fresh_chan("x"), sub(), g.names.fresh_chan("y"), sub());
  }
}

using Pending = std::vector<std::pair<Chan, TypeP>>;

ProcP provide(Gen& g, Chan c, const TypeP& a, Pending pending);

// A client of a : A that then continues as `cont`.
ProcP consume(Gen& g, Chan a, const TypeP& t, const ProcP& cont) {
  switch (t->kind) {
    case TypeKind::One:
      return p_wait(a, cont);
    case TypeKind::IChoice: {
      std::vector<std::pair<Lab, ProcP>> bs;
      for (auto& [l, b] : t->branches) bs.emplace_back(l, consume(g, a, b, cont));
      return p_recv_label(a, std::move(bs));
    }
    case TypeKind::EChoice: {
      auto& [l, b] = t->branches[static_cast<size_t>(g.pick(static_cast<int>(t->branches.size())))];
      return p_send_label(a, l, consume(g, a, b, cont));
    }
    case TypeKind::Tensor: {
      Chan b = g.names.fresh_chan("r");
      return p_recv_chan(b, a, consume(g, b, t->left, consume(g, a, t->right, cont)));
    }
    case TypeKind::Lolly: {
      Chan b = g.names.fresh_chan("s");
      return p_send_chan(a, b, provide(g, b, t->left, {}), consume(g, a, t->right, cont));
    }
    default:
      FAIL("observing type in plain generator");
      return nullptr;
  }
}

// A provider of c : A that also has to consume leftover client channels.
ProcP provide(Gen& g, Chan c, const TypeP& t, Pending pending) {
  switch (t->kind) {
    case TypeKind::One: {
      if (!pending.empty()) {
        auto [pc, pt] = pending.back();
        pending.pop_back();
        return consume(g, pc, pt, provide(g, c, t, std::move(pending)));
      }
      return p_close(c);
    }
    case TypeKind::IChoice: {
      auto& [l, b] = t->branches[static_cast<size_t>(g.pick(static_cast<int>(t->branches.size())))];
      return p_send_label(c, l, provide(g, c, b, std::move(pending)));
    }
    case TypeKind::EChoice: {
      std::vector<std::pair<Lab, ProcP>> bs;
      for (auto& [l, b] : t->branches) bs.emplace_back(l, provide(g, c, b, pending));
      return p_recv_label(c, std::move(bs));
    }
    case TypeKind::Tensor: {
      Chan b = g.names.fresh_chan("t");
      // the continuation keeps every pending client
      return p_send_chan(c, b, provide(g, b, t->left, {}),
                         provide(g, c, t->right, std::move(pending)));
    }
    case TypeKind::Lolly: {
      Chan b = g.names.fresh_chan("u");
      pending.emplace_back(b, t->left);
      return p_recv_chan(b, c, provide(g, c, t->right, std::move(pending)));
    }
    default:
      FAIL("observing type in plain generator");
      return nullptr;
  }
}

TraceSet expect_ok(const CheckOutcome& o, const NameTable& names) {
  if (auto* e = std::get_if<CheckError>(&o))
    FAIL("check failed: " << e->message << " in " << e->judgment << " ["
                          << err_kind_name(e->kind) << "]");
  (void)names;
  return std::get<CheckResult>(o).constraints;
}

}  // namespace

TEST_CASE("compositionality: generated providers and clients compose by Par") {
  NameTable names;
  Gen g(20260809u, names);
  int built = 0;
  while (built < 20) {
    TypeP a_type = gen_plain_type(g, 1 + g.pick(3));
    if (op_count(a_type) > 8) continue;  // keep interleaving fan-out desk-scale
    Chan a = names.fresh_chan("a");
    Chan c = names.fresh_chan("c");

    ProcP p = provide(g, a, a_type, {});
    ProcP q = consume(g, a, a_type, p_close(c));

    Judgment jp;
    jp.provided = a;
    jp.ptype = a_type;
    Judgment jq;
    jq.used.add(a, a_type);
    jq.provided = c;
    jq.ptype = t_one();

    TraceSet t1 = expect_ok(check_uniform(jp, p, names), names);
    TraceSet t2 = expect_ok(check_uniform(jq, q, names), names);

    // empty-ambient constraint sets never carry constraints
    for (auto& t : t1)
      for (auto& e : t.elems) REQUIRE(e.sign != Sign::Constr);

    Judgment jpar;
    jpar.internal.add(a, a_type);
    jpar.provided = c;
    jpar.ptype = t_one();
    ProcP par = p_par(a, p, q);
    TraceSet t = expect_ok(check_uniform(jpar, par, names), names);
    CHECK(set_eq(t, interleave_sets(t1, t2)));
    ++built;
  }
  CHECK(built == 20);
}

TEST_CASE("compositionality holds for corpus declarations with empty ambient") {
  // doubleNeg is literally the Par of the two neg instantiations
  Program prog = most_test::parse_corpus("doubleneg.most");
  const Decl& dn = *prog.find("doubleNeg");
  REQUIRE(dn.body->kind == ProcKind::Par);
  auto outcome = check_decl(dn, prog.names);
  TraceSet whole = expect_ok(outcome, prog.names);

  // check the two halves against their split interfaces, then interleave
  const Interface& iface = dn.spec.interfaces[0];
  Chan cut = dn.body->chan;
  const TypeP* cut_type = iface.internal.find(cut);
  REQUIRE(cut_type != nullptr);

  Judgment j1;
  j1.ambient.add(iface.provided, iface.ptype);
  j1.used = iface.used;
  j1.provided = cut;
  j1.ptype = *cut_type;
  TraceSet t1 = expect_ok(check_uniform(j1, dn.body->cont, prog.names), prog.names);

  Judgment j2;
  j2.ambient = iface.used;
  j2.used.add(cut, *cut_type);
  j2.provided = iface.provided;
  j2.ptype = iface.ptype;
  TraceSet t2 = expect_ok(check_uniform(j2, dn.body->cont2, prog.names), prog.names);

  CHECK(!par_compatible(t1, t2).has_value());
  CHECK(set_eq(whole, interleave_sets(t1, t2)));
}
