#include "most/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace most {

// ---------- constructors ----------

static void sort_branches(std::vector<std::pair<Lab, TypeP>>& bs) {
  std::sort(bs.begin(), bs.end(),
            [](auto& a, auto& b) { return a.first < b.first; });
}
static void sort_branches(std::vector<std::pair<Lab, ProcP>>& bs) {
  std::sort(bs.begin(), bs.end(),
            [](auto& a, auto& b) { return a.first < b.first; });
}

TypeP t_one() {
  static const TypeP one = std::make_shared<SessionType>();
  return one;
}

TypeP t_choice(TypeKind k, std::vector<std::pair<Lab, TypeP>> branches) {
  assert(k == TypeKind::IChoice || k == TypeKind::EChoice);
  assert(!branches.empty());
  auto t = std::make_shared<SessionType>();
  t->kind = k;
  sort_branches(branches);
  t->branches = std::move(branches);
  return t;
}

TypeP t_tensor(Chan x, TypeP a, Chan y, TypeP b) {
  auto t = std::make_shared<SessionType>();
  t->kind = TypeKind::Tensor;
  t->bind1 = x;
  t->bind2 = y;
  t->left = std::move(a);
  t->right = std::move(b);
  return t;
}

TypeP t_lolly(Chan x, TypeP a, Chan y, TypeP b) {
  auto t = std::make_shared<SessionType>();
  t->kind = TypeKind::Lolly;
  t->bind1 = x;
  t->bind2 = y;
  t->left = std::move(a);
  t->right = std::move(b);
  return t;
}

TypeP t_case_close(Chan subj, TypeP body) {
  auto t = std::make_shared<SessionType>();
  t->kind = TypeKind::CaseClose;
  t->subj = subj;
  t->left = std::move(body);
  return t;
}

TypeP t_case_label(Chan subj, std::vector<std::pair<Lab, TypeP>> branches) {
  assert(!branches.empty());
  auto t = std::make_shared<SessionType>();
  t->kind = TypeKind::CaseLabel;
  t->subj = subj;
  sort_branches(branches);
  t->branches = std::move(branches);
  return t;
}

TypeP t_case_chan(Chan subj, Chan bind, TypeP body) {
  auto t = std::make_shared<SessionType>();
  t->kind = TypeKind::CaseChan;
  t->subj = subj;
  t->bind1 = bind;
  t->left = std::move(body);
  return t;
}

bool whnf(const TypeP& t) {
  switch (t->kind) {
    case TypeKind::One:
    case TypeKind::IChoice:
    case TypeKind::EChoice:
    case TypeKind::Tensor:
    case TypeKind::Lolly:
      return true;
    default:
      return false;
  }
}

ProcP p_close(Chan a, Pos pos) {
  auto p = std::make_shared<Process>();
  p->kind = ProcKind::Close;
  p->chan = a;
  p->pos = pos;
  return p;
}
ProcP p_wait(Chan a, ProcP q, Pos pos) {
  auto p = std::make_shared<Process>();
  p->kind = ProcKind::Wait;
  p->chan = a;
  p->cont = std::move(q);
  p->pos = pos;
  return p;
}
ProcP p_send_label(Chan a, Lab k, ProcP q, Pos pos) {
  auto p = std::make_shared<Process>();
  p->kind = ProcKind::SendLabel;
  p->chan = a;
  p->label = k;
  p->cont = std::move(q);
  p->pos = pos;
  return p;
}
ProcP p_recv_label(Chan a, std::vector<std::pair<Lab, ProcP>> branches, Pos pos) {
  assert(!branches.empty());
  auto p = std::make_shared<Process>();
  p->kind = ProcKind::RecvLabel;
  p->chan = a;
  sort_branches(branches);
  p->branches = std::move(branches);
  p->pos = pos;
  return p;
}
ProcP p_send_chan(Chan a, Chan b, ProcP p1, ProcP q, Pos pos) {
  auto p = std::make_shared<Process>();
  p->kind = ProcKind::SendChan;
  p->chan = a;
  p->bind = b;
  p->cont = std::move(p1);
  p->cont2 = std::move(q);
  p->pos = pos;
  return p;
}
ProcP p_recv_chan(Chan b, Chan a, ProcP q, Pos pos) {
  auto p = std::make_shared<Process>();
  p->kind = ProcKind::RecvChan;
  p->chan = a;
  p->bind = b;
  p->cont = std::move(q);
  p->pos = pos;
  return p;
}
ProcP p_par(Chan a, ProcP l, ProcP r, Pos pos) {
  auto p = std::make_shared<Process>();
  p->kind = ProcKind::Par;
  p->chan = a;
  p->cont = std::move(l);
  p->cont2 = std::move(r);
  p->pos = pos;
  return p;
}
ProcP p_new(std::vector<std::pair<Chan, TypeP>> bindings, ProcP q, Pos pos) {
  assert(!bindings.empty());
  auto p = std::make_shared<Process>();
  p->kind = ProcKind::New;
  p->bindings = std::move(bindings);
  p->cont = std::move(q);
  p->pos = pos;
  return p;
}

// ---------- free channels ----------

static void free_chans(const TypeP& t, std::set<Chan>& out) {
  switch (t->kind) {
    case TypeKind::One:
      return;
    case TypeKind::IChoice:
    case TypeKind::EChoice:
      for (auto& [l, b] : t->branches) free_chans(b, out);
      return;
    case TypeKind::Tensor:
    case TypeKind::Lolly: {
      std::set<Chan> fa, fb;
      free_chans(t->left, fa);
      free_chans(t->right, fb);
      fa.erase(t->bind2);
      fb.erase(t->bind1);
      out.insert(fa.begin(), fa.end());
      out.insert(fb.begin(), fb.end());
      return;
    }
    case TypeKind::CaseClose:
      out.insert(t->subj);
      free_chans(t->left, out);
      return;
    case TypeKind::CaseLabel:
      out.insert(t->subj);
      for (auto& [l, b] : t->branches) free_chans(b, out);
      return;
    case TypeKind::CaseChan: {
      out.insert(t->subj);
      std::set<Chan> fb;
      free_chans(t->left, fb);
      fb.erase(t->bind1);
      out.insert(fb.begin(), fb.end());
      return;
    }
  }
}

std::set<Chan> free_channels(const TypeP& t) {
  std::set<Chan> out;
  free_chans(t, out);
  return out;
}

std::set<Chan> free_channels(const ProcP& p) {
  std::set<Chan> out;
  switch (p->kind) {
    case ProcKind::Close:
      out.insert(p->chan);
      break;
    case ProcKind::Wait:
    case ProcKind::SendLabel: {
      out = free_channels(p->cont);
      out.insert(p->chan);
      break;
    }
    case ProcKind::RecvLabel: {
      for (auto& [l, q] : p->branches) {
        auto f = free_channels(q);
        out.insert(f.begin(), f.end());
      }
      out.insert(p->chan);
      break;
    }
    case ProcKind::SendChan: {
      auto f1 = free_channels(p->cont);
      f1.erase(p->bind);
      auto f2 = free_channels(p->cont2);
      out.insert(f1.begin(), f1.end());
      out.insert(f2.begin(), f2.end());
      out.insert(p->chan);
      break;
    }
    case ProcKind::RecvChan: {
      out = free_channels(p->cont);
      out.erase(p->bind);
      out.insert(p->chan);
      break;
    }
    case ProcKind::Par: {
      auto f1 = free_channels(p->cont);
      auto f2 = free_channels(p->cont2);
      out.insert(f1.begin(), f1.end());
      out.insert(f2.begin(), f2.end());
      break;
    }
    case ProcKind::New: {
      out = free_channels(p->cont);
      for (auto& [c, t] : p->bindings) out.erase(c);
      break;
    }
  }
  return out;
}

// ---------- substitution ----------

TypeP subst_chan(const TypeP& t, Chan from, Chan to) {
  if (from == to) return t;
  switch (t->kind) {
    case TypeKind::One:
      return t;
    case TypeKind::IChoice:
    case TypeKind::EChoice: {
      std::vector<std::pair<Lab, TypeP>> bs;
      bs.reserve(t->branches.size());
      for (auto& [l, b] : t->branches) bs.emplace_back(l, subst_chan(b, from, to));
      return t_choice(t->kind, std::move(bs));
    }
    case TypeKind::Tensor:
    case TypeKind::Lolly: {
      assert(t->bind1 != to && t->bind2 != to);
      TypeP a = (t->bind2 == from) ? t->left : subst_chan(t->left, from, to);
      TypeP b = (t->bind1 == from) ? t->right : subst_chan(t->right, from, to);
      auto mk = (t->kind == TypeKind::Tensor) ? t_tensor : t_lolly;
      return mk(t->bind1, std::move(a), t->bind2, std::move(b));
    }
    case TypeKind::CaseClose: {
      Chan s = (t->subj == from) ? to : t->subj;
      return t_case_close(s, subst_chan(t->left, from, to));
    }
    case TypeKind::CaseLabel: {
      Chan s = (t->subj == from) ? to : t->subj;
      std::vector<std::pair<Lab, TypeP>> bs;
      bs.reserve(t->branches.size());
      for (auto& [l, b] : t->branches) bs.emplace_back(l, subst_chan(b, from, to));
      return t_case_label(s, std::move(bs));
    }
    case TypeKind::CaseChan: {
      assert(t->bind1 != to);
      Chan s = (t->subj == from) ? to : t->subj;
      TypeP body = (t->bind1 == from) ? t->left : subst_chan(t->left, from, to);
      return t_case_chan(s, t->bind1, std::move(body));
    }
  }
  return t;
}

ProcP subst_chan(const ProcP& p, Chan from, Chan to) {
  if (from == to) return p;
  auto ch = [&](Chan c) { return c == from ? to : c; };
  switch (p->kind) {
    case ProcKind::Close:
      return p_close(ch(p->chan), p->pos);
    case ProcKind::Wait:
      return p_wait(ch(p->chan), subst_chan(p->cont, from, to), p->pos);
    case ProcKind::SendLabel:
      return p_send_label(ch(p->chan), p->label, subst_chan(p->cont, from, to), p->pos);
    case ProcKind::RecvLabel: {
      std::vector<std::pair<Lab, ProcP>> bs;
      bs.reserve(p->branches.size());
      for (auto& [l, q] : p->branches) bs.emplace_back(l, subst_chan(q, from, to));
      return p_recv_label(ch(p->chan), std::move(bs), p->pos);
    }
    case ProcKind::SendChan: {
      assert(p->bind != to);
      ProcP p1 = (p->bind == from) ? p->cont : subst_chan(p->cont, from, to);
      return p_send_chan(ch(p->chan), p->bind, std::move(p1),
                         subst_chan(p->cont2, from, to), p->pos);
    }
    case ProcKind::RecvChan: {
      assert(p->bind != to);
      ProcP q = (p->bind == from) ? p->cont : subst_chan(p->cont, from, to);
      return p_recv_chan(p->bind, ch(p->chan), std::move(q), p->pos);
    }
    case ProcKind::Par:
      return p_par(ch(p->chan), subst_chan(p->cont, from, to),
                   subst_chan(p->cont2, from, to), p->pos);
    case ProcKind::New: {
      for ([[maybe_unused]] auto& [c, t] : p->bindings) assert(c != to);
      std::vector<std::pair<Chan, TypeP>> bs;
      bool shadowed = false;
      for (auto& [c, t] : p->bindings) {
        bs.emplace_back(c, subst_chan(t, from, to));
        if (c == from) shadowed = true;
      }
      ProcP body = shadowed ? p->cont : subst_chan(p->cont, from, to);
      return p_new(std::move(bs), std::move(body), p->pos);
    }
  }
  return p;
}

// ---------- canonicalization / alpha equivalence ----------

namespace {

struct CanonEnv {
  std::unordered_map<int32_t, int32_t> map;  // original id -> canonical id
  int32_t next = -1;

  Chan lookup(Chan c) const {
    auto it = map.find(c.id);
    return it == map.end() ? c : Chan{it->second};
  }
  Chan bind(Chan c) {
    Chan fresh{next--};
    map[c.id] = fresh.id;
    return fresh;
  }
};

TypeP canon_type(const TypeP& t, CanonEnv env) {
  switch (t->kind) {
    case TypeKind::One:
      return t;
    case TypeKind::IChoice:
    case TypeKind::EChoice: {
      std::vector<std::pair<Lab, TypeP>> bs;
      // threaded counter keeps canonical ids globally distinct
      for (auto& [l, b] : t->branches) {
        bs.emplace_back(l, canon_type(b, env));
      }
      return t_choice(t->kind, std::move(bs));
    }
    case TypeKind::Tensor:
    case TypeKind::Lolly: {
      CanonEnv env1 = env;
      Chan y = env1.bind(t->bind2);
      TypeP a = canon_type(t->left, env1);
      CanonEnv env2 = env;
      env2.next = env1.next;
      Chan x = env2.bind(t->bind1);
      TypeP b = canon_type(t->right, env2);
      auto mk = (t->kind == TypeKind::Tensor) ? t_tensor : t_lolly;
      return mk(x, std::move(a), y, std::move(b));
    }
    case TypeKind::CaseClose:
      return t_case_close(env.lookup(t->subj), canon_type(t->left, env));
    case TypeKind::CaseLabel: {
      std::vector<std::pair<Lab, TypeP>> bs;
      for (auto& [l, b] : t->branches) bs.emplace_back(l, canon_type(b, env));
      return t_case_label(env.lookup(t->subj), std::move(bs));
    }
    case TypeKind::CaseChan: {
      Chan s = env.lookup(t->subj);
      Chan x = env.bind(t->bind1);
      return t_case_chan(s, x, canon_type(t->left, env));
    }
  }
  return t;
}

ProcP canon_proc(const ProcP& p, CanonEnv env) {
  switch (p->kind) {
    case ProcKind::Close:
      return p_close(env.lookup(p->chan), p->pos);
    case ProcKind::Wait:
      return p_wait(env.lookup(p->chan), canon_proc(p->cont, env), p->pos);
    case ProcKind::SendLabel:
      return p_send_label(env.lookup(p->chan), p->label, canon_proc(p->cont, env), p->pos);
    case ProcKind::RecvLabel: {
      std::vector<std::pair<Lab, ProcP>> bs;
      for (auto& [l, q] : p->branches) bs.emplace_back(l, canon_proc(q, env));
      return p_recv_label(env.lookup(p->chan), std::move(bs), p->pos);
    }
    case ProcKind::SendChan: {
      Chan a = env.lookup(p->chan);
      CanonEnv env1 = env;
      Chan b = env1.bind(p->bind);
      ProcP p1 = canon_proc(p->cont, env1);
      CanonEnv env2 = env;
      env2.next = env1.next;
      ProcP q = canon_proc(p->cont2, env2);
      return p_send_chan(a, b, std::move(p1), std::move(q), p->pos);
    }
    case ProcKind::RecvChan: {
      Chan a = env.lookup(p->chan);
      Chan b = env.bind(p->bind);
      return p_recv_chan(b, a, canon_proc(p->cont, env), p->pos);
    }
    case ProcKind::Par:
      return p_par(env.lookup(p->chan), canon_proc(p->cont, env),
                   canon_proc(p->cont2, env), p->pos);
    case ProcKind::New: {
      std::vector<std::pair<Chan, TypeP>> bs;
      CanonEnv benv = env;
      for (auto& [c, t] : p->bindings) benv.bind(c);
      for (auto& [c, t] : p->bindings)
        bs.emplace_back(benv.lookup(c), canon_type(t, benv));
      return p_new(std::move(bs), canon_proc(p->cont, benv), p->pos);
    }
  }
  return p;
}

bool type_eq(const TypeP& a, const TypeP& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::One:
      return true;
    case TypeKind::IChoice:
    case TypeKind::EChoice:
    case TypeKind::CaseLabel: {
      if ((a->kind == TypeKind::CaseLabel) && a->subj != b->subj) return false;
      if (a->branches.size() != b->branches.size()) return false;
      for (size_t i = 0; i < a->branches.size(); ++i) {
        if (a->branches[i].first != b->branches[i].first) return false;
        if (!type_eq(a->branches[i].second, b->branches[i].second)) return false;
      }
      return true;
    }
    case TypeKind::Tensor:
    case TypeKind::Lolly:
      return a->bind1 == b->bind1 && a->bind2 == b->bind2 &&
             type_eq(a->left, b->left) && type_eq(a->right, b->right);
    case TypeKind::CaseClose:
      return a->subj == b->subj && type_eq(a->left, b->left);
    case TypeKind::CaseChan:
      return a->subj == b->subj && a->bind1 == b->bind1 && type_eq(a->left, b->left);
  }
  return false;
}

bool proc_eq(const ProcP& a, const ProcP& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ProcKind::Close:
      return a->chan == b->chan;
    case ProcKind::Wait:
      return a->chan == b->chan && proc_eq(a->cont, b->cont);
    case ProcKind::SendLabel:
      return a->chan == b->chan && a->label == b->label && proc_eq(a->cont, b->cont);
    case ProcKind::RecvLabel: {
      if (a->chan != b->chan || a->branches.size() != b->branches.size()) return false;
      for (size_t i = 0; i < a->branches.size(); ++i) {
        if (a->branches[i].first != b->branches[i].first) return false;
        if (!proc_eq(a->branches[i].second, b->branches[i].second)) return false;
      }
      return true;
    }
    case ProcKind::SendChan:
      return a->chan == b->chan && a->bind == b->bind &&
             proc_eq(a->cont, b->cont) && proc_eq(a->cont2, b->cont2);
    case ProcKind::RecvChan:
      return a->chan == b->chan && a->bind == b->bind && proc_eq(a->cont, b->cont);
    case ProcKind::Par:
      return a->chan == b->chan && proc_eq(a->cont, b->cont) && proc_eq(a->cont2, b->cont2);
    case ProcKind::New: {
      if (a->bindings.size() != b->bindings.size()) return false;
      for (size_t i = 0; i < a->bindings.size(); ++i) {
        if (a->bindings[i].first != b->bindings[i].first) return false;
        if (!type_eq(a->bindings[i].second, b->bindings[i].second)) return false;
      }
      return proc_eq(a->cont, b->cont);
    }
  }
  return false;
}

}  // namespace

TypeP canon(const TypeP& t) { return canon_type(t, CanonEnv{}); }
ProcP canon(const ProcP& p) { return canon_proc(p, CanonEnv{}); }

bool alpha_eq(const TypeP& a, const TypeP& b) { return type_eq(canon(a), canon(b)); }
bool alpha_eq(const ProcP& a, const ProcP& b) { return proc_eq(canon(a), canon(b)); }

// ---------- principal channel ----------

std::optional<Chan> princ(const ProcP& p) {
  switch (p->kind) {
    case ProcKind::Close:
    case ProcKind::Wait:
    case ProcKind::SendLabel:
    case ProcKind::RecvLabel:
    case ProcKind::SendChan:
    case ProcKind::RecvChan:
      return p->chan;
    case ProcKind::Par:
    case ProcKind::New:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------- well-formedness ----------

void wf_spec(const Spec& s, const NameTable& names) {
  std::set<Chan> domain;
  auto add_name = [&](Chan c) {
    if (!domain.insert(c).second)
      throw WfError("duplicate channel name in specification: " + names.chan_display(c), Pos{});
  };
  for (auto& [c, t] : s.ambient.items) add_name(c);
  for (auto& iface : s.interfaces) {
    for (auto& [c, t] : iface.used.items) add_name(c);
    for (auto& [c, t] : iface.internal.items) add_name(c);
    add_name(iface.provided);
  }
  auto check_type = [&](Chan owner, const TypeP& t) {
    for (Chan c : free_channels(t))
      if (!domain.count(c))
        throw WfError("type of " + names.chan_display(owner) + " observes channel " +
                          names.chan_display(c) + " which is not typed by the specification",
                      Pos{});
  };
  for (auto& [c, t] : s.ambient.items) check_type(c, t);
  for (auto& iface : s.interfaces) {
    for (auto& [c, t] : iface.used.items) check_type(c, t);
    for (auto& [c, t] : iface.internal.items) check_type(c, t);
    check_type(iface.provided, iface.ptype);
  }
}

// ---------- operator counting ----------

size_t op_count(const TypeP& t) {
  switch (t->kind) {
    case TypeKind::One:
      return 1;
    case TypeKind::IChoice:
    case TypeKind::EChoice:
    case TypeKind::CaseLabel: {
      size_t n = 1;
      for (auto& [l, b] : t->branches) n += op_count(b);
      return n;
    }
    case TypeKind::Tensor:
    case TypeKind::Lolly:
      return 1 + op_count(t->left) + op_count(t->right);
    case TypeKind::CaseClose:
    case TypeKind::CaseChan:
      return 1 + op_count(t->left);
  }
  return 1;
}

size_t op_count(const Ctx& c) {
  size_t n = 0;
  for (auto& [name, t] : c.items) n += op_count(t);
  return n;
}

size_t op_count(const Spec& s) {
  size_t n = op_count(s.ambient);
  for (auto& iface : s.interfaces)
    n += op_count(iface.used) + op_count(iface.internal) + op_count(iface.ptype);
  return n;
}

// ---------- printing ----------

namespace {

// Display-name scope that renames clashing binders with primes so output
// reparses to an alpha-equivalent term.
struct PrintScope {
  const NameTable& names;
  std::unordered_map<int32_t, std::string> printed;
  std::unordered_set<std::string> taken;

  explicit PrintScope(const NameTable& n) : names(n) {}

  std::string see_free(Chan c) {
    auto it = printed.find(c.id);
    if (it != printed.end()) return it->second;
    std::string base = names.chan_display(c);
    printed[c.id] = base;
    taken.insert(base);
    return base;
  }
  std::string bind(Chan c) {
    std::string base = names.chan_display(c);
    std::string name = base;
    while (taken.count(name)) name += "'";
    printed[c.id] = name;
    taken.insert(name);
    return name;
  }
};

void print_type(const TypeP& t, PrintScope& sc, std::ostream& os);

void print_choice_body(const TypeP& t, PrintScope& sc, std::ostream& os) {
  bool first = true;
  for (auto& [l, b] : t->branches) {
    if (!first) os << ", ";
    first = false;
    os << sc.names.label_text(l) << ": ";
    print_type(b, sc, os);
  }
}

void print_type(const TypeP& t, PrintScope& sc, std::ostream& os) {
  switch (t->kind) {
    case TypeKind::One:
      os << "1";
      return;
    case TypeKind::IChoice:
      os << "+{";
      print_choice_body(t, sc, os);
      os << "}";
      return;
    case TypeKind::EChoice:
      os << "&{";
      print_choice_body(t, sc, os);
      os << "}";
      return;
    case TypeKind::Tensor:
    case TypeKind::Lolly: {
      PrintScope sc1 = sc;
      std::string y = sc1.bind(t->bind2);
      PrintScope sc2 = sc;
      std::string x = sc2.bind(t->bind1);
      os << "(" << x << ": ";
      print_type(t->left, sc1, os);
      os << ")" << (t->kind == TypeKind::Tensor ? " * " : " -o ") << "(" << y << ": ";
      print_type(t->right, sc2, os);
      os << ")";
      return;
    }
    case TypeKind::CaseClose:
      os << "CASE " << sc.see_free(t->subj) << " {close => ";
      print_type(t->left, sc, os);
      os << "}";
      return;
    case TypeKind::CaseLabel: {
      os << "CASE " << sc.see_free(t->subj) << " {";
      bool first = true;
      for (auto& [l, b] : t->branches) {
        if (!first) os << " | ";
        first = false;
        os << sc.names.label_text(l) << " => ";
        print_type(b, sc, os);
      }
      os << "}";
      return;
    }
    case TypeKind::CaseChan: {
      os << "CASE " << sc.see_free(t->subj) << " {chan ";
      PrintScope sc1 = sc;
      os << sc1.bind(t->bind1) << " => ";
      print_type(t->left, sc1, os);
      os << "}";
      return;
    }
  }
}

void print_proc(const ProcP& p, PrintScope& sc, std::ostream& os) {
  switch (p->kind) {
    case ProcKind::Close:
      os << "close " << sc.see_free(p->chan);
      return;
    case ProcKind::Wait:
      os << "wait " << sc.see_free(p->chan) << "; ";
      print_proc(p->cont, sc, os);
      return;
    case ProcKind::SendLabel:
      os << sc.see_free(p->chan) << "." << sc.names.label_text(p->label) << "; ";
      print_proc(p->cont, sc, os);
      return;
    case ProcKind::RecvLabel: {
      os << "case " << sc.see_free(p->chan) << " {";
      bool first = true;
      for (auto& [l, q] : p->branches) {
        if (!first) os << " | ";
        first = false;
        os << sc.names.label_text(l) << " => ";
        print_proc(q, sc, os);
      }
      os << "}";
      return;
    }
    case ProcKind::SendChan: {
      std::string a = sc.see_free(p->chan);
      PrintScope sc1 = sc;
      std::string b = sc1.bind(p->bind);
      os << "send " << a << " (" << b << " -> ";
      print_proc(p->cont, sc1, os);
      os << "); ";
      print_proc(p->cont2, sc, os);
      return;
    }
    case ProcKind::RecvChan: {
      std::string a = sc.see_free(p->chan);
      std::string b = sc.bind(p->bind);
      os << "recv " << b << " <- " << a << "; ";
      print_proc(p->cont, sc, os);
      return;
    }
    case ProcKind::Par: {
      os << "(";
      print_proc(p->cont, sc, os);
      os << ") |[" << sc.see_free(p->chan) << "]| (";
      print_proc(p->cont2, sc, os);
      os << ")";
      return;
    }
    case ProcKind::New: {
      os << "new (";
      bool first = true;
      std::vector<std::string> bound;
      for (auto& [c, t] : p->bindings) bound.push_back(sc.bind(c));
      size_t i = 0;
      for (auto& [c, t] : p->bindings) {
        if (!first) os << ", ";
        first = false;
        os << bound[i++] << ": ";
        print_type(t, sc, os);
      }
      os << ") in (";
      print_proc(p->cont, sc, os);
      os << ")";
      return;
    }
  }
}

void print_ctx(const Ctx& c, PrintScope& sc, std::ostream& os) {
  bool first = true;
  for (auto& [name, t] : c.items) {
    if (!first) os << ", ";
    first = false;
    os << sc.see_free(name) << ": ";
    print_type(t, sc, os);
  }
}

}  // namespace

std::string type_text(const TypeP& t, const NameTable& names) {
  std::ostringstream os;
  PrintScope sc(names);
  print_type(t, sc, os);
  return os.str();
}

std::string proc_text(const ProcP& p, const NameTable& names) {
  std::ostringstream os;
  PrintScope sc(names);
  print_proc(p, sc, os);
  return os.str();
}

std::string ctx_text(const Ctx& c, const NameTable& names) {
  std::ostringstream os;
  PrintScope sc(names);
  print_ctx(c, sc, os);
  return os.str();
}

std::string spec_text(const Spec& s, const NameTable& names) {
  std::ostringstream os;
  PrintScope sc(names);
  os << "[";
  print_ctx(s.ambient, sc, os);
  os << "] |-";
  bool first = true;
  for (auto& iface : s.interfaces) {
    os << (first ? " " : " ; ");
    first = false;
    os << "(";
    print_ctx(iface.used, sc, os);
    os << " ; ";
    print_ctx(iface.internal, sc, os);
    os << " ; " << sc.see_free(iface.provided) << ": ";
    print_type(iface.ptype, sc, os);
    os << ")";
  }
  if (s.interfaces.empty()) os << " .";
  return os.str();
}

std::string decl_text(const Decl& d, const NameTable& names) {
  std::ostringstream os;
  PrintScope sc(names);
  const Interface& iface = d.spec.interfaces.at(0);
  os << "proc " << d.name;
  if (!d.spec.ambient.empty()) {
    os << " [";
    print_ctx(d.spec.ambient, sc, os);
    os << "]";
  }
  os << " (";
  print_ctx(iface.used, sc, os);
  os << ")";
  if (!iface.internal.empty()) {
    os << " {";
    print_ctx(iface.internal, sc, os);
    os << "}";
  }
  os << " |- " << sc.see_free(iface.provided) << ": ";
  print_type(iface.ptype, sc, os);
  os << " =\n  ";
  print_proc(d.body, sc, os);
  os << "\n";
  return os.str();
}

std::string program_text(const Program& prog) {
  std::ostringstream os;
  for (auto& d : prog.decls) os << decl_text(d, prog.names) << "\n";
  return os.str();
}

}  // namespace most
