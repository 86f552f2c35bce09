#include "most/typesem.hpp"

#include <cassert>
#include <unordered_map>

namespace most {

// ---------- type reduction ----------

std::optional<TypeP> reduce_type(const TypeP& t, const Obs& pi) {
  switch (t->kind) {
    case TypeKind::One:
      return t;
    case TypeKind::IChoice:
    case TypeKind::EChoice: {
      std::vector<std::pair<Lab, TypeP>> bs;
      bs.reserve(t->branches.size());
      for (auto& [l, b] : t->branches) {
        auto r = reduce_type(b, pi);
        if (!r) return std::nullopt;
        bs.emplace_back(l, std::move(*r));
      }
      return t_choice(t->kind, std::move(bs));
    }
    case TypeKind::Tensor:
    case TypeKind::Lolly: {
      auto a = reduce_type(t->left, pi);
      if (!a) return std::nullopt;
      auto b = reduce_type(t->right, pi);
      if (!b) return std::nullopt;
      auto mk = (t->kind == TypeKind::Tensor) ? t_tensor : t_lolly;
      return mk(t->bind1, std::move(*a), t->bind2, std::move(*b));
    }
    case TypeKind::CaseClose: {
      if (t->subj == pi.carrier) {
        if (pi.kind != MsgKind::Close) return std::nullopt;
        return t->left;
      }
      auto r = reduce_type(t->left, pi);
      if (!r) return std::nullopt;
      return t_case_close(t->subj, std::move(*r));
    }
    case TypeKind::CaseLabel: {
      if (t->subj == pi.carrier) {
        if (pi.kind != MsgKind::Label) return std::nullopt;
        for (auto& [l, b] : t->branches)
          if (l == pi.label) return b;
        return std::nullopt;
      }
      std::vector<std::pair<Lab, TypeP>> bs;
      bs.reserve(t->branches.size());
      for (auto& [l, b] : t->branches) {
        auto r = reduce_type(b, pi);
        if (!r) return std::nullopt;
        bs.emplace_back(l, std::move(*r));
      }
      return t_case_label(t->subj, std::move(bs));
    }
    case TypeKind::CaseChan: {
      if (t->subj == pi.carrier) {
        if (pi.kind != MsgKind::Chan) return std::nullopt;
        return subst_chan(t->left, t->bind1, pi.fresh);
      }
      auto r = reduce_type(t->left, pi);
      if (!r) return std::nullopt;
      return t_case_chan(t->subj, t->bind1, std::move(*r));
    }
  }
  return std::nullopt;
}

std::optional<Ctx> reduce_ctx(const Ctx& c, const Obs& pi) {
  Ctx out;
  out.items.reserve(c.items.size());
  for (auto& [name, t] : c.items) {
    auto r = reduce_type(t, pi);
    if (!r) return std::nullopt;
    out.add(name, std::move(*r));
  }
  return out;
}

std::optional<Interface> reduce_iface(const Interface& i, const Obs& pi) {
  Interface out;
  auto u = reduce_ctx(i.used, pi);
  if (!u) return std::nullopt;
  auto n = reduce_ctx(i.internal, pi);
  if (!n) return std::nullopt;
  auto p = reduce_type(i.ptype, pi);
  if (!p) return std::nullopt;
  out.used = std::move(*u);
  out.internal = std::move(*n);
  out.provided = i.provided;
  out.ptype = std::move(*p);
  return out;
}

std::optional<Spec> reduce_spec(const Spec& s, const Obs& pi) {
  const TypeP* entry = s.ambient.find(pi.carrier);
  if (!entry) return std::nullopt;
  const TypeP& t = *entry;
  Ctx rest;
  for (auto& [name, ty] : s.ambient.items)
    if (name != pi.carrier) rest.add(name, ty);
  Spec out;
  auto amb = reduce_ctx(rest, pi);
  if (!amb) return std::nullopt;
  out.ambient = std::move(*amb);
  switch (pi.kind) {
    case MsgKind::Close:
      if (t->kind != TypeKind::One) return std::nullopt;
      break;
    case MsgKind::Label: {
      if (t->kind != TypeKind::IChoice && t->kind != TypeKind::EChoice) return std::nullopt;
      const TypeP* branch = nullptr;
      for (auto& [l, b] : t->branches)
        if (l == pi.label) branch = &b;
      if (!branch) return std::nullopt;
      out.ambient.add(pi.carrier, *branch);
      break;
    }
    case MsgKind::Chan: {
      if (t->kind != TypeKind::Tensor && t->kind != TypeKind::Lolly) return std::nullopt;
      out.ambient.add(pi.fresh, subst_chan(t->left, t->bind2, pi.carrier));
      out.ambient.add(pi.carrier, subst_chan(t->right, t->bind1, pi.fresh));
      break;
    }
  }
  for (auto& iface : s.interfaces) {
    auto r = reduce_iface(iface, pi);
    if (!r) return std::nullopt;
    out.interfaces.push_back(std::move(*r));
  }
  return out;
}

// ---------- specification trace semantics ----------

namespace {

void ser_int(std::string& out, int32_t v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

void ser_type(std::string& out, const TypeP& t) {
  ser_int(out, static_cast<int32_t>(t->kind));
  switch (t->kind) {
    case TypeKind::One:
      break;
    case TypeKind::IChoice:
    case TypeKind::EChoice:
    case TypeKind::CaseLabel:
      if (t->kind == TypeKind::CaseLabel) ser_int(out, t->subj.id);
      ser_int(out, static_cast<int32_t>(t->branches.size()));
      for (auto& [l, b] : t->branches) {
        ser_int(out, l.id);
        ser_type(out, b);
      }
      break;
    case TypeKind::Tensor:
    case TypeKind::Lolly:
      ser_int(out, t->bind1.id);
      ser_int(out, t->bind2.id);
      ser_type(out, t->left);
      ser_type(out, t->right);
      break;
    case TypeKind::CaseClose:
      ser_int(out, t->subj.id);
      ser_type(out, t->left);
      break;
    case TypeKind::CaseChan:
      ser_int(out, t->subj.id);
      ser_int(out, t->bind1.id);
      ser_type(out, t->left);
      break;
  }
}

void ser_ctx(std::string& out, const Ctx& c) {
  // order-insensitive key: contexts are unordered maps semantically
  std::vector<std::pair<Chan, TypeP>> items = c.items;
  std::sort(items.begin(), items.end(),
            [](auto& a, auto& b) { return a.first < b.first; });
  ser_int(out, static_cast<int32_t>(items.size()));
  for (auto& [name, t] : items) {
    ser_int(out, name.id);
    ser_type(out, t);
  }
}

std::string ser_spec(const Spec& s) {
  std::string out;
  ser_ctx(out, s.ambient);
  std::vector<const Interface*> ifaces;
  for (auto& i : s.interfaces) ifaces.push_back(&i);
  std::sort(ifaces.begin(), ifaces.end(),
            [](const Interface* a, const Interface* b) { return a->provided < b->provided; });
  ser_int(out, static_cast<int32_t>(ifaces.size()));
  for (auto* i : ifaces) {
    ser_ctx(out, i->used);
    ser_ctx(out, i->internal);
    ser_int(out, i->provided.id);
    ser_type(out, i->ptype);
  }
  return out;
}

std::string ser_trace(const Trace& t) {
  std::string out;
  for (auto& e : t.elems) {
    ser_int(out, static_cast<int32_t>(e.sign));
    ser_int(out, static_cast<int32_t>(e.msg));
    ser_int(out, e.carrier.id);
    if (e.msg == MsgKind::Label) ser_int(out, e.label.id);
    for (Chan b : e.binders) ser_int(out, b.id);
  }
  return out;
}

// Where the head element's carrier lives in the specification.
struct Loc {
  enum Kind { Ambient, Used, Internal, Provided } kind;
  size_t iface = 0;
};

std::optional<Loc> locate(const Spec& s, Chan a) {
  if (s.ambient.contains(a)) return Loc{Loc::Ambient, 0};
  for (size_t i = 0; i < s.interfaces.size(); ++i) {
    if (s.interfaces[i].provided == a) return Loc{Loc::Provided, i};
    if (s.interfaces[i].used.contains(a)) return Loc{Loc::Used, i};
    if (s.interfaces[i].internal.contains(a)) return Loc{Loc::Internal, i};
  }
  return std::nullopt;
}

// Applies a head element to a specification, returning every successor
// state (several for the interface-splitting clauses; empty when no clause
// matches). For Chan messages, `fresh` is the name standing for the
// transmitted channel.
std::vector<Spec> successors(const Spec& s, const TraceElem& head, Chan fresh) {
  std::vector<Spec> out;
  auto loc = locate(s, head.carrier);
  if (!loc) return out;
  Chan a = head.carrier;
  Obs pi;
  switch (head.msg) {
    case MsgKind::Close: pi = obs_close(a); break;
    case MsgKind::Label: pi = obs_label(a, head.label); break;
    case MsgKind::Chan: pi = obs_chan(a, fresh); break;
  }

  auto reduce_others = [&](size_t skip, Spec& dst) -> bool {
    auto amb = reduce_ctx(s.ambient, pi);
    if (!amb) return false;
    dst.ambient = std::move(*amb);
    for (size_t i = 0; i < s.interfaces.size(); ++i) {
      if (i == skip) continue;
      auto r = reduce_iface(s.interfaces[i], pi);
      if (!r) return false;
      dst.interfaces.push_back(std::move(*r));
    }
    return true;
  };

  if (loc->kind == Loc::Ambient) {
    if (head.sign != Sign::Constr) return out;
    auto next = reduce_spec(s, pi);
    if (next) out.push_back(std::move(*next));
    return out;
  }

  const Interface& iface = s.interfaces[loc->iface];

  if (loc->kind == Loc::Provided) {
    const TypeP& t = iface.ptype;
    switch (t->kind) {
      case TypeKind::One: {
        if (head.sign != Sign::Out || head.msg != MsgKind::Close) return out;
        if (!iface.used.empty() || !iface.internal.empty()) return out;
        Spec next;
        if (reduce_others(loc->iface, next)) out.push_back(std::move(next));
        return out;
      }
      case TypeKind::IChoice:
      case TypeKind::EChoice: {
        Sign want = (t->kind == TypeKind::IChoice) ? Sign::Out : Sign::In;
        if (head.sign != want || head.msg != MsgKind::Label) return out;
        const TypeP* branch = nullptr;
        for (auto& [l, b] : t->branches)
          if (l == head.label) branch = &b;
        if (!branch) return out;
        Spec next;
        if (!reduce_others(loc->iface, next)) return out;
        auto u = reduce_ctx(iface.used, pi);
        auto n = reduce_ctx(iface.internal, pi);
        if (!u || !n) return out;
        Interface ni{std::move(*u), std::move(*n), a, *branch};
        next.interfaces.push_back(std::move(ni));
        out.push_back(std::move(next));
        return out;
      }
      case TypeKind::Tensor: {
        if (head.sign != Sign::Out || head.msg != MsgKind::Chan) return out;
        TypeP sent = subst_chan(t->left, t->bind2, a);
        TypeP kept = subst_chan(t->right, t->bind1, fresh);
        // arbitrary partition of the used and internal contexts
        size_t nu = iface.used.size(), ni = iface.internal.size();
        size_t total = nu + ni;
        for (size_t mask = 0; mask < (size_t{1} << total); ++mask) {
          Spec next;
          if (!reduce_others(loc->iface, next)) return out;
          Interface i1, i2;
          bool ok = true;
          for (size_t k = 0; k < nu && ok; ++k) {
            auto r = reduce_type(iface.used.items[k].second, pi);
            if (!r) ok = false;
            else ((mask >> k) & 1 ? i1 : i2).used.add(iface.used.items[k].first, *r);
          }
          for (size_t k = 0; k < ni && ok; ++k) {
            auto r = reduce_type(iface.internal.items[k].second, pi);
            if (!r) ok = false;
            else ((mask >> (nu + k)) & 1 ? i1 : i2).internal.add(iface.internal.items[k].first, *r);
          }
          if (!ok) return out;
          i1.provided = fresh;
          i1.ptype = sent;
          i2.provided = a;
          i2.ptype = kept;
          next.interfaces.push_back(std::move(i1));
          next.interfaces.push_back(std::move(i2));
          out.push_back(std::move(next));
        }
        return out;
      }
      case TypeKind::Lolly: {
        if (head.sign != Sign::In || head.msg != MsgKind::Chan) return out;
        TypeP recv = subst_chan(t->left, t->bind2, a);
        TypeP kept = subst_chan(t->right, t->bind1, fresh);
        Spec next;
        if (!reduce_others(loc->iface, next)) return out;
        auto u = reduce_ctx(iface.used, pi);
        auto n = reduce_ctx(iface.internal, pi);
        if (!u || !n) return out;
        Interface ni{std::move(*u), std::move(*n), a, kept};
        ni.used.add(fresh, recv);
        next.interfaces.push_back(std::move(ni));
        out.push_back(std::move(next));
        return out;
      }
      default:
        return out;  // no clause reduces an observing provided type directly
    }
  }

  if (loc->kind == Loc::Used) {
    const TypeP& t = *iface.used.find(a);
    auto rest_used = [&]() {
      Ctx c;
      for (auto& [name, ty] : iface.used.items)
        if (name != a) c.add(name, ty);
      return c;
    };
    switch (t->kind) {
      case TypeKind::One: {
        if (head.sign != Sign::In || head.msg != MsgKind::Close) return out;
        Spec next;
        if (!reduce_others(loc->iface, next)) return out;
        auto u = reduce_ctx(rest_used(), pi);
        auto n = reduce_ctx(iface.internal, pi);
        auto pt = reduce_type(iface.ptype, pi);
        if (!u || !n || !pt) return out;
        next.interfaces.push_back(Interface{std::move(*u), std::move(*n), iface.provided, std::move(*pt)});
        out.push_back(std::move(next));
        return out;
      }
      case TypeKind::IChoice:
      case TypeKind::EChoice: {
        Sign want = (t->kind == TypeKind::IChoice) ? Sign::In : Sign::Out;
        if (head.sign != want || head.msg != MsgKind::Label) return out;
        const TypeP* branch = nullptr;
        for (auto& [l, b] : t->branches)
          if (l == head.label) branch = &b;
        if (!branch) return out;
        Spec next;
        if (!reduce_others(loc->iface, next)) return out;
        auto u = reduce_ctx(rest_used(), pi);
        auto n = reduce_ctx(iface.internal, pi);
        auto pt = reduce_type(iface.ptype, pi);
        if (!u || !n || !pt) return out;
        Interface ni{std::move(*u), std::move(*n), iface.provided, std::move(*pt)};
        ni.used.add(a, *branch);
        next.interfaces.push_back(std::move(ni));
        out.push_back(std::move(next));
        return out;
      }
      case TypeKind::Tensor: {
        if (head.sign != Sign::In || head.msg != MsgKind::Chan) return out;
        TypeP recv = subst_chan(t->left, t->bind2, a);
        TypeP kept = subst_chan(t->right, t->bind1, fresh);
        Spec next;
        if (!reduce_others(loc->iface, next)) return out;
        auto u = reduce_ctx(rest_used(), pi);
        auto n = reduce_ctx(iface.internal, pi);
        auto pt = reduce_type(iface.ptype, pi);
        if (!u || !n || !pt) return out;
        Interface ni{std::move(*u), std::move(*n), iface.provided, std::move(*pt)};
        ni.used.add(fresh, recv);
        ni.used.add(a, kept);
        next.interfaces.push_back(std::move(ni));
        out.push_back(std::move(next));
        return out;
      }
      case TypeKind::Lolly: {
        if (head.sign != Sign::Out || head.msg != MsgKind::Chan) return out;
        TypeP sent = subst_chan(t->left, t->bind2, a);
        TypeP kept = subst_chan(t->right, t->bind1, fresh);
        Ctx remaining = rest_used();
        size_t nu = remaining.size(), ni = iface.internal.size();
        size_t total = nu + ni;
        for (size_t mask = 0; mask < (size_t{1} << total); ++mask) {
          Spec next;
          if (!reduce_others(loc->iface, next)) return out;
          Interface i1, i2;
          bool ok = true;
          for (size_t k = 0; k < nu && ok; ++k) {
            auto r = reduce_type(remaining.items[k].second, pi);
            if (!r) ok = false;
            else ((mask >> k) & 1 ? i1 : i2).used.add(remaining.items[k].first, *r);
          }
          for (size_t k = 0; k < ni && ok; ++k) {
            auto r = reduce_type(iface.internal.items[k].second, pi);
            if (!r) ok = false;
            else ((mask >> (nu + k)) & 1 ? i1 : i2).internal.add(iface.internal.items[k].first, *r);
          }
          auto pt = reduce_type(iface.ptype, pi);
          if (!ok || !pt) return out;
          i1.provided = fresh;
          i1.ptype = sent;
          i2.used.add(a, kept);
          i2.provided = iface.provided;
          i2.ptype = std::move(*pt);
          next.interfaces.push_back(std::move(i1));
          next.interfaces.push_back(std::move(i2));
          out.push_back(std::move(next));
        }
        return out;
      }
      default:
        return out;
    }
  }

  // Internal position: synchronizations
  {
    const TypeP& t = *iface.internal.find(a);
    if (head.sign != Sign::Sync) return out;
    auto rest_internal = [&]() {
      Ctx c;
      for (auto& [name, ty] : iface.internal.items)
        if (name != a) c.add(name, ty);
      return c;
    };
    switch (t->kind) {
      case TypeKind::One: {
        if (head.msg != MsgKind::Close) return out;
        Spec next;
        if (!reduce_others(loc->iface, next)) return out;
        auto u = reduce_ctx(iface.used, pi);
        auto n = reduce_ctx(rest_internal(), pi);
        auto pt = reduce_type(iface.ptype, pi);
        if (!u || !n || !pt) return out;
        next.interfaces.push_back(Interface{std::move(*u), std::move(*n), iface.provided, std::move(*pt)});
        out.push_back(std::move(next));
        return out;
      }
      case TypeKind::IChoice:
      case TypeKind::EChoice: {
        if (head.msg != MsgKind::Label) return out;
        const TypeP* branch = nullptr;
        for (auto& [l, b] : t->branches)
          if (l == head.label) branch = &b;
        if (!branch) return out;
        Spec next;
        if (!reduce_others(loc->iface, next)) return out;
        auto u = reduce_ctx(iface.used, pi);
        auto n = reduce_ctx(rest_internal(), pi);
        auto pt = reduce_type(iface.ptype, pi);
        if (!u || !n || !pt) return out;
        Interface ni{std::move(*u), std::move(*n), iface.provided, std::move(*pt)};
        ni.internal.add(a, *branch);
        next.interfaces.push_back(std::move(ni));
        out.push_back(std::move(next));
        return out;
      }
      case TypeKind::Tensor:
      case TypeKind::Lolly: {
        if (head.msg != MsgKind::Chan) return out;
        TypeP moved = subst_chan(t->left, t->bind2, a);
        TypeP kept = subst_chan(t->right, t->bind1, fresh);
        Spec next;
        if (!reduce_others(loc->iface, next)) return out;
        auto u = reduce_ctx(iface.used, pi);
        auto n = reduce_ctx(rest_internal(), pi);
        auto pt = reduce_type(iface.ptype, pi);
        if (!u || !n || !pt) return out;
        Interface ni{std::move(*u), std::move(*n), iface.provided, std::move(*pt)};
        ni.internal.add(fresh, moved);
        ni.internal.add(a, kept);
        next.interfaces.push_back(std::move(ni));
        out.push_back(std::move(next));
        return out;
      }
      default:
        return out;
    }
  }
}

struct MemberCtx {
  NameTable& names;
  std::unordered_map<std::string, bool> memo;
};

bool member_rec(const Trace& t, const Spec& s, MemberCtx& ctx) {
  if (t.empty()) return s.interfaces.empty();
  std::string key = ser_trace(t) + '#' + ser_spec(s);
  auto it = ctx.memo.find(key);
  if (it != ctx.memo.end()) return it->second;

  const TraceElem& head = t.elems.front();
  Chan fresh{};
  std::vector<TraceElem> tail(t.elems.begin() + 1, t.elems.end());
  if (head.msg == MsgKind::Chan) {
    if (head.binders.size() != 1) {
      ctx.memo.emplace(std::move(key), false);
      return false;
    }
    fresh = ctx.names.fresh_chan(ctx.names.chan_display(head.binders[0]));
    for (auto& e : tail)
      if (e.carrier == head.binders[0]) e.carrier = fresh;
  } else if (!head.binders.empty()) {
    ctx.memo.emplace(std::move(key), false);
    return false;
  }
  Trace rest = Trace::canon(std::move(tail));

  bool found = false;
  [[maybe_unused]] size_t before = op_count(s);
  for (auto& next : successors(s, head, fresh)) {
    assert(op_count(next) < before);
    if (member_rec(rest, next, ctx)) {
      found = true;
      break;
    }
  }
  ctx.memo.emplace(std::move(key), found);
  return found;
}

struct EnumCtx {
  NameTable& names;
  size_t limit;
  std::unordered_map<std::string, TraceSet> memo;
};

// Every clause instance applicable to the state: candidate head shapes per
// entry position and weak-head type shape.
struct Candidate {
  TraceElem head;
  Chan fresh{};
};

std::vector<Candidate> candidates(const Spec& s, NameTable& names) {
  std::vector<Candidate> out;
  auto add_for = [&](Chan a, const TypeP& t, Sign close_sign, Sign label_out,
                     Sign label_in, Sign chan_sign_tensor, Sign chan_sign_lolly) {
    switch (t->kind) {
      case TypeKind::One:
        out.push_back({elem_close(close_sign, a), Chan{}});
        return;
      case TypeKind::IChoice:
        for (auto& [l, b] : t->branches) out.push_back({elem_label(label_out, a, l), Chan{}});
        return;
      case TypeKind::EChoice:
        for (auto& [l, b] : t->branches) out.push_back({elem_label(label_in, a, l), Chan{}});
        return;
      case TypeKind::Tensor: {
        Chan n = names.fresh_chan(names.chan_display(t->bind1));
        out.push_back({elem_chan(chan_sign_tensor, a, n), n});
        return;
      }
      case TypeKind::Lolly: {
        Chan n = names.fresh_chan(names.chan_display(t->bind1));
        out.push_back({elem_chan(chan_sign_lolly, a, n), n});
        return;
      }
      default:
        return;  // observing types admit no direct clause
    }
  };
  for (auto& [a, t] : s.ambient.items)
    add_for(a, t, Sign::Constr, Sign::Constr, Sign::Constr, Sign::Constr, Sign::Constr);
  for (auto& iface : s.interfaces) {
    add_for(iface.provided, iface.ptype, Sign::Out, Sign::Out, Sign::In, Sign::Out, Sign::In);
    for (auto& [a, t] : iface.used.items)
      add_for(a, t, Sign::In, Sign::In, Sign::Out, Sign::In, Sign::Out);
    for (auto& [a, t] : iface.internal.items)
      add_for(a, t, Sign::Sync, Sign::Sync, Sign::Sync, Sign::Sync, Sign::Sync);
  }
  return out;
}

TraceSet enumerate_rec(const Spec& s, EnumCtx& ctx) {
  std::string key = ser_spec(s);
  auto it = ctx.memo.find(key);
  if (it != ctx.memo.end()) return it->second;

  TraceSet out;
  if (s.interfaces.empty()) out.insert(Trace{});
  [[maybe_unused]] size_t before = op_count(s);
  for (auto& cand : candidates(s, ctx.names)) {
    TraceElem head = cand.head;
    if (head.msg == MsgKind::Chan) head.binders = {cand.fresh};
    for (auto& next : successors(s, head, cand.fresh)) {
      assert(op_count(next) < before);
      TraceSet tails = enumerate_rec(next, ctx);
      for (auto& t : prefix_set(head, tails)) {
        out.insert(t);
        if (ctx.limit && out.size() > ctx.limit)
          throw ResourceLimit("specification trace set exceeds limit");
      }
    }
  }
  ctx.memo.emplace(std::move(key), out);
  return out;
}

}  // namespace

bool spec_member(const Trace& t, const Spec& s, const NameTable& names) {
  NameTable local = names;
  MemberCtx ctx{local, {}};
  return member_rec(t, s, ctx);
}

TraceSet spec_enumerate(const Spec& s, const NameTable& names, size_t limit) {
  NameTable local = names;
  EnumCtx ctx{local, limit, {}};
  return enumerate_rec(s, ctx);
}

}  // namespace most
