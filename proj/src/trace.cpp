#include "most/trace.hpp"

#include <algorithm>
#include <cassert>
#include <iostream>
#include <sstream>
#include <unordered_map>

namespace most {

namespace {

bool g_interleave_debug = false;

using Raw = std::vector<TraceElem>;

int32_t min_id(const Raw& t, int32_t acc) {
  for (auto& e : t) {
    acc = std::min(acc, e.carrier.id);
    for (Chan b : e.binders) acc = std::min(acc, b.id);
  }
  return acc;
}

// Renames free carrier occurrences of `from`. Binders are assumed distinct
// from both names.
void raw_subst(Raw& t, Chan from, Chan to) {
  for (auto& e : t)
    if (e.carrier == from) e.carrier = to;
}

// Renames every binder in t to a fresh id drawn from the descending counter.
void uniquify(Raw& t, int32_t& next) {
  for (size_t i = 0; i < t.size(); ++i) {
    for (Chan& b : t[i].binders) {
      Chan fresh{next--};
      for (size_t j = i + 1; j < t.size(); ++j) {
        if (t[j].carrier == b) t[j].carrier = fresh;
        for (Chan& b2 : t[j].binders)
          if (b2 == b) b2 = fresh;  // shadowing in non-canonical input
      }
      b = fresh;
    }
  }
}

std::optional<Obs> elem_obs(const TraceElem& e) {
  Obs o;
  o.carrier = e.carrier;
  switch (e.msg) {
    case MsgKind::Close:
      if (!e.binders.empty()) return std::nullopt;
      o.kind = MsgKind::Close;
      return o;
    case MsgKind::Label:
      if (!e.binders.empty()) return std::nullopt;
      o.kind = MsgKind::Label;
      o.label = e.label;
      return o;
    case MsgKind::Chan:
      if (e.binders.size() != 1) return std::nullopt;
      o.kind = MsgKind::Chan;
      o.fresh = e.binders[0];
      return o;
  }
  return std::nullopt;
}

std::optional<Raw> raw_reduce(const Raw& t, const Obs& pi) {
  Raw out;
  out.reserve(t.size());
  for (size_t i = 0; i < t.size(); ++i) {
    const TraceElem& e = t[i];
    if (e.carrier != pi.carrier) {
      out.push_back(e);
      continue;
    }
    if (e.sign != Sign::Constr) return std::nullopt;
    // the constraint must be satisfied by exactly this observation
    if (e.msg != pi.kind) return std::nullopt;
    if (e.msg == MsgKind::Label && e.label != pi.label) return std::nullopt;
    Raw tail(t.begin() + static_cast<ptrdiff_t>(i) + 1, t.end());
    if (e.msg == MsgKind::Chan) {
      assert(e.binders.size() == 1);
      raw_subst(tail, e.binders[0], pi.fresh);
    }
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
  }
  return out;  // observation on a channel absent from the trace
}

void raw_prefix_all(const TraceElem& head, std::vector<Raw>& tails) {
  for (auto& t : tails) t.insert(t.begin(), head);
}

std::vector<Raw> raw_interleave(const Raw& t1, const Raw& t2) {
  if (t1.empty()) return {t2};
  if (t2.empty()) return {t1};
  const TraceElem& h1 = t1.front();
  const TraceElem& h2 = t2.front();
  Raw tail1(t1.begin() + 1, t1.end());
  Raw tail2(t2.begin() + 1, t2.end());

  if (h1.carrier == h2.carrier) {
    if (!h1.same_message(h2)) {
      if (g_interleave_debug)
        std::cerr << "[interleave] ill-defined: mismatched messages on a shared carrier\n";
      return {};
    }
    bool sync = (h1.sign == Sign::Out && h2.sign == Sign::In) ||
                (h1.sign == Sign::In && h2.sign == Sign::Out);
    bool constr = h1.sign == Sign::Constr || h2.sign == Sign::Constr;
    if (!sync && !constr) {
      if (g_interleave_debug)
        std::cerr << "[interleave] ill-defined: signs "
                  << static_cast<int>(h1.sign) << "/" << static_cast<int>(h2.sign)
                  << " cannot synchronize\n";
      return {};
    }
    TraceElem head = h1;
    if (sync) {
      head.sign = Sign::Sync;
    } else {
      // keep the non-constraint sign; both constraints stay a constraint
      head.sign = (h1.sign == Sign::Constr) ? h2.sign : h1.sign;
    }
    if (h1.msg == MsgKind::Chan && h1.binders.size() == 1) {
      // both traces must bind the same transmitted name
      head.binders = h1.binders;
      raw_subst(tail2, h2.binders[0], h1.binders[0]);
    }
    auto rest = raw_interleave(tail1, tail2);
    raw_prefix_all(head, rest);
    return rest;
  }

  // commuting case
  std::vector<Raw> out;
  if (auto pi1 = elem_obs(h1)) {
    if (auto t2r = raw_reduce(t2, *pi1)) {
      auto rest = raw_interleave(tail1, *t2r);
      raw_prefix_all(h1, rest);
      out.insert(out.end(), rest.begin(), rest.end());
    }
  }
  if (auto pi2 = elem_obs(h2)) {
    if (auto t1r = raw_reduce(t1, *pi2)) {
      auto rest = raw_interleave(*t1r, tail2);
      raw_prefix_all(h2, rest);
      out.insert(out.end(), rest.begin(), rest.end());
    }
  }
  return out;
}

}  // namespace

void set_interleave_debug(bool on) { g_interleave_debug = on; }

TraceElem elem_close(Sign s, Chan a) {
  TraceElem e;
  e.sign = s;
  e.msg = MsgKind::Close;
  e.carrier = a;
  return e;
}
TraceElem elem_label(Sign s, Chan a, Lab l) {
  TraceElem e;
  e.sign = s;
  e.msg = MsgKind::Label;
  e.carrier = a;
  e.label = l;
  return e;
}
TraceElem elem_chan(Sign s, Chan a, Chan bound) {
  TraceElem e;
  e.sign = s;
  e.msg = MsgKind::Chan;
  e.carrier = a;
  e.binders = {bound};
  return e;
}

Obs obs_close(Chan a) { return Obs{MsgKind::Close, a, Lab{}, Chan{}}; }
Obs obs_label(Chan a, Lab l) { return Obs{MsgKind::Label, a, l, Chan{}}; }
Obs obs_chan(Chan a, Chan fresh) { return Obs{MsgKind::Chan, a, Lab{}, fresh}; }

std::vector<Chan> obs_free_names(const Obs& o) {
  if (o.kind == MsgKind::Chan) return {o.carrier, o.fresh};
  return {o.carrier};
}

std::optional<Obs> obsc(const TraceElem& e) { return elem_obs(e); }

Trace Trace::canon(std::vector<TraceElem> raw) {
  // canonical binder ids must not capture free names (dangling negative ids
  // can appear in inputs, e.g. after erasing a binding constraint)
  std::set<int32_t> free_ids;
  for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
    for (Chan b : it->binders) free_ids.erase(b.id);
    free_ids.insert(it->carrier.id);
  }
  std::unordered_map<int32_t, int32_t> map;
  int32_t next = -1;
  auto fresh_id = [&]() {
    while (free_ids.count(next)) --next;
    return next--;
  };
  for (auto& e : raw) {
    auto it = map.find(e.carrier.id);
    if (it != map.end()) e.carrier = Chan{it->second};
    for (Chan& b : e.binders) {
      int32_t fresh = fresh_id();
      map[b.id] = fresh;
      b = Chan{fresh};
    }
  }
  Trace t;
  t.elems = std::move(raw);
  return t;
}

size_t TraceHash::operator()(const Trace& t) const {
  size_t h = 1469598103934665603ull;
  auto mix = [&](size_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (auto& e : t.elems) {
    mix(static_cast<size_t>(e.sign));
    mix(static_cast<size_t>(e.msg));
    mix(static_cast<size_t>(static_cast<uint32_t>(e.carrier.id)));
    if (e.msg == MsgKind::Label) mix(static_cast<size_t>(static_cast<uint32_t>(e.label.id)));
    mix(e.binders.size());
  }
  return h;
}

std::vector<Chan> free_names(const Trace& t) {
  std::set<Chan> out;
  for (auto it = t.elems.rbegin(); it != t.elems.rend(); ++it) {
    for (Chan b : it->binders) out.erase(b);
    out.insert(it->carrier);
  }
  return {out.begin(), out.end()};
}

Trace delete_names(const Trace& t, const std::set<Chan>& names) {
  std::set<Chan> x = names;
  Raw out;
  for (auto& e : t.elems) {
    if (x.count(e.carrier)) {
      for (Chan b : e.binders) x.insert(b);
    } else {
      out.push_back(e);
    }
  }
  return Trace::canon(std::move(out));
}

Trace erase_constraints(const Trace& t) {
  Raw out;
  for (auto& e : t.elems)
    if (e.sign != Sign::Constr) out.push_back(e);
  return Trace::canon(std::move(out));
}

std::optional<Trace> reduce_trace(const Trace& t, const Obs& pi) {
  Raw raw = t.elems;
  int32_t next = min_id(raw, -1);
  for (Chan c : obs_free_names(pi)) next = std::min(next, c.id);
  --next;
  uniquify(raw, next);
  auto r = raw_reduce(raw, pi);
  if (!r) return std::nullopt;
  return Trace::canon(std::move(*r));
}

TraceSet interleave(const Trace& t1, const Trace& t2) {
  Raw r1 = t1.elems;
  Raw r2 = t2.elems;
  int32_t next = std::min(min_id(r1, -1), min_id(r2, -1)) - 1;
  uniquify(r1, next);
  uniquify(r2, next);
  TraceSet out;
  for (auto& r : raw_interleave(r1, r2)) out.insert(Trace::canon(std::move(r)));
  return out;
}

TraceSet interleave_sets(const TraceSet& t1, const TraceSet& t2, size_t limit) {
  TraceSet out;
  for (auto& a : t1)
    for (auto& b : t2) {
      for (auto& r : interleave(a, b)) {
        out.insert(r);
        if (limit && out.size() > limit)
          throw ResourceLimit("interleaving fan-out exceeds limit");
      }
    }
  return out;
}

bool safely_constrained(const Trace& t) {
  std::set<Chan> constr, observable;
  for (auto& e : t.elems)
    (e.sign == Sign::Constr ? constr : observable).insert(e.carrier);
  for (Chan c : constr)
    if (observable.count(c)) return false;
  return true;
}

TraceSet prefix_set(const TraceElem& head, const TraceSet& tails) {
  TraceSet out;
  for (auto& t : tails) {
    Raw raw;
    raw.reserve(t.elems.size() + 1);
    raw.push_back(head);
    raw.insert(raw.end(), t.elems.begin(), t.elems.end());
    out.insert(Trace::canon(std::move(raw)));
  }
  return out;
}

TraceSet erase_constraints(const TraceSet& ts) {
  TraceSet out;
  for (auto& t : ts) out.insert(erase_constraints(t));
  return out;
}

TraceSet delete_names(const TraceSet& ts, const std::set<Chan>& names) {
  TraceSet out;
  for (auto& t : ts) out.insert(delete_names(t, names));
  return out;
}

bool set_eq(const TraceSet& a, const TraceSet& b) {
  if (a.size() != b.size()) return false;
  for (auto& t : a)
    if (!b.count(t)) return false;
  return true;
}

std::string trace_text(const Trace& t, const NameTable& names) {
  if (t.elems.empty()) return ".";
  std::ostringstream os;
  bool first = true;
  for (auto& e : t.elems) {
    if (!first) os << " ; ";
    first = false;
    switch (e.sign) {
      case Sign::Out: os << "O "; break;
      case Sign::In: os << "I "; break;
      case Sign::Sync: os << "S "; break;
      case Sign::Constr: os << "C "; break;
    }
    switch (e.msg) {
      case MsgKind::Close:
        os << "close " << names.chan_display(e.carrier);
        break;
      case MsgKind::Label:
        os << names.chan_display(e.carrier) << "." << names.label_text(e.label);
        break;
      case MsgKind::Chan:
        os << "chan " << names.chan_display(e.carrier);
        break;
    }
    if (!e.binders.empty()) {
      os << " [";
      bool bf = true;
      for (Chan b : e.binders) {
        if (!bf) os << ",";
        bf = false;
        os << names.chan_display(b);
      }
      os << "]";
    }
  }
  return os.str();
}

std::vector<std::string> sorted_trace_texts(const TraceSet& ts, const NameTable& names) {
  std::vector<std::string> out;
  out.reserve(ts.size());
  for (auto& t : ts) out.push_back(trace_text(t, names));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace most
