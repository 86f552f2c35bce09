#include "most/check.hpp"

#include <cassert>
#include <future>
#include <sstream>

#include "most/typesem.hpp"

namespace most {

const char* err_kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::LeftoverChannels: return "LeftoverChannels";
    case ErrKind::MissingChannels: return "MissingChannels";
    case ErrKind::FocusStuck: return "FocusStuck";
    case ErrKind::LabelNotPermitted: return "LabelNotPermitted";
    case ErrKind::ConstraintIncompatible: return "ConstraintIncompatible";
    case ErrKind::SplitFailure: return "SplitFailure";
    case ErrKind::ShapeMismatch: return "ShapeMismatch";
  }
  return "?";
}

std::optional<std::pair<Trace, Trace>> par_compatible(const TraceSet& t1,
                                                      const TraceSet& t2) {
  for (auto& a : t1)
    for (auto& b : t2) {
      TraceSet process_side = interleave(erase_constraints(a), erase_constraints(b));
      TraceSet constrained = erase_constraints(interleave(a, b));
      if (!set_eq(process_side, constrained)) return std::make_pair(a, b);
    }
  return std::nullopt;
}

namespace {

struct CheckFail {
  CheckError err;
};

struct Checker {
  NameTable& names;
  CheckOptions opts;
  std::string current_rule;

  [[noreturn]] void fail(ErrKind kind, std::string msg, Pos pos, std::string judgment,
                         std::optional<std::pair<Trace, Trace>> witnesses = std::nullopt) {
    throw CheckFail{CheckError{kind, current_rule, std::move(msg), pos,
                               std::move(judgment), std::move(witnesses)}};
  }

  std::string show(const Judgment& j, const ProcP& p, std::optional<Chan> focus) {
    std::ostringstream os;
    os << ctx_text(j.ambient, names) << " ; " << ctx_text(j.internal, names)
       << " |- " << proc_text(p, names) << " :: ";
    bool first = true;
    for (auto& [c, t] : j.used.items) {
      if (!first) os << ", ";
      first = false;
      if (focus && *focus == c) os << "[";
      os << names.chan_display(c) << ": " << type_text(t, names);
      if (focus && *focus == c) os << "]";
    }
    os << " |- ";
    if (focus && *focus == j.provided) os << "[";
    os << names.chan_display(j.provided) << ": " << type_text(j.ptype, names);
    if (focus && *focus == j.provided) os << "]";
    return os.str();
  }

  DerivP node(DerivP parent, const char* rule, const Judgment& j, const ProcP& p,
              std::optional<Chan> focus = std::nullopt) {
    current_rule = rule;
    if (!opts.derivation) return nullptr;
    auto n = std::make_shared<DerivNode>();
    n->rule = rule;
    n->judgment = show(j, p, focus);
    if (parent) parent->kids.push_back(n);
    return n;
  }

  static void record(DerivP n, const TraceSet& out) {
    if (n) n->out = out;
  }

  // ---------- reductions over whole judgments ----------

  Ctx reduce_or_fail(const Ctx& c, const Obs& pi, const ProcP& p, const Judgment& j) {
    auto r = reduce_ctx(c, pi);
    if (r) return *r;
    // find the offending entry for the diagnostic
    for (auto& [name, t] : c.items)
      if (!reduce_type(t, pi)) {
        ErrKind kind = pi.kind == MsgKind::Label ? ErrKind::LabelNotPermitted
                                                 : ErrKind::ShapeMismatch;
        fail(kind,
             "communication on '" + names.chan_display(pi.carrier) +
                 "' is not permitted by the type of '" + names.chan_display(name) +
                 "': " + type_text(t, names),
             p->pos, show(j, p, std::nullopt));
      }
    fail(ErrKind::ShapeMismatch, "type reduction failed", p->pos, show(j, p, std::nullopt));
  }

  TypeP reduce_type_or_fail(Chan owner, const TypeP& t, const Obs& pi, const ProcP& p,
                            const Judgment& j) {
    auto r = reduce_type(t, pi);
    if (r) return *r;
    ErrKind kind =
        pi.kind == MsgKind::Label ? ErrKind::LabelNotPermitted : ErrKind::ShapeMismatch;
    fail(kind,
         "communication on '" + names.chan_display(pi.carrier) +
             "' is not permitted by the type of '" + names.chan_display(owner) +
             "': " + type_text(t, names),
         p->pos, show(j, p, std::nullopt));
  }

  // Reduces every part of the judgment except the used entry `skip` (when
  // given); the provided type is reduced unless `skip_provided`.
  Judgment reduce_judgment(const Judgment& j, const Obs& pi, const ProcP& p,
                           std::optional<Chan> skip, bool skip_provided) {
    Judgment out;
    out.ambient = reduce_or_fail(j.ambient, pi, p, j);
    out.internal = reduce_or_fail(j.internal, pi, p, j);
    Ctx used;
    for (auto& [c, t] : j.used.items) {
      if (skip && *skip == c) continue;
      used.add(c, t);
    }
    out.used = reduce_or_fail(used, pi, p, j);
    out.provided = j.provided;
    out.ptype = skip_provided ? j.ptype : reduce_type_or_fail(j.provided, j.ptype, pi, p, j);
    return out;
  }

  // ---------- context splitting for Par / channel transmission ----------

  struct Split {
    Ctx used1, used2, internal1, internal2;
  };

  Split split_by_free(const Judgment& j, const std::set<Chan>& f1, const std::set<Chan>& f2,
                      const std::set<Chan>& exclude, const ProcP& p) {
    Split s;
    auto place = [&](const Ctx& src, Ctx& dst1, Ctx& dst2) {
      for (auto& [c, t] : src.items) {
        if (exclude.count(c)) continue;
        bool in1 = f1.count(c) > 0, in2 = f2.count(c) > 0;
        if (in1 == in2) {
          fail(ErrKind::SplitFailure,
               std::string("channel '") + names.chan_display(c) +
                   (in1 ? "' is shared by both composed processes"
                        : "' is used by neither composed process"),
               p->pos, show(j, p, std::nullopt));
        }
        (in1 ? dst1 : dst2).add(c, t);
      }
    };
    place(j.used, s.used1, s.used2);
    place(j.internal, s.internal1, s.internal2);
    return s;
  }

  static Ctx ctx_union(std::initializer_list<const Ctx*> parts) {
    Ctx out;
    for (const Ctx* p : parts)
      for (auto& [c, t] : p->items) out.add(c, t);
    return out;
  }

  // ---------- phase one: uniform typing ----------

  TraceSet uniform(const Judgment& j, const ProcP& p, DerivP parent) {
    switch (p->kind) {
      case ProcKind::New: {
        DerivP n = node(parent, "New", j, p);
        Judgment inner = j;
        std::set<Chan> domain;
        for (auto& [c, t] : j.ambient.items) domain.insert(c);
        for (auto& [c, t] : j.internal.items) domain.insert(c);
        for (auto& [c, t] : j.used.items) domain.insert(c);
        domain.insert(j.provided);
        for (auto& [c, t] : p->bindings) domain.insert(c);
        std::set<Chan> hidden;
        for (auto& [c, t] : p->bindings) {
          for (Chan fc : free_channels(t))
            if (!domain.count(fc))
              fail(ErrKind::ShapeMismatch,
                   "type of new channel '" + names.chan_display(c) +
                       "' observes out-of-scope channel '" + names.chan_display(fc) + "'",
                   p->pos, show(j, p, std::nullopt));
          inner.internal.add(c, t);
          hidden.insert(c);
        }
        TraceSet out = delete_names(uniform(inner, p->cont, n), hidden);
        record(n, out);
        return out;
      }
      case ProcKind::Par: {
        DerivP n = node(parent, "Par", j, p);
        Chan cut = p->chan;
        const TypeP* cut_type = j.internal.find(cut);
        if (!cut_type)
          fail(ErrKind::SplitFailure,
               "composition channel '" + names.chan_display(cut) +
                   "' is not an internal channel of the specification",
               p->pos, show(j, p, std::nullopt));
        auto f1 = free_channels(p->cont);
        auto f2 = free_channels(p->cont2);
        check_known(j, f1, p);
        check_known(j, f2, p);
        Split s = split_by_free(j, f1, f2, {cut}, p);

        Judgment j1;
        Ctx provided_ctx;
        provided_ctx.add(j.provided, j.ptype);
        j1.ambient = ctx_union({&j.ambient, &s.used2, &s.internal2, &provided_ctx});
        j1.internal = s.internal1;
        j1.used = s.used1;
        j1.provided = cut;
        j1.ptype = *cut_type;

        Judgment j2;
        j2.ambient = ctx_union({&j.ambient, &s.used1, &s.internal1});
        j2.internal = s.internal2;
        j2.used = s.used2;
        j2.used.add(cut, *cut_type);
        j2.provided = j.provided;
        j2.ptype = j.ptype;

        TraceSet t1 = uniform(j1, p->cont, n);
        TraceSet t2 = uniform(j2, p->cont2, n);
        current_rule = "Par";
        if (auto w = par_compatible(t1, t2))
          fail(ErrKind::ConstraintIncompatible,
               "composed processes impose incompatible constraints",
               p->pos, show(j, p, std::nullopt), w);
        TraceSet out = interleave_sets(t1, t2, opts.limit);
        record(n, out);
        return out;
      }
      default: {
        Chan pc = *princ(p);
        if (pc == j.provided) {
          DerivP n = node(parent, "STFoc-R", j, p, pc);
          TraceSet out = focus(j, p, pc, true, n);
          record(n, out);
          return out;
        }
        if (j.used.contains(pc)) {
          DerivP n = node(parent, "STFoc-L", j, p, pc);
          TraceSet out = focus(j, p, pc, false, n);
          record(n, out);
          return out;
        }
        fail(ErrKind::MissingChannels,
             "process communicates on '" + names.chan_display(pc) +
                 "', which is not a used or provided channel",
             p->pos, show(j, p, std::nullopt));
      }
    }
  }

  void check_known(const Judgment& j, const std::set<Chan>& frees, const ProcP& p) {
    for (Chan c : frees) {
      if (c == j.provided || j.used.contains(c) || j.internal.contains(c)) continue;
      fail(ErrKind::MissingChannels,
           "process uses channel '" + names.chan_display(c) +
               "' which the specification does not provide",
           p->pos, show(j, p, std::nullopt));
    }
  }

  // ---------- phase two: focussed reduction ----------

  TraceSet focus(const Judgment& j, const ProcP& p, Chan fc, bool right, DerivP parent) {
    const TypeP& ft = right ? j.ptype : *j.used.find(fc);
    if (whnf(ft)) return focus_whnf(j, p, fc, right, parent);

    // the focussed type observes some channel; only ambient observations
    // can be discharged
    Chan subj = ft->subj;
    const TypeP* ambient = j.ambient.find(subj);
    if (!ambient) {
      std::string where = j.used.contains(subj) || subj == j.provided || j.internal.contains(subj)
                              ? "a local channel"
                              : "an unknown channel";
      fail(ErrKind::FocusStuck,
           "type of '" + names.chan_display(fc) + "' observes " + where + " '" +
               names.chan_display(subj) + "' and cannot be reduced",
           p->pos, show(j, p, fc));
    }
    const TypeP at = *ambient;
    const char* rule = nullptr;
    switch (at->kind) {
      case TypeKind::One: {
        rule = right ? "Red-RTu" : "Red-LTu";
        DerivP n = node(parent, rule, j, p, fc);
        Obs pi = obs_close(subj);
        Judgment next = reduce_ambient_judgment(j, subj, pi, TypeP{}, Chan{}, p, fc, right);
        TraceSet out = prefix_set(elem_close(Sign::Constr, subj), focus(next, p, fc, right, n));
        record(n, out);
        return out;
      }
      case TypeKind::IChoice:
      case TypeKind::EChoice: {
        rule = right ? "Red-RTLbl" : "Red-LTLbl";
        DerivP n = node(parent, rule, j, p, fc);
        // constrain the maximal subset of labels whose branches check
        TraceSet out;
        std::optional<CheckFail> first_fail;
        for (auto& [l, bt] : at->branches) {
          try {
            Obs pi = obs_label(subj, l);
            Judgment next = reduce_ambient_judgment(j, subj, pi, bt, Chan{}, p, fc, right);
            TraceSet branch =
                prefix_set(elem_label(Sign::Constr, subj, l), focus(next, p, fc, right, n));
            for (auto& t : branch) out.insert(t);
          } catch (CheckFail& f) {
            if (!first_fail) first_fail = std::move(f);
          }
        }
        if (out.empty()) {
          if (first_fail) throw *first_fail;
          fail(ErrKind::FocusStuck,
               "no observation on '" + names.chan_display(subj) + "' reduces the focus",
               p->pos, show(j, p, fc));
        }
        record(n, out);
        return out;
      }
      case TypeKind::Tensor:
      case TypeKind::Lolly: {
        rule = right ? "Red-RTChan" : "Red-LTChan";
        DerivP n = node(parent, rule, j, p, fc);
        Chan fresh = names.fresh_chan(names.chan_display(at->bind1));
        Obs pi = obs_chan(subj, fresh);
        Judgment next = reduce_ambient_judgment(j, subj, pi, TypeP{}, fresh, p, fc, right);
        TraceSet out =
            prefix_set(elem_chan(Sign::Constr, subj, fresh), focus(next, p, fc, right, n));
        record(n, out);
        return out;
      }
      default:
        fail(ErrKind::FocusStuck,
             "ambient channel '" + names.chan_display(subj) +
                 "' has an observing type and cannot justify a reduction",
             p->pos, show(j, p, fc));
    }
  }

  // Reduces the entire judgment by an observation pi on ambient channel
  // subj, replacing subj's ambient entry per the environment reduction:
  // close removes it, a label keeps the selected branch, a transmission
  // introduces the transmitted channel.
  Judgment reduce_ambient_judgment(const Judgment& j, Chan subj, const Obs& pi,
                                   const TypeP& label_branch, Chan fresh, const ProcP& p,
                                   Chan fc, bool right) {
    (void)fc;
    (void)right;
    Judgment out;
    Ctx ambient_rest;
    const TypeP* subj_type = nullptr;
    for (auto& [c, t] : j.ambient.items) {
      if (c == subj) {
        subj_type = &t;
        continue;
      }
      ambient_rest.add(c, t);
    }
    assert(subj_type);
    out.ambient = reduce_or_fail(ambient_rest, pi, p, j);
    switch (pi.kind) {
      case MsgKind::Close:
        break;
      case MsgKind::Label:
        out.ambient.add(subj, label_branch);
        break;
      case MsgKind::Chan: {
        const TypeP& t = *subj_type;
        out.ambient.add(fresh, subst_chan(t->left, t->bind2, subj));
        out.ambient.add(subj, subst_chan(t->right, t->bind1, fresh));
        break;
      }
    }
    out.internal = reduce_or_fail(j.internal, pi, p, j);
    out.used = reduce_or_fail(j.used, pi, p, j);
    out.provided = j.provided;
    out.ptype = reduce_type_or_fail(j.provided, j.ptype, pi, p, j);
    return out;
  }

  [[noreturn]] void shape_mismatch(const Judgment& j, const ProcP& p, Chan fc,
                                   const TypeP& ft, const char* expected) {
    fail(ErrKind::ShapeMismatch,
         "process does not match the type of '" + names.chan_display(fc) + "' (" +
             type_text(ft, names) + "): expected " + expected,
         p->pos, show(j, p, fc));
  }

  TraceSet focus_whnf(const Judgment& j, const ProcP& p, Chan fc, bool right,
                      DerivP parent) {
    const TypeP ft = right ? j.ptype : *j.used.find(fc);
    switch (ft->kind) {
      case TypeKind::One:
        return right ? rule_one_right(j, p, fc, parent)
                     : rule_one_left(j, p, fc, parent);
      case TypeKind::IChoice:
        return right ? rule_choice_send(j, p, fc, true, parent)
                     : rule_choice_recv(j, p, fc, false, parent);
      case TypeKind::EChoice:
        return right ? rule_choice_recv(j, p, fc, true, parent)
                     : rule_choice_send(j, p, fc, false, parent);
      case TypeKind::Tensor:
        return right ? rule_chan_send(j, p, fc, true, parent)
                     : rule_chan_recv(j, p, fc, false, parent);
      case TypeKind::Lolly:
        return right ? rule_chan_recv(j, p, fc, true, parent)
                     : rule_chan_send(j, p, fc, false, parent);
      default:
        assert(false);
        return {};
    }
  }

  TraceSet rule_one_right(const Judgment& j, const ProcP& p, Chan fc, DerivP parent) {
    current_rule = "RTu-R";
    if (p->kind != ProcKind::Close) shape_mismatch(j, p, fc, j.ptype, "close");
    if (!j.used.empty())
      fail(ErrKind::LeftoverChannels,
           "client channels left over at close: " + ctx_text(j.used, names), p->pos,
           show(j, p, fc));
    if (!j.internal.empty())
      fail(ErrKind::LeftoverChannels,
           "internal channels left over at close: " + ctx_text(j.internal, names), p->pos,
           show(j, p, fc));
    DerivP n = node(parent, "RTu-R", j, p, fc);
    TraceSet out;
    out.insert(Trace::canon({elem_close(Sign::Out, fc)}));
    record(n, out);
    return out;
  }

  TraceSet rule_one_left(const Judgment& j, const ProcP& p, Chan fc, DerivP parent) {
    current_rule = "RTu-L";
    const TypeP ft = *j.used.find(fc);
    if (p->kind != ProcKind::Wait) shape_mismatch(j, p, fc, ft, "wait");
    DerivP n = node(parent, "RTu-L", j, p, fc);
    Obs pi = obs_close(fc);
    Judgment next = reduce_judgment(j, pi, p, fc, false);
    TraceSet out = prefix_set(elem_close(Sign::In, fc), uniform(next, p->cont, n));
    record(n, out);
    return out;
  }

  TraceSet rule_choice_send(const Judgment& j, const ProcP& p, Chan fc, bool right,
                            DerivP parent) {
    current_rule = right ? "RTplus-R" : "RTamp-L";
    const TypeP ft = right ? j.ptype : *j.used.find(fc);
    if (p->kind != ProcKind::SendLabel) shape_mismatch(j, p, fc, ft, "a label send");
    const TypeP* branch = nullptr;
    for (auto& [l, b] : ft->branches)
      if (l == p->label) branch = &b;
    if (!branch)
      fail(ErrKind::LabelNotPermitted,
           "label '" + names.label_text(p->label) + "' is not permitted on '" +
               names.chan_display(fc) + "': " + type_text(ft, names),
           p->pos, show(j, p, fc));
    DerivP n = node(parent, right ? "RTplus-R" : "RTamp-L", j, p, fc);
    Obs pi = obs_label(fc, p->label);
    Judgment next = reduce_judgment(j, pi, p, right ? std::optional<Chan>{} : std::optional<Chan>{fc},
                                    right);
    if (right)
      next.ptype = *branch;
    else
      next.used.add(fc, *branch);
    TraceSet out = prefix_set(elem_label(Sign::Out, fc, p->label), uniform(next, p->cont, n));
    record(n, out);
    return out;
  }

  TraceSet rule_choice_recv(const Judgment& j, const ProcP& p, Chan fc, bool right,
                            DerivP parent) {
    current_rule = right ? "RTamp-R" : "RTplus-L";
    const TypeP ft = right ? j.ptype : *j.used.find(fc);
    if (p->kind != ProcKind::RecvLabel) shape_mismatch(j, p, fc, ft, "case");
    DerivP n = node(parent, right ? "RTamp-R" : "RTplus-L", j, p, fc);
    TraceSet out;
    for (auto& [l, bt] : ft->branches) {
      const ProcP* body = nullptr;
      for (auto& [pl, q] : p->branches)
        if (pl == l) body = &q;
      if (!body)
        fail(ErrKind::ShapeMismatch,
             "case on '" + names.chan_display(fc) + "' is missing branch '" +
                 names.label_text(l) + "'",
             p->pos, show(j, p, fc));
      Obs pi = obs_label(fc, l);
      Judgment next = reduce_judgment(
          j, pi, p, right ? std::optional<Chan>{} : std::optional<Chan>{fc}, right);
      if (right)
        next.ptype = bt;
      else
        next.used.add(fc, bt);
      for (auto& t : prefix_set(elem_label(Sign::In, fc, l), uniform(next, *body, n)))
        out.insert(t);
    }
    record(n, out);
    return out;
  }

  // RTot-R / RTlolly-L: the process sends a channel; the judgment splits.
  TraceSet rule_chan_send(const Judgment& j, const ProcP& p, Chan fc, bool right,
                          DerivP parent) {
    current_rule = right ? "RTot-R" : "RTlolly-L";
    const TypeP ft = right ? j.ptype : *j.used.find(fc);
    if (p->kind != ProcKind::SendChan) shape_mismatch(j, p, fc, ft, "a channel send");
    DerivP n = node(parent, right ? "RTot-R" : "RTlolly-L", j, p, fc);

    Chan sent = names.fresh_chan(names.chan_display(p->bind));
    ProcP spawned = subst_chan(p->cont, p->bind, sent);
    Obs pi = obs_chan(fc, sent);
    TypeP sent_type = subst_chan(ft->left, ft->bind2, fc);
    TypeP kept_type = subst_chan(ft->right, ft->bind1, sent);

    auto f1 = free_channels(spawned);
    f1.erase(sent);
    auto f2 = free_channels(p->cont2);
    check_known(j, f1, p);
    check_known(j, f2, p);
    Split s = split_by_free(j, f1, f2, {fc}, p);
    Ctx used1 = reduce_or_fail(s.used1, pi, p, j);
    Ctx used2 = reduce_or_fail(s.used2, pi, p, j);
    Ctx internal1 = reduce_or_fail(s.internal1, pi, p, j);
    Ctx internal2 = reduce_or_fail(s.internal2, pi, p, j);
    Ctx ambient = reduce_or_fail(j.ambient, pi, p, j);
    TypeP provided_reduced;
    if (!right) provided_reduced = reduce_type_or_fail(j.provided, j.ptype, pi, p, j);

    Judgment j1;
    j1.internal = internal1;
    j1.used = used1;
    j1.provided = sent;
    j1.ptype = sent_type;
    Judgment j2;
    j2.internal = internal2;
    j2.used = used2;
    Ctx carrier_ctx;
    if (right) {
      j2.provided = fc;
      j2.ptype = kept_type;
      carrier_ctx.add(fc, kept_type);
    } else {
      j2.used.add(fc, kept_type);
      j2.provided = j.provided;
      j2.ptype = provided_reduced;
      carrier_ctx.add(fc, kept_type);
      carrier_ctx.add(j.provided, provided_reduced);
    }
    Ctx sent_ctx;
    sent_ctx.add(sent, sent_type);
    j1.ambient = ctx_union({&ambient, &used2, &internal2, &carrier_ctx});
    j2.ambient = ctx_union({&ambient, &used1, &internal1, &sent_ctx});

    TraceSet t1 = uniform(j1, spawned, n);
    TraceSet t2 = uniform(j2, p->cont2, n);
    current_rule = right ? "RTot-R" : "RTlolly-L";
    if (auto w = par_compatible(t1, t2))
      fail(ErrKind::ConstraintIncompatible,
           "spawned process and continuation impose incompatible constraints",
           p->pos, show(j, p, fc), w);
    TraceSet out = prefix_set(elem_chan(Sign::Out, fc, sent),
                              interleave_sets(t1, t2, opts.limit));
    record(n, out);
    return out;
  }

  // RTlolly-R / RTot-L: the process receives a channel.
  TraceSet rule_chan_recv(const Judgment& j, const ProcP& p, Chan fc, bool right,
                          DerivP parent) {
    current_rule = right ? "RTlolly-R" : "RTot-L";
    const TypeP ft = right ? j.ptype : *j.used.find(fc);
    if (p->kind != ProcKind::RecvChan) shape_mismatch(j, p, fc, ft, "recv");
    DerivP n = node(parent, right ? "RTlolly-R" : "RTot-L", j, p, fc);

    Chan recv = names.fresh_chan(names.chan_display(p->bind));
    ProcP body = subst_chan(p->cont, p->bind, recv);
    Obs pi = obs_chan(fc, recv);
    TypeP recv_type = subst_chan(ft->left, ft->bind2, fc);
    TypeP kept_type = subst_chan(ft->right, ft->bind1, recv);

    Judgment next = reduce_judgment(
        j, pi, p, right ? std::optional<Chan>{} : std::optional<Chan>{fc}, right);
    next.used.add(recv, recv_type);
    if (right)
      next.ptype = kept_type;
    else
      next.used.add(fc, kept_type);
    TraceSet out = prefix_set(elem_chan(Sign::In, fc, recv), uniform(next, body, n));
    record(n, out);
    return out;
  }
};

}  // namespace

CheckOutcome check_uniform(const Judgment& j, const ProcP& p, NameTable& names,
                           const CheckOptions& opts) {
  Checker checker{names, opts, {}};
  try {
    CheckResult res;
    DerivP root;
    if (opts.derivation) {
      root = std::make_shared<DerivNode>();
      root->rule = "root";
    }
    res.constraints = checker.uniform(j, p, root);
    if (root && !root->kids.empty()) res.derivation = root->kids.front();
    return res;
  } catch (CheckFail& f) {
    return f.err;
  } catch (ResourceLimit& e) {
    CheckError err;
    err.kind = ErrKind::ShapeMismatch;
    err.message = e.what();
    return err;
  }
}

CheckOutcome check_decl(const Decl& d, NameTable& names, const CheckOptions& opts) {
  const Interface& iface = d.spec.interfaces.at(0);
  Judgment j;
  j.ambient = d.spec.ambient;
  j.internal = iface.internal;
  j.used = iface.used;
  j.provided = iface.provided;
  j.ptype = iface.ptype;
  return check_uniform(j, d.body, names, opts);
}

std::map<std::string, CheckOutcome> check_program(Program& prog, const CheckOptions& opts) {
  std::map<std::string, CheckOutcome> out;
  if (opts.parallel) {
    // checking only reads the shared name table when it allocates fresh
    // names, so parallel mode gives each declaration a private copy
    std::vector<std::future<std::pair<std::string, CheckOutcome>>> futs;
    for (auto& d : prog.decls) {
      futs.push_back(std::async(std::launch::async, [&d, &prog, &opts]() {
        NameTable local = prog.names;
        return std::make_pair(d.name, check_decl(d, local, opts));
      }));
    }
    for (auto& f : futs) out.insert(f.get());
    return out;
  }
  for (auto& d : prog.decls) out.emplace(d.name, check_decl(d, prog.names, opts));
  return out;
}

}  // namespace most
