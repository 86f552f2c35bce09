#include "most/denote.hpp"

namespace most {

TraceSet denote(const ProcP& p, NameTable& names, size_t limit) {
  switch (p->kind) {
    case ProcKind::Close: {
      TraceSet out;
      out.insert(Trace::canon({elem_close(Sign::Out, p->chan)}));
      return out;
    }
    case ProcKind::Wait:
      return prefix_set(elem_close(Sign::In, p->chan), denote(p->cont, names, limit));
    case ProcKind::SendLabel:
      return prefix_set(elem_label(Sign::Out, p->chan, p->label),
                        denote(p->cont, names, limit));
    case ProcKind::RecvLabel: {
      TraceSet out;
      for (auto& [l, q] : p->branches) {
        for (auto& t : prefix_set(elem_label(Sign::In, p->chan, l), denote(q, names, limit))) {
          out.insert(t);
          if (limit && out.size() > limit) throw ResourceLimit("denotation exceeds limit");
        }
      }
      return out;
    }
    case ProcKind::SendChan: {
      // pick the bound name fresh so it cannot clash with the continuation
      Chan b = names.fresh_chan(names.chan_display(p->bind));
      TraceSet left = denote(subst_chan(p->cont, p->bind, b), names, limit);
      TraceSet right = denote(p->cont2, names, limit);
      return prefix_set(elem_chan(Sign::Out, p->chan, b),
                        interleave_sets(left, right, limit));
    }
    case ProcKind::RecvChan:
      return prefix_set(elem_chan(Sign::In, p->chan, p->bind),
                        denote(p->cont, names, limit));
    case ProcKind::Par:
      return interleave_sets(denote(p->cont, names, limit),
                             denote(p->cont2, names, limit), limit);
    case ProcKind::New: {
      std::set<Chan> hidden;
      for (auto& [c, t] : p->bindings) hidden.insert(c);
      return delete_names(denote(p->cont, names, limit), hidden);
    }
  }
  return {};
}

TraceSet denote_decl(Program& prog, const std::string& name, size_t limit) {
  const Decl* d = prog.find(name);
  if (!d) throw UnknownName("unknown process '" + name + "'");
  return denote(d->body, prog.names, limit);
}

}  // namespace most
