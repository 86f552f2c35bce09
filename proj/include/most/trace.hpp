#ifndef MOST_TRACE_HPP
#define MOST_TRACE_HPP

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "most/names.hpp"

namespace most {

enum class Sign : uint8_t { Out, In, Sync, Constr };
enum class MsgKind : uint8_t { Close, Label, Chan };

// One trace element (s; m)[binders], binders binding into the trace's tail.
struct TraceElem {
  Sign sign = Sign::Out;
  MsgKind msg = MsgKind::Close;
  Chan carrier{};
  Lab label{};                 // valid iff msg == Label
  std::vector<Chan> binders;   // one name, exactly when msg == Chan

  friend bool operator==(const TraceElem& a, const TraceElem& b) {
    return a.sign == b.sign && a.msg == b.msg && a.carrier == b.carrier &&
           (a.msg != MsgKind::Label || a.label == b.label) && a.binders == b.binders;
  }
  bool same_message(const TraceElem& o) const {
    return msg == o.msg && carrier == o.carrier &&
           (msg != MsgKind::Label || label == o.label) &&
           binders.size() == o.binders.size();
  }
};

TraceElem elem_close(Sign s, Chan a);
TraceElem elem_label(Sign s, Chan a, Lab l);
TraceElem elem_chan(Sign s, Chan a, Chan bound);

// A trace stored in alpha-canonical form: bound names are renamed to
// canonical negative ids left to right. Equality is alpha-equivalence.
struct Trace {
  std::vector<TraceElem> elems;

  Trace() = default;
  static Trace canon(std::vector<TraceElem> raw);

  bool empty() const { return elems.empty(); }
  size_t size() const { return elems.size(); }
  friend bool operator==(const Trace& a, const Trace& b) { return a.elems == b.elems; }
};

struct TraceHash {
  size_t operator()(const Trace& t) const;
};

using TraceSet = std::unordered_set<Trace, TraceHash>;

// Observed communication pi.
struct Obs {
  MsgKind kind = MsgKind::Close;
  Chan carrier{};
  Lab label{};  // Label
  Chan fresh{}; // Chan: the free name identifying the transmitted channel
};

Obs obs_close(Chan a);
Obs obs_label(Chan a, Lab l);
Obs obs_chan(Chan a, Chan fresh);

std::vector<Chan> obs_free_names(const Obs& o);

// obsc: the observed communication induced by a message; nullopt when the
// binder list does not fit the message shape.
std::optional<Obs> obsc(const TraceElem& e);

std::vector<Chan> free_names(const Trace& t);

// tdel: removes every element whose carrier is in X, enlarging X with the
// element's binders.
Trace delete_names(const Trace& t, const std::set<Chan>& names);

// Drops every constraint element.
Trace erase_constraints(const Trace& t);

// Discharges the first constraint satisfied by pi; commutes past other
// carriers; nullopt on any observable element with pi's carrier or a
// mismatched constraint.
std::optional<Trace> reduce_trace(const Trace& t, const Obs& pi);

// Synchronized interleaving of two traces; ill-defined combinations give
// the empty set.
TraceSet interleave(const Trace& t1, const Trace& t2);

// Pointwise union of pairwise interleavings. limit = 0 means unbounded;
// exceeding a nonzero limit throws ResourceLimit.
TraceSet interleave_sets(const TraceSet& t1, const TraceSet& t2, size_t limit = 0);

bool safely_constrained(const Trace& t);

// When enabled, interleave reports on stderr which ill-defined clause made a
// combination empty (diagnostic aid).
void set_interleave_debug(bool on);

struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// set helpers
TraceSet prefix_set(const TraceElem& head, const TraceSet& tails);
TraceSet erase_constraints(const TraceSet& ts);
TraceSet delete_names(const TraceSet& ts, const std::set<Chan>& names);
bool set_eq(const TraceSet& a, const TraceSet& b);

// Canonical text: elements like `O close a`, `I a.l`, `S chan a [b]`,
// joined by ` ; `; the empty trace prints as `.`.
std::string trace_text(const Trace& t, const NameTable& names);
std::vector<std::string> sorted_trace_texts(const TraceSet& ts, const NameTable& names);

}  // namespace most

#endif
