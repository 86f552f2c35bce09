#ifndef MOST_TYPESEM_HPP
#define MOST_TYPESEM_HPP

#include <optional>

#include "most/syntax.hpp"
#include "most/trace.hpp"

namespace most {

// Type reduction A/pi: partial, capture-avoiding, structural through
// weak-head constructors; CASE fires on a matching observation.
std::optional<TypeP> reduce_type(const TypeP& t, const Obs& pi);

// Pointwise reduction of a context / interface sequence.
std::optional<Ctx> reduce_ctx(const Ctx& c, const Obs& pi);
std::optional<Interface> reduce_iface(const Interface& i, const Obs& pi);

// Specification reduction by an observation on an ambient channel: consumes
// the ambient entry (close) or replaces it with its continuation, and
// reduces everything else pointwise.
std::optional<Spec> reduce_spec(const Spec& s, const Obs& pi);

// Trace membership in the specification semantics. Requires wf_spec(s).
// Fresh names are drawn from a private copy of the name table, so
// concurrent calls on shared immutable inputs are safe.
bool spec_member(const Trace& t, const Spec& s, const NameTable& names);

// Total enumeration of the (finite) specification trace set.
// Throws ResourceLimit when a nonzero limit is exceeded.
TraceSet spec_enumerate(const Spec& s, const NameTable& names, size_t limit = 0);

}  // namespace most

#endif
