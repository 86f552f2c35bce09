#ifndef MOST_SYNTAX_HPP
#define MOST_SYNTAX_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "most/names.hpp"

namespace most {

// ---------- session types ----------

struct SessionType;
using TypeP = std::shared_ptr<const SessionType>;

enum class TypeKind {
  One,        // 1
  IChoice,    // +{l: A, ...}
  EChoice,    // &{l: A, ...}
  Tensor,     // (x: A) * (y: B)   x = transmitted binder (bound in B), y = carrier binder (bound in A)
  Lolly,      // (x: A) -o (y: B)  same binding structure
  CaseClose,  // CASE a {close => A}
  CaseLabel,  // CASE a {l => A | ...}
  CaseChan,   // CASE a {chan x => A}
};

struct SessionType {
  TypeKind kind = TypeKind::One;
  std::vector<std::pair<Lab, TypeP>> branches;  // IChoice/EChoice/CaseLabel; sorted by label id
  Chan subj{};                                  // CASE subject channel
  Chan bind1{};                                 // Tensor/Lolly transmitted binder; CaseChan binder
  Chan bind2{};                                 // Tensor/Lolly carrier binder
  TypeP left, right;                            // Tensor/Lolly components; CaseClose/CaseChan body = left
};

TypeP t_one();
TypeP t_choice(TypeKind k, std::vector<std::pair<Lab, TypeP>> branches);
TypeP t_tensor(Chan x, TypeP a, Chan y, TypeP b);
TypeP t_lolly(Chan x, TypeP a, Chan y, TypeP b);
TypeP t_case_close(Chan subj, TypeP body);
TypeP t_case_label(Chan subj, std::vector<std::pair<Lab, TypeP>> branches);
TypeP t_case_chan(Chan subj, Chan bind, TypeP body);

bool whnf(const TypeP& t);  // 1, choice, or channel transmission at the top

// ---------- processes ----------

struct Process;
using ProcP = std::shared_ptr<const Process>;

enum class ProcKind {
  Close,      // close a
  Wait,       // wait a; P
  SendLabel,  // a.k; P
  RecvLabel,  // case a { l => P | ... }
  SendChan,   // send a (b -> P); Q
  RecvChan,   // recv b <- a; P
  Par,        // P |[a]| Q
  New,        // new (a: A, ...) in P
};

struct Process {
  ProcKind kind = ProcKind::Close;
  Pos pos{};
  Chan chan{};   // subject channel; Par cut channel
  Lab label{};   // SendLabel
  Chan bind{};   // SendChan/RecvChan bound name
  ProcP cont;    // continuation; SendChan P; Par left; New body
  ProcP cont2;   // SendChan Q; Par right
  std::vector<std::pair<Lab, ProcP>> branches;        // RecvLabel, sorted by label id
  std::vector<std::pair<Chan, TypeP>> bindings;       // New
};

ProcP p_close(Chan a, Pos pos = {});
ProcP p_wait(Chan a, ProcP p, Pos pos = {});
ProcP p_send_label(Chan a, Lab k, ProcP p, Pos pos = {});
ProcP p_recv_label(Chan a, std::vector<std::pair<Lab, ProcP>> branches, Pos pos = {});
ProcP p_send_chan(Chan a, Chan b, ProcP p, ProcP q, Pos pos = {});
ProcP p_recv_chan(Chan b, Chan a, ProcP p, Pos pos = {});
ProcP p_par(Chan a, ProcP p, ProcP q, Pos pos = {});
ProcP p_new(std::vector<std::pair<Chan, TypeP>> bindings, ProcP p, Pos pos = {});

// ---------- contexts, interfaces, specifications ----------

// Ordered channel -> type map; insertion order preserved for display.
struct Ctx {
  std::vector<std::pair<Chan, TypeP>> items;

  const TypeP* find(Chan c) const {
    for (auto& [name, ty] : items)
      if (name == c) return &ty;
    return nullptr;
  }
  bool contains(Chan c) const { return find(c) != nullptr; }
  void add(Chan c, TypeP t) { items.emplace_back(c, std::move(t)); }
  bool remove(Chan c) {
    for (size_t i = 0; i < items.size(); ++i)
      if (items[i].first == c) {
        items.erase(items.begin() + static_cast<ptrdiff_t>(i));
        return true;
      }
    return false;
  }
  bool empty() const { return items.empty(); }
  size_t size() const { return items.size(); }
  std::vector<Chan> domain() const {
    std::vector<Chan> d;
    d.reserve(items.size());
    for (auto& [name, ty] : items) d.push_back(name);
    return d;
  }
};

// One process interface (Δ; Ι; c : C).
struct Interface {
  Ctx used;      // Δ
  Ctx internal;  // Ι
  Chan provided{};
  TypeP ptype;
};

// Specification Π ⊢ G.
struct Spec {
  Ctx ambient;  // Π
  std::vector<Interface> interfaces;
};

struct Decl {
  std::string name;
  Spec spec;  // exactly one interface
  ProcP body;
  Pos pos{};
};

struct Program {
  std::vector<Decl> decls;
  std::map<std::string, TypeP> type_abbrevs;
  NameTable names;

  const Decl* find(const std::string& name) const {
    for (auto& d : decls)
      if (d.name == name) return &d;
    return nullptr;
  }
};

// ---------- errors ----------

struct SourceError : std::runtime_error {
  Pos pos;
  SourceError(const std::string& what, Pos p) : std::runtime_error(what), pos(p) {}
};
struct ParseError : SourceError {
  using SourceError::SourceError;
};
struct ScopeError : SourceError {
  using SourceError::SourceError;
};
struct WfError : SourceError {
  using SourceError::SourceError;
};

// ---------- operations ----------

std::set<Chan> free_channels(const ProcP& p);
std::set<Chan> free_channels(const TypeP& t);

// Capture-avoiding channel renaming. `to` must never occur as a binder in the
// target (guaranteed because substituted names are always session-fresh).
TypeP subst_chan(const TypeP& t, Chan from, Chan to);
ProcP subst_chan(const ProcP& p, Chan from, Chan to);

// Deterministic left-to-right canonicalization of bound names; alpha_eq
// compares canonical forms structurally.
TypeP canon(const TypeP& t);
ProcP canon(const ProcP& p);
bool alpha_eq(const TypeP& a, const TypeP& b);
bool alpha_eq(const ProcP& a, const ProcP& b);

// Principal channel of a communicating construct; nullopt for Par/New.
std::optional<Chan> princ(const ProcP& p);

// Specification well-formedness: pairwise-distinct typed names and
// scope-closure of every assigned type. Throws WfError on violation.
void wf_spec(const Spec& s, const NameTable& names);

size_t op_count(const TypeP& t);  // number of type constructors
size_t op_count(const Ctx& c);
size_t op_count(const Spec& s);

// ---------- printing ----------

std::string type_text(const TypeP& t, const NameTable& names);
std::string proc_text(const ProcP& p, const NameTable& names);
std::string ctx_text(const Ctx& c, const NameTable& names);
std::string spec_text(const Spec& s, const NameTable& names);
std::string decl_text(const Decl& d, const NameTable& names);
std::string program_text(const Program& prog);

}  // namespace most

#endif
