#ifndef MOST_CHECK_HPP
#define MOST_CHECK_HPP

#include <map>
#include <memory>
#include <variant>

#include "most/syntax.hpp"
#include "most/trace.hpp"

namespace most {

struct DerivNode;
using DerivP = std::shared_ptr<DerivNode>;

// One rule application: rule name, judgment snapshot, output constraint set.
struct DerivNode {
  std::string rule;
  std::string judgment;
  TraceSet out;
  std::vector<DerivP> kids;
};

struct CheckResult {
  TraceSet constraints;
  DerivP derivation;  // recorded only when requested
};

enum class ErrKind {
  LeftoverChannels,
  MissingChannels,
  FocusStuck,
  LabelNotPermitted,
  ConstraintIncompatible,
  SplitFailure,
  ShapeMismatch,
};

const char* err_kind_name(ErrKind k);

struct CheckError {
  ErrKind kind = ErrKind::ShapeMismatch;
  std::string rule;  // rule being applied when the check failed
  std::string message;
  Pos pos{};
  std::string judgment;
  std::optional<std::pair<Trace, Trace>> witnesses;  // ConstraintIncompatible
};

using CheckOutcome = std::variant<CheckResult, CheckError>;

struct CheckOptions {
  bool derivation = false;
  size_t limit = 0;
  bool parallel = false;
};

// Uniform process typing judgment Π; Ι ⊢ P :: Δ ⊢ c : C.
struct Judgment {
  Ctx ambient;   // Π
  Ctx internal;  // Ι
  Ctx used;      // Δ
  Chan provided{};
  TypeP ptype;
};

// The Par/⊗/⊸ compatibility condition: for every pair,
// ⌊t1⌋ ⋈ ⌊t2⌋ = ⌊t1 ⋈ t2⌋. Returns the first violating pair if any.
std::optional<std::pair<Trace, Trace>> par_compatible(const TraceSet& t1,
                                                      const TraceSet& t2);

CheckOutcome check_uniform(const Judgment& j, const ProcP& p, NameTable& names,
                           const CheckOptions& opts = {});
CheckOutcome check_decl(const Decl& d, NameTable& names, const CheckOptions& opts = {});
std::map<std::string, CheckOutcome> check_program(Program& prog,
                                                  const CheckOptions& opts = {});

}  // namespace most

#endif
