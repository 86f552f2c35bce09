#ifndef MOST_VERIFY_HPP
#define MOST_VERIFY_HPP

#include "most/check.hpp"

namespace most {

// Machine-checks the soundness theorem on one declaration: the checker's
// constraint set T must satisfy erase_constraints(T) = denote(P) up to
// alpha, and every t in T must be a member of the declared specification.
struct VerifyResult {
  bool checked = false;            // the declaration typechecked
  bool erasure_matches = false;    // ⌊T⌋ = ⟦P⟧
  bool members_ok = false;         // T ⊆ ⟦spec⟧
  size_t constraint_count = 0;
  std::optional<CheckError> check_error;
  std::vector<std::string> counterexamples;  // canonical trace texts

  bool ok() const { return checked && erasure_matches && members_ok; }
};

VerifyResult verify_decl(const Decl& d, NameTable& names, size_t limit = 0);
std::map<std::string, VerifyResult> verify_program(Program& prog, size_t limit = 0);

}  // namespace most

#endif
