/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#ifndef MONDET_CONSTRAINTS_H
#define MONDET_CONSTRAINTS_H

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mondet/model.h"

namespace mondet {

/// Role tags let downstream passes pick rules out of a containment problem
/// without re-deriving their provenance.
enum class RuleRole {
  constraint,         // original schema dependency
  constraint_primed,  // its primed copy
  access_raw,         // accessibility axiom targeting R_acc
  acc_to_base,        // R_acc(w) -> R(w) /\ R'(w) /\ accessible(w_i)
  access_inlined,     // rewritten axiom, R_acc inlined away
  truncated,          // accessibility-only head
  transfer,           // primed-copy head
  rb_fact_transfer,   // merged result-bound transfer
  relation_to_view,   // R -> R_mt
  view_to_relation,   // R_mt -> exists R
  lift,               // bounded part of a linearization
  lin_transfer,       // acyclic part of a linearization
  other,
};

/// Tuple-generating dependency. Bodies and heads hold variables only.
struct TGD {
  std::string id;
  std::vector<Atom> body;
  std::vector<Atom> head;
  RuleRole role = RuleRole::constraint;
  std::string method;  // for accessibility axioms: the originating method

  std::vector<std::string> body_variables() const;
  std::vector<std::string> head_variables() const;
  /// Body variables that occur in the head.
  std::vector<std::string> exported() const;
  /// Head variables that do not occur in the body.
  std::vector<std::string> existentials() const;

  bool is_full() const { return existentials().empty(); }
  /// Single body atom, single head atom, no repeated variables in either.
  bool is_id() const;
  /// Single body atom, single head atom; repetitions allowed.
  bool is_linear() const { return body.size() == 1 && head.size() == 1; }
  /// Some body atom contains every body variable.
  bool is_guarded() const;
  /// Some body atom contains every exported variable.
  bool is_frontier_guarded() const;

  std::string to_string() const;
};

/// Number of exported variables of an ID.
int id_width(const TGD& delta);

/// Functional dependency D -> j on one relation; 0-based positions.
struct FD {
  std::string relation;
  std::vector<int> determiner;  // sorted, unique
  int determined = 0;

  std::string to_string(const Signature* sig = nullptr) const;
  bool operator==(const FD& o) const {
    return relation == o.relation && determiner == o.determiner &&
           determined == o.determined;
  }
};

struct ConstraintClass {
  enum class Kind {
    pure_id,
    pure_fd,
    uid_plus_fd,
    frontier_guarded_tgd,
    unsupported,
  };
  Kind kind = Kind::unsupported;
  int max_width = 0;  // meaningful for pure_id

  const char* name() const;
};

struct ConstraintSet {
  std::vector<TGD> tgds;
  std::vector<FD> fds;

  bool empty() const { return tgds.empty() && fds.empty(); }
};

/// Table-driven classification; picks the most specific class. Empty
/// constraint sets classify as PureID (width 0).
ConstraintClass classify(const ConstraintSet& sigma);

/// Attribute closure of P under the FDs on `relation` (0-based positions).
/// Always a superset of P.
std::vector<int> detby(const std::string& relation, const std::vector<int>& p,
                       const std::vector<FD>& fds);

/// Result of minimizing a CQ under FDs: either the reduced query or
/// Degenerate when an FD forces two distinct constants together (the query
/// is unsatisfiable under the FDs).
struct Minimized {
  bool degenerate = false;
  CQ query;
};

/// Chases the FDs on the canonical database of q, merging variables
/// (variable |-> constant, later variable |-> earlier variable), and reads
/// the query back. Idempotent.
Minimized minimize_under_fds(const CQ& q, const std::vector<FD>& fds);

/// Renames every relation R of the atoms to R' (suffix prime).
std::string primed(const std::string& relation);
Atom prime_atom(const Atom& a);
CQ prime_query(const CQ& q);
TGD prime_tgd(const TGD& t, const std::string& id);
FD prime_fd(const FD& f);

}  // namespace mondet

#endif  // MONDET_CONSTRAINTS_H
