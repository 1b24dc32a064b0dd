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

#ifndef MONDET_REDUCE_H
#define MONDET_REDUCE_H

#include "mondet/simplify.h"

namespace mondet {

extern const char* const kAccessible;

/// The query containment problem whose truth is monotone answerability:
/// left |= gamma implies right, over the expanded signature
/// (R, R', R_acc per original relation, plus the unary `accessible`).
struct ContainmentProblem {
  CQ left;
  CQ right;  // left with every relation primed
  ConstraintSet gamma;
  Signature sig;
  std::vector<AccessMethod> methods;  // methods the axioms were built from
  bool inlined = false;

  std::string dump() const;  // textual dependency syntax
};

struct UnsupportedBound : std::runtime_error {
  explicit UnsupportedBound(int64_t k)
      : std::runtime_error("unsupported result bound " + std::to_string(k) +
                           ": simplify the schema first (only bounds of 1 "
                           "can be axiomatized)"),
        k(k) {}
  int64_t k;
};

struct AmondetOptions {
  /// Inline R_acc away (the rewritten axiom forms). Raw keeps R_acc.
  bool inline_axioms = true;
  /// For bound-1 axioms, export also the positions determined by the
  /// method's inputs (the UID+FD route's expanded axioms).
  bool export_determined = false;
};

/// Builds the AMonDet containment for q and sch. Requires every method
/// bound to be None or (lower) bound exactly 1; throws UnsupportedBound
/// otherwise. q is Booleanized.
ContainmentProblem amondet_containment(const Schema& sch, const CQ& q,
                                       const AmondetOptions& opts = {});

/// Inlines R_acc away for unbounded methods:
///   /\ accessible(x_i) /\ R(x,y) -> R'(x,y) /\ /\ accessible(y_i).
/// Requires that no bound-1 axioms are present in raw form.
ContainmentProblem rewrite_unbounded_axioms(const ContainmentProblem& p);

/// Splits each inlined unbounded-method axiom into single-headed
/// (Truncated Accessibility) rules plus one (Transfer) rule; their union
/// is the Delta of the linearization pipeline.
struct SplitAxioms {
  std::vector<TGD> truncated;
  std::vector<TGD> transfer;
};
SplitAxioms split_access_axioms(const ContainmentProblem& p);

/// For an existence-check-simplified schema with ID constraints: drops the
/// never-firing view IDs and merges each R -> R_mt -> R'_mt -> R' chain
/// into one guarded Result-bounded Fact Transfer TGD
///   /\ accessible(x_i) /\ R(x,y) -> exists z R'(x,z)
/// per formerly-bounded method. View relations disappear from the problem.
ContainmentProblem normalize_id_result_bounds(const ContainmentProblem& p,
                                              const SimplifiedSchema& simp);

/// The chase start: CanonDB(left) plus accessible(c) for every constant of
/// the query when seed_constants is set.
Instance initial_instance(const ContainmentProblem& p, bool seed_constants,
                          NullFactory& nulls);

}  // namespace mondet

#endif  // MONDET_REDUCE_H
