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

#ifndef MONDET_LINEARIZE_H
#define MONDET_LINEARIZE_H

#include <set>

#include "mondet/reduce.h"

namespace mondet {

/// /\_{i in premise} accessible(x_i) /\ R(x) -> accessible(x_j), as a
/// (relation, premise set, conclusion) triple. Breadth = |premise|.
struct TruncAxiom {
  std::string relation;
  std::vector<int> premise;  // sorted positions
  int conclusion = 0;

  int breadth() const { return static_cast<int>(premise.size()); }
  bool operator<(const TruncAxiom& o) const {
    if (relation != o.relation) return relation < o.relation;
    if (premise != o.premise) return premise < o.premise;
    return conclusion < o.conclusion;
  }
  bool operator==(const TruncAxiom& o) const {
    return relation == o.relation && premise == o.premise &&
           conclusion == o.conclusion;
  }
  TGD to_tgd(int arity) const;
  std::string to_string() const;
};

/// Closure of the original truncated accessibility axioms under IDs of
/// width <= w: the derived axioms of breadth <= w, trivial axioms included.
struct Saturation {
  int w = 1;
  std::set<TruncAxiom> axioms;

  bool has(const std::string& relation, const std::vector<int>& premise,
           int conclusion) const;
  /// Positions j with (relation, p, j) in the closure; always a superset
  /// of p once saturation has run.
  std::vector<int> transferred(const std::string& relation,
                               const std::vector<int>& p) const;
  /// Non-trivial axioms only (conclusion outside the premise).
  std::vector<TruncAxiom> derived() const;
};

/// Fixpoint over (relation, premise, conclusion) triples seeded with the
/// trivial axioms and `delta`, closed under backward propagation along the
/// IDs, transitivity, and the access rule. Terminates within r*a^(w+1)
/// triples.
Saturation saturate_truncated(const std::vector<TGD>& ids,
                              const std::vector<TruncAxiom>& delta,
                              const std::vector<AccessMethod>& methods,
                              int w, const Signature& sig);

/// Name of the accessibility-annotated copy of `base` for position set p
/// (printed 1-based): "R@{1,3}".
std::string annot_name(const std::string& base, const std::vector<int>& p);

/// The linear simulation of IDs + truncated accessibility axioms. `bounded`
/// holds the width-<=w Lift rules, `acyclic` the Transfer and Result-bounded
/// Fact Transfer rules (acyclic position graph).
struct SigmaLin {
  std::vector<TGD> bounded;
  std::vector<TGD> acyclic;
};

/// A formerly result-bounded method surviving as a fact-transfer obligation.
struct RbTransferSpec {
  std::string relation;
  std::vector<int> inputs;  // sorted original input positions
  std::string method;
};

SigmaLin build_sigma_lin(const std::vector<TGD>& ids, const Saturation& sat,
                         const std::vector<AccessMethod>& methods,
                         const std::vector<RbTransferSpec>& rb_transfers,
                         int w, const Signature& sig);

/// CanonDB(q) plus accessible seeds, closed under `delta_all` (original
/// plus derived truncated axioms; originals may exceed breadth w), with
/// every fact annotated by each <=w-subset of its accessible positions and
/// fully accessible facts copied to the primed relation.
Instance build_i0_lin(const CQ& q, const std::vector<TruncAxiom>& delta_all,
                      int w, const std::vector<Term>& accessible_seeds,
                      NullFactory& nulls);

/// Outcome of rewriting guarded rules into non-full IDs plus single-headed
/// full GTGDs (auxiliary head relations stand in for complex heads).
struct NormalizedGTGDs {
  std::vector<TGD> ids;    // non-full, no repeated variables
  std::vector<TGD> fulls;  // single-headed full GTGDs, guard atom first
  std::vector<Signature::Relation> aux_relations;
};

NormalizedGTGDs normalize_gtgds(const std::vector<TGD>& rules);

/// A full GTGD in canonical suitable form: guard atom first, side atoms
/// (over the side signature) on at most b guard positions, all other guard
/// positions holding distinct single-occurrence variables.
struct SuitableGTGD {
  Atom guard;
  std::vector<Atom> side;  // sorted
  Atom head;

  std::string key() const;
  TGD to_tgd(const std::string& id) const;
};

/// b-closure of ids + fulls over the given side signature: the derived
/// suitable full GTGDs, closed under (Transitivity) and (ID). With b equal
/// to the maximum ID width this is complete.
std::vector<SuitableGTGD> b_closure(const NormalizedGTGDs& sigma, int b,
                                    const std::vector<std::string>& side_sig);

/// Linear simulation of IDs + derived suitable GTGDs over annotated
/// relations R_{P,chi}. `bounded` holds the Lift rules, `acyclic` the
/// Forget/Instantiate rules.
struct Theta {
  std::vector<TGD> bounded;
  std::vector<TGD> acyclic;
};

Theta build_theta(const NormalizedGTGDs& sigma,
                  const std::vector<SuitableGTGD>& closure, int w,
                  const std::vector<std::string>& side_sig);

/// CanonDB(q) plus accessible seeds, closed under the full GTGDs of sigma
/// and of the closure, then annotated: for every fact and every <=w-subset
/// P of its positions, the R_{P,chi} copy whose chi records the side facts
/// on the P-values.
Instance build_q_lin(const CQ& q, const NormalizedGTGDs& sigma,
                     const std::vector<SuitableGTGD>& closure, int w,
                     const std::vector<std::string>& side_sig,
                     const std::vector<Term>& accessible_seeds,
                     NullFactory& nulls);

/// Drops rules whose body relation can never hold a fact when chasing from
/// `start` (fixpoint over relation names). Returns the kept rules.
std::vector<TGD> reachable_rules(const std::vector<TGD>& rules,
                                 const Instance& start);

}  // namespace mondet

#endif  // MONDET_LINEARIZE_H
