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

#ifndef MONDET_CHASE_H
#define MONDET_CHASE_H

#include <variant>

#include "mondet/constraints.h"
#include "mondet/model.h"

namespace mondet {

struct ChaseOptions {
  int round_budget = 64;
  size_t fact_budget = 200000;
  bool trace = false;
};

/// Outcome of the restricted chase. `failed` can only come from an FD
/// trying to merge two distinct constants.
struct ChaseOutcome {
  enum class Status { saturated, failed, budget_exhausted };
  Status status = Status::saturated;
  Instance instance;
  int rounds = 0;
  int tgd_firings = 0;
  int fd_firings = 0;
  std::optional<std::pair<Term, Term>> merge_conflict;
  std::vector<std::string> trace;  // "FIRE <rule> ON <facts> -> <facts>"

  bool saturated() const { return status == Status::saturated; }
};

/// Parallel-round restricted chase: each round enumerates all active
/// triggers against the start-of-round instance, fires the TGDs with fresh
/// nulls, then applies the FDs to a fixpoint (null |-> constant,
/// younger null |-> older null; constant clash fails).
ChaseOutcome restricted_chase(const Instance& i0, const ConstraintSet& sigma,
                              NullFactory& nulls, const ChaseOptions& opts);

struct TreeChaseOptions {
  int64_t node_budget = 250000;
  /// Literal breadth-first expansion with no subsumption pruning. The
  /// default prunes children that are subsumed by an existing fact of the
  /// same relation (agreeing on all inherited values, with a coarser or
  /// equal equality pattern); such children add nothing any CQ over the
  /// result could use.
  bool exact = false;
  /// Stop as soon as this query matches the accumulated facts.
  const CQ* early_stop_query = nullptr;
};

struct FactOrigin {
  int depth = 0;
  int64_t parent = -1;       // index into facts(), -1 for roots
  std::string rule;          // empty for roots
};

struct TreeChaseResult {
  Instance facts;                  // union of all node facts, i0 included
  std::vector<FactOrigin> origin;  // parallel to facts.facts()
  bool budget_hit = false;
  bool saturated = false;  // some level produced nothing new
  bool early_match = false;
  int depth_reached = 0;
  int64_t nodes = 0;
};

/// Breadth-first chase tree for linear TGDs (single body atom, single head
/// atom, repetitions allowed): every fact is a node, each rule fires at most
/// once per node, children get fresh nulls, expansion stops at `depth`.
TreeChaseResult tree_chase_linear(const Instance& i0,
                                  const std::vector<TGD>& theta, int depth,
                                  NullFactory& nulls,
                                  const TreeChaseOptions& opts = {});

/// Completeness horizon for a depth-bounded linear chase: a match of size k
/// survives within depth 2*k*(s1*m^(w+1) + s2), where s1 counts the
/// bounded-width rules, s2 the acyclic ones, m the arity bound and w the
/// width bound. Conservative overshoot is sound; throws on overflow.
int64_t depth_bound(int64_t k, int64_t sigma1_count, int64_t sigma2_count,
                    int64_t arity, int64_t width);

/// True when the basic position graph of the rules is acyclic (edge
/// R[i] -> S[j] whenever an exported variable travels from body position i
/// to head position j).
bool position_graph_acyclic(const std::vector<TGD>& rules);

struct TerminatingChase {
  int round_budget = 64;
  size_t fact_budget = 20000;
};
struct LinearDepthBounded {
  int width = 1;
  /// Optional explicit split; when absent, rules of width <= width form the
  /// bounded part and the rest must have an acyclic position graph.
  std::optional<std::pair<std::vector<TGD>, std::vector<TGD>>> split;
  int64_t node_budget = 250000;
};
struct SemiDecide {
  int round_budget = 64;
  size_t fact_budget = 20000;
};
using ContainmentStrategy =
    std::variant<TerminatingChase, LinearDepthBounded, SemiDecide>;

struct ContainmentVerdict {
  enum class Result { yes, no, unknown };
  Result result = Result::unknown;
  std::string note;
  int64_t depth = 0;   // depth bound used, if any
  int64_t facts = 0;
  int rounds = 0;
};

/// Decides (or semi-decides) q subseteq_sigma q2 by chasing CanonDB(q).
ContainmentVerdict contains_under(const CQ& q, const ConstraintSet& sigma,
                                  const CQ& q2,
                                  const ContainmentStrategy& strategy);

}  // namespace mondet

#endif  // MONDET_CHASE_H
