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

#ifndef MONDET_DECIDE_H
#define MONDET_DECIDE_H

#include "mondet/chase.h"
#include "mondet/linearize.h"
#include "mondet/reduce.h"

namespace mondet {

struct Verdict {
  enum class Answer { answerable, not_answerable, unknown };
  Answer answer = Answer::unknown;
  std::string reason;  // set for unknown verdicts
  ConstraintClass constraint_class;
  std::vector<std::string> pipeline;

  struct Witness {
    std::string kind;     // "chase-proof" | "complete-depth-bound" | ...
    std::string summary;
    std::vector<std::string> lines;
    int64_t bound = -1;
  } witness;

  struct Stats {
    int rounds = 0;
    int64_t facts = 0;
    int64_t depth = 0;
  } stats;

  bool answerable() const { return answer == Answer::answerable; }
  const char* answer_name() const;
};

struct DecideOptions {
  int width = 0;         // extra width margin for the linearization (0 = derived)
  int round_budget = 0;  // chase rounds for the semi-decision route (0 = default)
  bool accessible_constants = false;
  std::string class_override;  // "", "PureID", "PureFD", "UIDplusFD", ...
  int64_t node_budget = 100000;
  bool validate_input = true;
};

/// Complete decider for FD-only constraints (FD simplification + pruned
/// terminating chase).
Verdict decide_fd(const Schema& sch, const CQ& q,
                  const DecideOptions& opts = {});

/// Complete decider for ID-only constraints (existence-check simplification,
/// linearization, depth-bounded tree chase). Complete for any width; the
/// depth bound grows with it.
Verdict decide_id(const Schema& sch, const CQ& q,
                  const DecideOptions& opts = {});

/// Complete decider for UID + FD constraints (choice simplification,
/// separability rewriting, generalized linearization).
Verdict decide_uidfd(const Schema& sch, const CQ& q,
                     const DecideOptions& opts = {});

/// Classifies the constraints and dispatches; frontier-guarded TGDs get the
/// budgeted semi-decision, unsupported classes report Unknown.
Verdict decide(const Schema& sch, const CQ& q, const DecideOptions& opts = {});

/// The normalized containment problem and linearization of the ID route,
/// exposed for inspection and tests.
struct IdRouteArtifacts {
  SimplifiedSchema simplified;
  ContainmentProblem problem;  // after normalize_id_result_bounds
  std::vector<TruncAxiom> originals;
  Saturation sat;
  SigmaLin lin;
  Instance i0_lin;
  std::vector<TGD> rules_used;  // reachable rules incl. primed constraints
  int64_t depth = 0;
  int w = 1;
};
IdRouteArtifacts build_id_route(const Schema& sch, const CQ& q,
                                const DecideOptions& opts = {});

/// Likewise for the UID+FD route.
struct UidFdRouteArtifacts {
  ContainmentProblem problem;
  Minimized minimized;
  NormalizedGTGDs normalized;
  std::vector<SuitableGTGD> closure;
  Theta theta;
  Instance q_lin;
  std::vector<TGD> rules_used;
  int64_t depth = 0;
  int w = 1;
};
UidFdRouteArtifacts build_uidfd_route(const Schema& sch, const CQ& q,
                                      const DecideOptions& opts = {});

}  // namespace mondet

#endif  // MONDET_DECIDE_H
