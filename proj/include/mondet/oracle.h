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

#ifndef MONDET_ORACLE_H
#define MONDET_ORACLE_H

#include "mondet/chase.h"
#include "mondet/linearize.h"
#include "mondet/schema.h"

namespace mondet {

/// A finite refutation of monotone answerability: I1 and I2 satisfy the
/// constraints, Iacc is a common subinstance that is access-valid in I1
/// (every access over Iacc values admits an output inside Iacc that is
/// valid in I1), and the query holds in I1 but not in I2.
struct CounterexampleCertificate {
  Instance i1, i2, iacc;

  struct AccessChoice {
    std::string method;
    std::vector<Term> binding;
    std::vector<Atom> output;
  };
  std::vector<AccessChoice> choices;
};

struct OracleOptions {
  int max_domain = 3;     // total distinct values, query constants included
  int max_facts = 4;      // fact budget for I1
  int chase_rounds = 24;  // budget for completing Iacc into I2
  bool accessible_constants = false;
};

/// Exhaustive search for a counterexample certificate over small domains
/// (isomorphism-pruned). Absence within the budget is not a proof of
/// answerability.
std::optional<CounterexampleCertificate> search_counterexample(
    const Schema& sch, const CQ& q, const OracleOptions& opts = {});

/// Re-checks every certificate condition from first principles; used by the
/// tests so that found certificates are trusted evidence.
bool certificate_valid(const Schema& sch, const CQ& q,
                       const CounterexampleCertificate& cert,
                       bool accessible_constants);

enum class Entailment { yes, no, unknown };

/// Whether sigma entails the rule: instantiate the body with fresh
/// constants, chase, and look for the head. `unknown` on budget exhaustion.
Entailment entails_dependency(const ConstraintSet& sigma, const TGD& rule,
                              int round_budget);
Entailment entails_dependency(const ConstraintSet& sigma,
                              const TruncAxiom& axiom, int arity,
                              int round_budget);

}  // namespace mondet

#endif  // MONDET_ORACLE_H
