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

#ifndef MONDET_SCHEMA_H
#define MONDET_SCHEMA_H

#include <string>
#include <vector>

#include "mondet/constraints.h"
#include "mondet/model.h"

namespace mondet {

/// Optional result bound of an access method. `result_bound` promises at
/// most k tuples and all of them when <= k exist; `lower_bound` keeps only
/// the second guarantee.
struct Bound {
  enum class Kind { none, result_bound, lower_bound };
  Kind kind = Kind::none;
  int64_t k = 0;

  static Bound none() { return {}; }
  static Bound result(int64_t k) { return {Kind::result_bound, k}; }
  static Bound lower(int64_t k) { return {Kind::lower_bound, k}; }
  bool is_bounded() const { return kind != Kind::none; }
  bool operator==(const Bound& o) const { return kind == o.kind && k == o.k; }
};

struct AccessMethod {
  std::string name;
  std::string relation;
  std::vector<int> inputs;  // 0-based positions, sorted
  Bound bound;

  bool input_free() const { return inputs.empty(); }
};

struct Schema {
  Signature signature;
  ConstraintSet constraints;
  std::vector<AccessMethod> methods;

  /// Output positions of a method (complement of its inputs).
  std::vector<int> outputs_of(const AccessMethod& mt) const;
  bool is_boolean(const AccessMethod& mt) const {
    return static_cast<int>(mt.inputs.size()) == signature.arity(mt.relation);
  }
  bool has_result_bounds() const;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Checks every structural invariant (names, arities, positions, bounds,
/// constraint well-formedness). Throws ValidationError with a description.
void validate(const Schema& sch);

/// ElimUB: every result bound becomes a result lower bound with the same k.
/// Idempotent; nothing else changes.
Schema elim_upper_bounds(const Schema& sch);

}  // namespace mondet

#endif  // MONDET_SCHEMA_H
