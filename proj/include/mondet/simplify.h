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

#ifndef MONDET_SIMPLIFY_H
#define MONDET_SIMPLIFY_H

#include "mondet/schema.h"

namespace mondet {

enum class SimplificationKind {
  existence_check,
  fd_simplification,
  choice,
  none_applicable,
};

const char* simplification_name(SimplificationKind k);

/// Class-driven choice of simplification.
SimplificationKind select_simplification(const Schema& sch);

/// Provenance of a view relation R_mt introduced by a simplification.
/// `positions` lists, in R_mt argument order, the base-relation positions it
/// projects (inputs ascending first, then the remaining DetBy positions).
struct ViewInfo {
  std::string view_relation;
  std::string base_relation;
  std::string method;          // the replaced result-bounded method
  std::string new_method;      // its unbounded replacement
  std::vector<int> inputs;     // original input positions (sorted)
  std::vector<int> positions;  // base positions in view argument order
};

struct SimplifiedSchema {
  Schema schema;
  std::vector<ViewInfo> views;
};

/// Replaces each result-bounded method mt on R by a Boolean method on a new
/// relation R__mt of arity |inputs(mt)|, linked to R by two IDs. Unbounded
/// methods and existing constraints are untouched.
SimplifiedSchema existence_check_simplification(const Schema& sch);

/// Like the existence check, but R__mt projects DetBy(mt) = the positions
/// determined by mt's inputs, and the replacement method keeps the inputs.
/// Coincides with the existence check when the FDs imply nothing.
SimplifiedSchema fd_simplification(const Schema& sch);

/// Replaces every result bound (upper or lower) by a result bound of 1.
/// Signature and constraints unchanged; idempotent.
Schema choice_simplification(const Schema& sch);

}  // namespace mondet

#endif  // MONDET_SIMPLIFY_H
