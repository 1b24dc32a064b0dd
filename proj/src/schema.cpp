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

#include "mondet/schema.h"

#include <limits>
#include <unordered_set>

namespace mondet {

namespace {
const char* kAccessiblePredicate = "accessible";
}

std::vector<int> Schema::outputs_of(const AccessMethod& mt) const {
  std::vector<int> out;
  std::unordered_set<int> in(mt.inputs.begin(), mt.inputs.end());
  for (int p = 0; p < signature.arity(mt.relation); ++p)
    if (!in.count(p)) out.push_back(p);
  return out;
}

bool Schema::has_result_bounds() const {
  for (const AccessMethod& mt : methods)
    if (mt.bound.is_bounded()) return true;
  return false;
}

namespace {

void check_atom(const Signature& sig, const Atom& a, const std::string& where) {
  if (!sig.has(a.relation))
    throw ValidationError(where + ": unknown relation '" + a.relation + "'");
  if (static_cast<int>(a.args.size()) != sig.arity(a.relation))
    throw ValidationError(where + ": arity mismatch for '" + a.relation +
                          "' (expected " +
                          std::to_string(sig.arity(a.relation)) + ", got " +
                          std::to_string(a.args.size()) + ")");
}

}  // namespace

void validate(const Schema& sch) {
  std::unordered_set<std::string> rel_names;
  for (const auto& r : sch.signature.relations()) {
    if (r.arity < 1)
      throw ValidationError("relation '" + r.name + "' must have arity >= 1");
    if (!rel_names.insert(r.name).second)
      throw ValidationError("duplicate relation '" + r.name + "'");
    bool reserved = r.name == kAccessiblePredicate ||
                    r.name.find_first_of("'@{},") != std::string::npos ||
                    (r.name.size() > 4 &&
                     r.name.compare(r.name.size() - 4, 4, "_acc") == 0);
    if (reserved)
      throw ValidationError("relation name '" + r.name + "' is reserved");
    if (!r.attrs.empty()) {
      if (static_cast<int>(r.attrs.size()) != r.arity)
        throw ValidationError("relation '" + r.name +
                              "': attribute count != arity");
      std::unordered_set<std::string> attr_names(r.attrs.begin(),
                                                 r.attrs.end());
      if (attr_names.size() != r.attrs.size())
        throw ValidationError("relation '" + r.name +
                              "': duplicate attribute name");
    }
  }

  std::unordered_set<std::string> method_names;
  for (const AccessMethod& mt : sch.methods) {
    if (!method_names.insert(mt.name).second)
      throw ValidationError("duplicate method '" + mt.name + "'");
    if (!sch.signature.has(mt.relation))
      throw ValidationError("method '" + mt.name + "' on unknown relation '" +
                            mt.relation + "'");
    int arity = sch.signature.arity(mt.relation);
    std::unordered_set<int> seen;
    for (int p : mt.inputs) {
      if (p < 0 || p >= arity)
        throw ValidationError("method '" + mt.name + "': input position " +
                              std::to_string(p + 1) + " out of range for '" +
                              mt.relation + "'");
      if (!seen.insert(p).second)
        throw ValidationError("method '" + mt.name +
                              "': repeated input position");
    }
    if (mt.bound.is_bounded() &&
        (mt.bound.k < 1 ||
         mt.bound.k > std::numeric_limits<int32_t>::max()))
      throw ValidationError("method '" + mt.name + "': bound must be in [1, 2^31-1]");
  }

  for (const TGD& t : sch.constraints.tgds) {
    if (t.body.empty() || t.head.empty())
      throw ValidationError("dependency with empty body or head");
    for (const Atom& a : t.body) {
      check_atom(sch.signature, a, "dependency body");
      for (const Term& x : a.args)
        if (!x.is_variable())
          throw ValidationError("constants are not allowed in constraints");
    }
    for (const Atom& a : t.head) {
      check_atom(sch.signature, a, "dependency head");
      for (const Term& x : a.args)
        if (!x.is_variable())
          throw ValidationError("constants are not allowed in constraints");
    }
  }
  for (const FD& fd : sch.constraints.fds) {
    if (!sch.signature.has(fd.relation))
      throw ValidationError("fd on unknown relation '" + fd.relation + "'");
    int arity = sch.signature.arity(fd.relation);
    for (int d : fd.determiner)
      if (d < 0 || d >= arity)
        throw ValidationError("fd on '" + fd.relation +
                              "': determiner position out of range");
    if (fd.determined < 0 || fd.determined >= arity)
      throw ValidationError("fd on '" + fd.relation +
                            "': determined position out of range");
  }
}

Schema elim_upper_bounds(const Schema& sch) {
  Schema out = sch;
  for (AccessMethod& mt : out.methods)
    if (mt.bound.kind == Bound::Kind::result_bound)
      mt.bound = Bound::lower(mt.bound.k);
  return out;
}

}  // namespace mondet
