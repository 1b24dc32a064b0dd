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

#include "mondet/simplify.h"

#include <algorithm>
#include <unordered_set>

namespace mondet {

const char* simplification_name(SimplificationKind k) {
  switch (k) {
    case SimplificationKind::existence_check: return "existence-check";
    case SimplificationKind::fd_simplification: return "fd";
    case SimplificationKind::choice: return "choice";
    case SimplificationKind::none_applicable: return "none";
  }
  return "?";
}

SimplificationKind select_simplification(const Schema& sch) {
  ConstraintClass cc = classify(sch.constraints);
  switch (cc.kind) {
    case ConstraintClass::Kind::pure_id:
      return SimplificationKind::existence_check;
    case ConstraintClass::Kind::pure_fd:
      return SimplificationKind::fd_simplification;
    case ConstraintClass::Kind::uid_plus_fd:
    case ConstraintClass::Kind::frontier_guarded_tgd:
      return SimplificationKind::choice;
    case ConstraintClass::Kind::unsupported:
      return SimplificationKind::none_applicable;
  }
  return SimplificationKind::none_applicable;
}

namespace {

std::string view_name(const Signature& sig, const std::string& relation,
                      const std::string& method) {
  std::string base = relation + "__" + method;
  std::string name = base;
  int n = 2;
  while (sig.has(name)) name = base + "_" + std::to_string(n++);
  return name;
}

// Builds the biconditional "R_mt(x) <-> exists z R(...)" as two IDs, where
// `positions` are the base positions kept by the view, in view arg order.
void add_view(SimplifiedSchema& out, const Schema& sch,
              const AccessMethod& mt, const std::vector<int>& positions,
              const std::vector<int>& method_inputs_in_view) {
  const int base_arity = sch.signature.arity(mt.relation);
  std::string vname = view_name(out.schema.signature, mt.relation, mt.name);

  Signature::Relation vrel;
  vrel.name = vname;
  vrel.arity = static_cast<int>(positions.size());
  out.schema.signature.add(vrel);

  // One variable per base position; the view atom picks the kept ones.
  std::vector<Term> base_args;
  for (int p = 0; p < base_arity; ++p)
    base_args.push_back(Term::variable("v" + std::to_string(p)));
  Atom base_atom{mt.relation, base_args};
  Atom view_atom{vname, {}};
  for (int p : positions) view_atom.args.push_back(base_args[p]);

  TGD to_view;
  to_view.id = "view:" + vname + ":in";
  to_view.role = RuleRole::relation_to_view;
  to_view.method = mt.name;
  to_view.body = {base_atom};
  to_view.head = {view_atom};
  out.schema.constraints.tgds.push_back(to_view);

  TGD from_view;
  from_view.id = "view:" + vname + ":out";
  from_view.role = RuleRole::view_to_relation;
  from_view.method = mt.name;
  from_view.body = {view_atom};
  from_view.head = {base_atom};
  out.schema.constraints.tgds.push_back(from_view);

  AccessMethod replacement;
  replacement.name = mt.name + "'";
  replacement.relation = vname;
  replacement.inputs = method_inputs_in_view;
  replacement.bound = Bound::none();
  out.schema.methods.push_back(replacement);

  ViewInfo info;
  info.view_relation = vname;
  info.base_relation = mt.relation;
  info.method = mt.name;
  info.new_method = replacement.name;
  info.inputs = mt.inputs;
  info.positions = positions;
  out.views.push_back(std::move(info));
}

SimplifiedSchema simplify_views(const Schema& sch, bool use_detby) {
  SimplifiedSchema out;
  out.schema.signature = sch.signature;
  out.schema.constraints = sch.constraints;
  for (const AccessMethod& mt : sch.methods)
    if (!mt.bound.is_bounded()) out.schema.methods.push_back(mt);

  for (const AccessMethod& mt : sch.methods) {
    if (!mt.bound.is_bounded()) continue;
    std::vector<int> kept = mt.inputs;
    if (use_detby) {
      std::vector<int> closure =
          detby(mt.relation, mt.inputs, sch.constraints.fds);
      for (int p : closure)
        if (!std::count(kept.begin(), kept.end(), p)) kept.push_back(p);
      // inputs ascending first, then the remaining DetBy positions ascending
      std::sort(kept.begin() + mt.inputs.size(), kept.end());
    }
    std::vector<int> inputs_in_view;
    if (use_detby) {
      for (size_t i = 0; i < mt.inputs.size(); ++i)
        inputs_in_view.push_back(static_cast<int>(i));
    } else {
      // Boolean method: every view position is an input.
      for (size_t i = 0; i < kept.size(); ++i)
        inputs_in_view.push_back(static_cast<int>(i));
    }
    add_view(out, sch, mt, kept, inputs_in_view);
  }
  return out;
}

}  // namespace

SimplifiedSchema existence_check_simplification(const Schema& sch) {
  return simplify_views(sch, /*use_detby=*/false);
}

SimplifiedSchema fd_simplification(const Schema& sch) {
  return simplify_views(sch, /*use_detby=*/true);
}

Schema choice_simplification(const Schema& sch) {
  Schema out = sch;
  for (AccessMethod& mt : out.methods)
    if (mt.bound.is_bounded()) mt.bound = Bound::result(1);
  return out;
}

}  // namespace mondet
