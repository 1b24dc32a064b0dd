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

#include "mondet/reduce.h"

#include <algorithm>
#include <unordered_set>

namespace mondet {

const char* const kAccessible = "accessible";

namespace {

std::string acc_name(const std::string& relation) { return relation + "_acc"; }

Atom accessible_atom(const Term& t) { return Atom{kAccessible, {t}}; }

std::vector<Term> position_vars(int arity) {
  std::vector<Term> vars;
  for (int p = 0; p < arity; ++p)
    vars.push_back(Term::variable("v" + std::to_string(p)));
  return vars;
}

}  // namespace

std::string ContainmentProblem::dump() const {
  std::string s;
  s += "# left:  " + left.to_string() + "\n";
  s += "# right: " + right.to_string() + "\n";
  for (const TGD& t : gamma.tgds)
    s += "tgd: " + t.to_string() + "    # " + t.id + "\n";
  for (const FD& fd : gamma.fds) s += "fd " + fd.to_string() + "\n";
  return s;
}

ContainmentProblem amondet_containment(const Schema& sch, const CQ& q,
                                       const AmondetOptions& opts) {
  for (const AccessMethod& mt : sch.methods)
    if (mt.bound.is_bounded() && mt.bound.k != 1)
      throw UnsupportedBound(mt.bound.k);

  ContainmentProblem p;
  p.inlined = opts.inline_axioms;
  p.methods = sch.methods;
  p.left = q;
  p.left.free_vars.clear();  // Booleanize
  p.right = prime_query(p.left);

  // Expanded signature.
  p.sig.add({kAccessible, 1, {}});
  std::unordered_set<std::string> needs_acc;
  if (!opts.inline_axioms)
    for (const auto& r : sch.signature.relations()) needs_acc.insert(r.name);
  for (const auto& r : sch.signature.relations()) {
    p.sig.add({r.name, r.arity, r.attrs});
    p.sig.add({primed(r.name), r.arity, r.attrs});
    if (needs_acc.count(r.name))
      p.sig.add({acc_name(r.name), r.arity, r.attrs});
  }

  // Sigma and Sigma'.
  int n = 0;
  for (const TGD& t : sch.constraints.tgds) {
    TGD orig = t;
    if (orig.id.empty()) orig.id = "sigma:" + std::to_string(n);
    orig.role = RuleRole::constraint;
    p.gamma.tgds.push_back(orig);
    p.gamma.tgds.push_back(prime_tgd(orig, orig.id + "'"));
    ++n;
  }
  for (const FD& fd : sch.constraints.fds) {
    p.gamma.fds.push_back(fd);
    p.gamma.fds.push_back(prime_fd(fd));
  }

  // Accessibility axioms.
  for (const AccessMethod& mt : sch.methods) {
    const int arity = sch.signature.arity(mt.relation);
    std::vector<Term> vars = position_vars(arity);
    Atom base{mt.relation, vars};

    // Guard first, so the homomorphism search binds everything immediately.
    std::vector<Atom> body;
    body.push_back(base);
    for (int i : mt.inputs) body.push_back(accessible_atom(vars[i]));

    TGD ax;
    ax.id = "ax:" + mt.name;
    ax.method = mt.name;
    ax.body = body;

    if (!mt.bound.is_bounded()) {
      if (opts.inline_axioms) {
        ax.role = RuleRole::access_inlined;
        ax.head.push_back(prime_atom(base));
        for (int o : sch.outputs_of(mt))
          ax.head.push_back(accessible_atom(vars[o]));
      } else {
        ax.role = RuleRole::access_raw;
        ax.head.push_back(Atom{acc_name(mt.relation), vars});
      }
    } else {
      // Result lower bound of 1: the access returns some matching tuple.
      std::vector<int> exported = mt.inputs;
      if (opts.export_determined) {
        for (int d : detby(mt.relation, mt.inputs, sch.constraints.fds))
          if (!std::count(exported.begin(), exported.end(), d))
            exported.push_back(d);
        std::sort(exported.begin(), exported.end());
      }
      std::vector<Term> head_args;
      std::unordered_set<int> keep(exported.begin(), exported.end());
      for (int pos = 0; pos < arity; ++pos)
        head_args.push_back(keep.count(pos)
                                ? vars[pos]
                                : Term::variable("z" + std::to_string(pos)));
      if (opts.inline_axioms) {
        ax.role = RuleRole::access_inlined;
        ax.head.push_back(Atom{mt.relation, head_args});
        ax.head.push_back(Atom{primed(mt.relation), head_args});
        std::unordered_set<int> is_input(mt.inputs.begin(), mt.inputs.end());
        for (int pos = 0; pos < arity; ++pos)
          if (!is_input.count(pos))
            ax.head.push_back(accessible_atom(head_args[pos]));
      } else {
        ax.role = RuleRole::access_raw;
        ax.head.push_back(Atom{acc_name(mt.relation), head_args});
      }
    }
    p.gamma.tgds.push_back(std::move(ax));
  }

  // R_acc(w) -> R(w) /\ R'(w) /\ accessible(w_i), raw form only.
  if (!opts.inline_axioms) {
    for (const auto& r : sch.signature.relations()) {
      std::vector<Term> vars = position_vars(r.arity);
      TGD third;
      third.id = "acc:" + r.name;
      third.role = RuleRole::acc_to_base;
      third.body = {Atom{acc_name(r.name), vars}};
      third.head.push_back(Atom{r.name, vars});
      third.head.push_back(Atom{primed(r.name), vars});
      for (const Term& v : vars) third.head.push_back(accessible_atom(v));
      p.gamma.tgds.push_back(std::move(third));
    }
  }
  return p;
}

ContainmentProblem rewrite_unbounded_axioms(const ContainmentProblem& p) {
  if (p.inlined) return p;
  ContainmentProblem out;
  out.left = p.left;
  out.right = p.right;
  out.methods = p.methods;
  out.inlined = true;

  out.sig.add({kAccessible, 1, {}});
  for (const auto& r : p.sig.relations())
    if (r.name != kAccessible && r.name.rfind("_acc") == std::string::npos)
      out.sig.add(r);

  std::unordered_map<std::string, const AccessMethod*> by_name;
  for (const AccessMethod& mt : p.methods) by_name[mt.name] = &mt;

  for (const TGD& t : p.gamma.tgds) {
    switch (t.role) {
      case RuleRole::acc_to_base:
        break;  // inlined away
      case RuleRole::access_raw: {
        auto it = by_name.find(t.method);
        if (it == by_name.end() || it->second->bound.is_bounded())
          throw std::runtime_error(
              "rewrite_unbounded_axioms: result-bounded axiom for '" +
              t.method + "' cannot be inlined here");
        const AccessMethod& mt = *it->second;
        const Atom& base = t.body.front();
        TGD ax;
        ax.id = t.id;
        ax.method = t.method;
        ax.role = RuleRole::access_inlined;
        ax.body = t.body;
        ax.head.push_back(prime_atom(base));
        std::unordered_set<int> is_input(mt.inputs.begin(), mt.inputs.end());
        for (size_t pos = 0; pos < base.args.size(); ++pos)
          if (!is_input.count(static_cast<int>(pos)))
            ax.head.push_back(accessible_atom(base.args[pos]));
        out.gamma.tgds.push_back(std::move(ax));
        break;
      }
      default:
        out.gamma.tgds.push_back(t);
    }
  }
  out.gamma.fds = p.gamma.fds;
  return out;
}

SplitAxioms split_access_axioms(const ContainmentProblem& p) {
  if (!p.inlined)
    throw std::runtime_error("split_access_axioms: axioms must be inlined");
  SplitAxioms out;
  for (const TGD& t : p.gamma.tgds) {
    if (t.role != RuleRole::access_inlined) continue;
    if (!t.existentials().empty())
      throw std::runtime_error(
          "split_access_axioms: bound-1 axiom for '" + t.method +
          "' has no truncated/transfer split");
    int k = 0;
    for (const Atom& h : t.head) {
      if (h.relation == kAccessible) {
        TGD tr;
        tr.id = t.id + ":trunc" + std::to_string(k++);
        tr.method = t.method;
        tr.role = RuleRole::truncated;
        tr.body = t.body;
        tr.head = {h};
        out.truncated.push_back(std::move(tr));
      } else {
        TGD tf;
        tf.id = t.id + ":transfer";
        tf.method = t.method;
        tf.role = RuleRole::transfer;
        tf.body = t.body;
        tf.head = {h};
        out.transfer.push_back(std::move(tf));
      }
    }
  }
  return out;
}

ContainmentProblem normalize_id_result_bounds(const ContainmentProblem& p,
                                              const SimplifiedSchema& simp) {
  if (!p.inlined)
    throw std::runtime_error("normalize_id_result_bounds: inline axioms first");

  std::unordered_set<std::string> view_relations;
  std::unordered_set<std::string> view_methods;
  for (const ViewInfo& v : simp.views) {
    view_relations.insert(v.view_relation);
    view_methods.insert(v.new_method);
  }

  ContainmentProblem out;
  out.left = p.left;
  out.right = p.right;
  out.inlined = true;
  auto is_view_relation = [&](const std::string& rel) {
    if (view_relations.count(rel)) return true;
    return rel.size() > 1 && rel.back() == '\'' &&
           view_relations.count(rel.substr(0, rel.size() - 1)) > 0;
  };

  for (const AccessMethod& mt : p.methods)
    if (!view_methods.count(mt.name)) out.methods.push_back(mt);
  for (const auto& r : p.sig.relations())
    if (!is_view_relation(r.name)) out.sig.add(r);

  for (const TGD& t : p.gamma.tgds) {
    bool touches_view = false;
    for (const Atom& a : t.body)
      if (is_view_relation(a.relation)) touches_view = true;
    for (const Atom& a : t.head)
      if (is_view_relation(a.relation)) touches_view = true;
    if (t.role == RuleRole::access_inlined && view_methods.count(t.method))
      continue;  // consumed by the merged transfer below
    if (touches_view) continue;  // view IDs never fire or lead nowhere
    out.gamma.tgds.push_back(t);
  }
  out.gamma.fds = p.gamma.fds;

  // One Result-bounded Fact Transfer per formerly-bounded method, guarded by
  // accessibility of its input positions.
  for (const ViewInfo& v : simp.views) {
    const int arity = out.sig.arity(v.base_relation);
    std::vector<Term> vars = position_vars(arity);
    TGD rbft;
    rbft.id = "rbft:" + v.method;
    rbft.method = v.method;
    rbft.role = RuleRole::rb_fact_transfer;
    rbft.body.push_back(Atom{v.base_relation, vars});
    for (int i : v.inputs) rbft.body.push_back(accessible_atom(vars[i]));
    std::vector<Term> head_args;
    std::unordered_set<int> keep(v.inputs.begin(), v.inputs.end());
    for (int pos = 0; pos < arity; ++pos)
      head_args.push_back(keep.count(pos)
                              ? vars[pos]
                              : Term::variable("z" + std::to_string(pos)));
    rbft.head = {Atom{primed(v.base_relation), head_args}};
    out.gamma.tgds.push_back(std::move(rbft));
  }
  return out;
}

Instance initial_instance(const ContainmentProblem& p, bool seed_constants,
                          NullFactory& nulls) {
  Instance i0 = canonical_database(p.left, nulls);
  if (seed_constants)
    for (const Term& c : p.left.constants())
      i0.insert(accessible_atom(c));
  return i0;
}

}  // namespace mondet
