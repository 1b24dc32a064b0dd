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

#include "mondet/chase.h"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace mondet {

namespace {

// Head instantiation for a fired trigger: exported variables from h, fresh
// nulls for the existentials (one null per variable).
std::vector<Atom> instantiate_head(const TGD& rule, const Homomorphism& h,
                                   NullFactory& nulls) {
  Homomorphism full = h;
  for (const std::string& v : rule.existentials())
    full.emplace(v, nulls.fresh(v));
  std::vector<Atom> out;
  out.reserve(rule.head.size());
  for (const Atom& a : rule.head) out.push_back(apply_hom(a, full));
  return out;
}

// Whether the trigger h for `rule` extends to a homomorphism of the head.
bool head_satisfied(const TGD& rule, const Homomorphism& h,
                    const Instance& inst) {
  bool found = false;
  for_each_homomorphism(rule.head, inst, h, [&](const Homomorphism&) {
    found = true;
    return false;
  });
  return found;
}

struct MergeResolution {
  bool failed = false;
  Term survivor, removed;
};

// Merge orientation: constants beat nulls, older nulls beat younger ones.
MergeResolution resolve_merge(const Term& a, const Term& b) {
  MergeResolution r;
  if (a.is_constant() && b.is_constant()) {
    r.failed = true;
    r.survivor = a;
    r.removed = b;
    return r;
  }
  if (a.is_constant()) {
    r.survivor = a;
    r.removed = b;
  } else if (b.is_constant()) {
    r.survivor = b;
    r.removed = a;
  } else if (a.null_id() <= b.null_id()) {
    r.survivor = a;
    r.removed = b;
  } else {
    r.survivor = b;
    r.removed = a;
  }
  return r;
}

Instance substitute(const Instance& inst, const Term& from, const Term& to) {
  Instance out;
  for (const Atom& f : inst.facts()) {
    Atom g = f;
    for (Term& t : g.args)
      if (t == from) t = to;
    out.insert(std::move(g));
  }
  return out;
}

}  // namespace

ChaseOutcome restricted_chase(const Instance& i0, const ConstraintSet& sigma,
                              NullFactory& nulls, const ChaseOptions& opts) {
  ChaseOutcome out;
  out.instance = i0;

  // Apply the FDs to the initial instance as well.
  auto fd_fixpoint = [&](Instance& inst) -> bool {
    bool again = true;
    while (again) {
      again = false;
      for (const FD& fd : sigma.fds) {
        const auto& idx = inst.facts_of(fd.relation);
        for (size_t x = 0; x < idx.size() && !again; ++x) {
          for (size_t y = x + 1; y < idx.size() && !again; ++y) {
            const Atom& f = inst.facts()[idx[x]];
            const Atom& g = inst.facts()[idx[y]];
            bool agree = true;
            for (int d : fd.determiner)
              if (f.args[d] != g.args[d]) {
                agree = false;
                break;
              }
            if (!agree || f.args[fd.determined] == g.args[fd.determined])
              continue;
            MergeResolution mr =
                resolve_merge(f.args[fd.determined], g.args[fd.determined]);
            if (mr.failed) {
              out.status = ChaseOutcome::Status::failed;
              out.merge_conflict = {mr.survivor, mr.removed};
              return false;
            }
            if (opts.trace)
              out.trace.push_back("MERGE " + fd.to_string() + " ON " +
                                  f.to_string() + ", " + g.to_string() +
                                  " -> " + mr.removed.to_string() + " := " +
                                  mr.survivor.to_string());
            inst = substitute(inst, mr.removed, mr.survivor);
            ++out.fd_firings;
            again = true;
          }
        }
      }
    }
    return true;
  };

  if (!fd_fixpoint(out.instance)) return out;

  for (int round = 0; round < opts.round_budget; ++round) {
    const Instance snapshot = out.instance;
    bool fired = false;
    bool over_budget = false;
    for (const TGD& rule : sigma.tgds) {
      if (over_budget) break;
      for_each_homomorphism(
          rule.body, snapshot, {}, [&](const Homomorphism& h) {
            if (out.instance.size() > opts.fact_budget) {
              over_budget = true;
              return false;
            }
            if (head_satisfied(rule, h, snapshot)) return true;
            std::vector<Atom> produced = instantiate_head(rule, h, nulls);
            bool added = false;
            for (Atom& f : produced)
              if (out.instance.insert(f)) added = true;
            if (added) {
              fired = true;
              ++out.tgd_firings;
              if (opts.trace) {
                std::vector<Atom> trigger;
                for (const Atom& b : rule.body) trigger.push_back(apply_hom(b, h));
                out.trace.push_back("FIRE " + rule.id + " ON " +
                                    atoms_to_string(trigger) + " -> " +
                                    atoms_to_string(produced));
              }
            }
            return true;
          });
    }
    if (!fd_fixpoint(out.instance)) {
      out.rounds = round + 1;
      return out;
    }
    out.rounds = round + 1;
    if (over_budget) break;
    if (!fired) {
      out.status = ChaseOutcome::Status::saturated;
      return out;
    }
    if (out.instance.size() > opts.fact_budget) break;
  }
  out.status = ChaseOutcome::Status::budget_exhausted;
  return out;
}

namespace {

// True when `cand` is subsumed by `existing`: same relation, identical on
// every inherited (non-fresh) value, and its equality pattern refines the
// existing one. The subtree under `cand` then maps homomorphically into the
// subtree under `existing` by a map that is the identity on every value the
// rest of the tree can see, so no CQ match is lost by dropping `cand`.
bool subsumed_by(const Atom& cand, const std::vector<bool>& fresh,
                 const Atom& existing) {
  const size_t n = cand.args.size();
  for (size_t p = 0; p < n; ++p) {
    if (!fresh[p] && existing.args[p] != cand.args[p]) return false;
    for (size_t q = p + 1; q < n; ++q)
      if (cand.args[p] == cand.args[q] && existing.args[p] != existing.args[q])
        return false;
  }
  return true;
}

}  // namespace

TreeChaseResult tree_chase_linear(const Instance& i0,
                                  const std::vector<TGD>& theta, int depth,
                                  NullFactory& nulls,
                                  const TreeChaseOptions& opts) {
  for (const TGD& t : theta)
    if (!t.is_linear())
      throw std::runtime_error("tree_chase_linear: non-linear rule " + t.id);

  std::unordered_map<std::string, std::vector<const TGD*>> rules_by_relation;
  for (const TGD& t : theta) rules_by_relation[t.body[0].relation].push_back(&t);

  TreeChaseResult res;
  std::vector<size_t> level;
  for (const Atom& f : i0.facts()) {
    if (res.facts.insert(f)) {
      res.origin.push_back({0, -1, ""});
      level.push_back(res.facts.size() - 1);
    }
  }
  res.nodes = static_cast<int64_t>(level.size());

  if (opts.early_stop_query &&
      evaluate_boolean(*opts.early_stop_query, res.facts)) {
    res.early_match = true;
    return res;
  }

  for (int d = 0; d < depth; ++d) {
    std::vector<size_t> next;
    for (size_t node : level) {
      const Atom fact = res.facts.facts()[node];
      auto it = rules_by_relation.find(fact.relation);
      if (it == rules_by_relation.end()) continue;
      for (const TGD* rule : it->second) {
        Homomorphism h;
        {
          // Single body atom: the match, if any, is unique.
          bool ok = true;
          const Atom& b = rule->body[0];
          if (b.args.size() != fact.args.size()) continue;
          for (size_t i = 0; i < b.args.size() && ok; ++i) {
            const Term& t = b.args[i];
            if (!t.is_variable()) {
              ok = t == fact.args[i];
              continue;
            }
            auto at = h.find(t.name());
            if (at == h.end())
              h.emplace(t.name(), fact.args[i]);
            else
              ok = at->second == fact.args[i];
          }
          if (!ok) continue;
        }
        std::unordered_set<std::string> exist;
        for (const std::string& v : rule->existentials()) exist.insert(v);
        Atom child{rule->head[0].relation, {}};
        std::vector<bool> fresh;
        Homomorphism full = h;
        for (const Term& t : rule->head[0].args) {
          if (t.is_variable() && exist.count(t.name())) {
            auto at = full.find(t.name());
            if (at == full.end())
              at = full.emplace(t.name(), nulls.fresh(t.name())).first;
            child.args.push_back(at->second);
            fresh.push_back(true);
          } else {
            child.args.push_back(t.is_variable() ? full.at(t.name()) : t);
            fresh.push_back(false);
          }
        }
        if (res.facts.contains(child)) continue;
        if (!opts.exact) {
          bool dominated = false;
          int anchor = -1;
          for (size_t p = 0; p < fresh.size(); ++p)
            if (!fresh[p]) {
              anchor = static_cast<int>(p);
              break;
            }
          if (anchor >= 0) {
            for (size_t idx : res.facts.facts_with(child.relation, anchor,
                                                   child.args[anchor]))
              if (subsumed_by(child, fresh, res.facts.facts()[idx])) {
                dominated = true;
                break;
              }
          } else {
            // All values fresh: any same-relation fact with a compatible
            // equality pattern subsumes the child.
            for (size_t idx : res.facts.facts_of(child.relation))
              if (subsumed_by(child, fresh, res.facts.facts()[idx])) {
                dominated = true;
                break;
              }
          }
          if (dominated) continue;
        }
        res.facts.insert(child);
        res.origin.push_back(
            {d + 1, static_cast<int64_t>(node), rule->id});
        next.push_back(res.facts.size() - 1);
        ++res.nodes;
        if (res.nodes > opts.node_budget) {
          res.budget_hit = true;
          res.depth_reached = d + 1;
          return res;
        }
      }
    }
    res.depth_reached = d + 1;
    if (next.empty()) {
      res.saturated = true;
      return res;
    }
    if (opts.early_stop_query &&
        evaluate_boolean(*opts.early_stop_query, res.facts)) {
      res.early_match = true;
      return res;
    }
    level = std::move(next);
  }
  return res;
}

int64_t depth_bound(int64_t k, int64_t sigma1_count, int64_t sigma2_count,
                    int64_t arity, int64_t width) {
  if (k < 0 || sigma1_count < 0 || sigma2_count < 0 || arity < 0 || width < 0)
    throw std::runtime_error("depth_bound: negative argument");
  __int128 pow = 1;
  for (int64_t i = 0; i < width + 1; ++i) {
    pow *= arity;
    if (pow > (__int128)1 << 62) throw std::runtime_error("depth_bound overflow");
  }
  __int128 d = 2 * (__int128)k * (sigma1_count * pow + sigma2_count);
  if (d > (__int128)1 << 62) throw std::runtime_error("depth_bound overflow");
  return static_cast<int64_t>(d);
}

bool position_graph_acyclic(const std::vector<TGD>& rules) {
  // Nodes are (relation, position); Kahn's toposort.
  std::map<std::pair<std::string, int>, std::set<std::pair<std::string, int>>>
      edges;
  std::set<std::pair<std::string, int>> nodes;
  for (const TGD& t : rules) {
    std::unordered_map<std::string, std::vector<std::pair<std::string, int>>>
        body_pos;
    for (const Atom& a : t.body)
      for (size_t i = 0; i < a.args.size(); ++i) {
        nodes.insert({a.relation, (int)i});
        if (a.args[i].is_variable())
          body_pos[a.args[i].name()].push_back({a.relation, (int)i});
      }
    for (const Atom& a : t.head)
      for (size_t i = 0; i < a.args.size(); ++i) {
        nodes.insert({a.relation, (int)i});
        if (!a.args[i].is_variable()) continue;
        auto it = body_pos.find(a.args[i].name());
        if (it == body_pos.end()) continue;
        for (const auto& src : it->second)
          edges[src].insert({a.relation, (int)i});
      }
  }
  std::map<std::pair<std::string, int>, int> indeg;
  for (const auto& n : nodes) indeg[n] = 0;
  for (const auto& [src, dsts] : edges)
    for (const auto& d : dsts) indeg[d]++;
  std::deque<std::pair<std::string, int>> ready;
  for (const auto& [n, deg] : indeg)
    if (deg == 0) ready.push_back(n);
  size_t seen = 0;
  while (!ready.empty()) {
    auto n = ready.front();
    ready.pop_front();
    ++seen;
    auto it = edges.find(n);
    if (it == edges.end()) continue;
    for (const auto& d : it->second)
      if (--indeg[d] == 0) ready.push_back(d);
  }
  return seen == nodes.size();
}

ContainmentVerdict contains_under(const CQ& q, const ConstraintSet& sigma,
                                  const CQ& q2,
                                  const ContainmentStrategy& strategy) {
  ContainmentVerdict v;
  NullFactory nulls;
  Instance i0 = canonical_database(q, nulls);

  if (const auto* tc = std::get_if<TerminatingChase>(&strategy)) {
    ChaseOutcome oc =
        restricted_chase(i0, sigma, nulls, {tc->round_budget, tc->fact_budget, false});
    v.rounds = oc.rounds;
    v.facts = static_cast<int64_t>(oc.instance.size());
    switch (oc.status) {
      case ChaseOutcome::Status::saturated:
        v.result = evaluate_boolean(q2, oc.instance)
                       ? ContainmentVerdict::Result::yes
                       : ContainmentVerdict::Result::no;
        break;
      case ChaseOutcome::Status::failed:
        v.result = ContainmentVerdict::Result::yes;  // left side unsatisfiable
        v.note = "left side unsatisfiable under the FDs";
        break;
      case ChaseOutcome::Status::budget_exhausted:
        v.result = ContainmentVerdict::Result::unknown;
        v.note = "chase round budget exhausted";
        break;
    }
    return v;
  }

  if (const auto* ld = std::get_if<LinearDepthBounded>(&strategy)) {
    if (!sigma.fds.empty())
      throw std::runtime_error("LinearDepthBounded: FDs not supported");
    std::vector<TGD> bounded, acyclic;
    if (ld->split) {
      bounded = ld->split->first;
      acyclic = ld->split->second;
    } else {
      for (const TGD& t : sigma.tgds) {
        if (!t.is_linear())
          throw std::runtime_error("LinearDepthBounded: non-linear rule " +
                                   t.id);
        if (static_cast<int>(t.exported().size()) <= ld->width)
          bounded.push_back(t);
        else
          acyclic.push_back(t);
      }
      if (!position_graph_acyclic(acyclic))
        throw std::runtime_error(
            "LinearDepthBounded: residual rules have a cyclic position graph");
    }
    int64_t arity = 0;
    for (const TGD& t : sigma.tgds)
      for (const Atom& a : {t.body[0], t.head[0]})
        arity = std::max<int64_t>(arity, static_cast<int64_t>(a.args.size()));
    for (const Atom& a : q.atoms)
      arity = std::max<int64_t>(arity, static_cast<int64_t>(a.args.size()));
    v.depth = depth_bound(static_cast<int64_t>(q2.atoms.size()),
                          static_cast<int64_t>(bounded.size()),
                          static_cast<int64_t>(acyclic.size()), arity,
                          ld->width);
    std::vector<TGD> theta = bounded;
    theta.insert(theta.end(), acyclic.begin(), acyclic.end());
    TreeChaseOptions topts;
    topts.node_budget = ld->node_budget;
    topts.early_stop_query = &q2;
    TreeChaseResult tr = tree_chase_linear(
        i0, theta, static_cast<int>(std::min<int64_t>(v.depth, INT32_MAX)),
        nulls, topts);
    v.facts = static_cast<int64_t>(tr.facts.size());
    if (tr.early_match || evaluate_boolean(q2, tr.facts)) {
      v.result = ContainmentVerdict::Result::yes;
    } else if (tr.budget_hit) {
      v.result = ContainmentVerdict::Result::unknown;
      v.note = "tree chase node budget exhausted";
    } else {
      v.result = ContainmentVerdict::Result::no;
      v.note = "no match within complete depth bound " +
               std::to_string(v.depth);
    }
    return v;
  }

  const auto& sd = std::get<SemiDecide>(strategy);
  ChaseOutcome oc =
      restricted_chase(i0, sigma, nulls, {sd.round_budget, sd.fact_budget, false});
  v.rounds = oc.rounds;
  v.facts = static_cast<int64_t>(oc.instance.size());
  if (oc.status == ChaseOutcome::Status::failed) {
    v.result = ContainmentVerdict::Result::yes;
    v.note = "left side unsatisfiable under the FDs";
  } else if (evaluate_boolean(q2, oc.instance)) {
    v.result = ContainmentVerdict::Result::yes;
  } else if (oc.status == ChaseOutcome::Status::saturated) {
    v.result = ContainmentVerdict::Result::no;  // saturated chase is universal
  } else {
    v.result = ContainmentVerdict::Result::unknown;
    v.note = "no match within " + std::to_string(oc.rounds) + " chase rounds";
  }
  return v;
}

}  // namespace mondet
