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

#include "mondet/linearize.h"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace mondet {

namespace {

std::vector<std::vector<int>> subsets_up_to(int n, int w) {
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> cur = {{}};
  out.push_back({});
  for (int size = 1; size <= w; ++size) {
    std::vector<std::vector<int>> next;
    for (const auto& s : cur) {
      int start = s.empty() ? 0 : s.back() + 1;
      for (int p = start; p < n; ++p) {
        auto t = s;
        t.push_back(p);
        next.push_back(t);
        out.push_back(t);
      }
    }
    cur = std::move(next);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) {
                     if (a.size() != b.size()) return a.size() < b.size();
                     return a < b;
                   });
  return out;
}

std::string positions_to_string(const std::vector<int>& p) {
  std::string s = "{";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i] + 1);
  }
  return s + "}";
}

// Variable-to-position maps of an ID (variables occur at most once per atom).
struct IdShape {
  const TGD* rule;
  std::unordered_map<std::string, int> body_pos, head_pos;
  std::vector<int> exported_body;            // sorted body positions
  std::unordered_map<int, int> body_to_head;  // exported correspondence

  explicit IdShape(const TGD& id) : rule(&id) {
    const Atom& b = id.body[0];
    const Atom& h = id.head[0];
    for (size_t i = 0; i < b.args.size(); ++i)
      body_pos[b.args[i].name()] = static_cast<int>(i);
    for (size_t i = 0; i < h.args.size(); ++i)
      head_pos[h.args[i].name()] = static_cast<int>(i);
    for (const auto& [v, bp] : body_pos) {
      auto it = head_pos.find(v);
      if (it != head_pos.end()) {
        exported_body.push_back(bp);
        body_to_head[bp] = it->second;
      }
    }
    std::sort(exported_body.begin(), exported_body.end());
  }
};

}  // namespace

TGD TruncAxiom::to_tgd(int arity) const {
  TGD t;
  t.id = "trunc:" + to_string();
  t.role = RuleRole::truncated;
  std::vector<Term> vars;
  for (int p = 0; p < arity; ++p)
    vars.push_back(Term::variable("v" + std::to_string(p)));
  t.body.push_back(Atom{relation, vars});
  for (int p : premise) t.body.push_back(Atom{kAccessible, {vars[p]}});
  t.head.push_back(Atom{kAccessible, {vars[conclusion]}});
  return t;
}

std::string TruncAxiom::to_string() const {
  return relation + positions_to_string(premise) + "->" +
         std::to_string(conclusion + 1);
}

bool Saturation::has(const std::string& relation,
                     const std::vector<int>& premise, int conclusion) const {
  return axioms.count(TruncAxiom{relation, premise, conclusion}) > 0;
}

std::vector<int> Saturation::transferred(const std::string& relation,
                                         const std::vector<int>& p) const {
  std::vector<int> out;
  auto it = axioms.lower_bound(TruncAxiom{relation, p, -1});
  for (; it != axioms.end() && it->relation == relation && it->premise == p;
       ++it)
    out.push_back(it->conclusion);
  // The premise itself is always transferred (trivial axioms).
  for (int q : p)
    if (!std::count(out.begin(), out.end(), q)) out.push_back(q);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TruncAxiom> Saturation::derived() const {
  std::vector<TruncAxiom> out;
  for (const TruncAxiom& a : axioms)
    if (!std::count(a.premise.begin(), a.premise.end(), a.conclusion))
      out.push_back(a);
  return out;
}

Saturation saturate_truncated(const std::vector<TGD>& ids,
                              const std::vector<TruncAxiom>& delta,
                              const std::vector<AccessMethod>& methods,
                              int w, const Signature& sig) {
  Saturation sat;
  sat.w = w;

  // Relations in play, with arities.
  std::map<std::string, int> arity;
  for (const TGD& t : ids) {
    if (!t.is_id()) throw std::runtime_error("saturate_truncated: not an ID");
    if (id_width(t) > w)
      throw std::runtime_error("saturate_truncated: ID wider than w");
    arity[t.body[0].relation] = static_cast<int>(t.body[0].args.size());
    arity[t.head[0].relation] = static_cast<int>(t.head[0].args.size());
  }
  for (const AccessMethod& mt : methods)
    arity[mt.relation] = sig.arity(mt.relation);
  for (const TruncAxiom& a : delta)
    if (!arity.count(a.relation)) arity[a.relation] = sig.arity(a.relation);

  // Trivial axioms, plus the small-breadth part of delta.
  for (const auto& [rel, n] : arity)
    for (const auto& p : subsets_up_to(n, w))
      for (int j : p) sat.axioms.insert({rel, p, j});
  for (const TruncAxiom& a : delta)
    if (a.breadth() <= w) sat.axioms.insert(a);

  std::vector<IdShape> shapes;
  shapes.reserve(ids.size());
  for (const TGD& t : ids) shapes.emplace_back(t);

  // Closure of P under the current axioms, large-breadth delta rules, and
  // the access rule; adding every step as a triple keeps each addition a
  // legal (Transitivity)/(Access) instance.
  auto close_positions = [&](const std::string& rel,
                             const std::vector<int>& p) {
    std::set<int> x(p.begin(), p.end());
    bool grow = true;
    while (grow) {
      grow = false;
      for (const TruncAxiom& a : sat.axioms) {
        if (a.relation != rel || x.count(a.conclusion)) continue;
        bool covered = true;
        for (int q : a.premise)
          if (!x.count(q)) {
            covered = false;
            break;
          }
        if (covered) {
          x.insert(a.conclusion);
          grow = true;
        }
      }
      for (const TruncAxiom& a : delta) {
        if (a.relation != rel || x.count(a.conclusion)) continue;
        bool covered = true;
        for (int q : a.premise)
          if (!x.count(q)) {
            covered = false;
            break;
          }
        if (covered) {
          x.insert(a.conclusion);
          grow = true;
        }
      }
      for (const AccessMethod& mt : methods) {
        if (mt.relation != rel) continue;
        bool covered = true;
        for (int q : mt.inputs)
          if (!x.count(q)) {
            covered = false;
            break;
          }
        if (!covered) continue;
        for (int j = 0; j < arity[rel]; ++j)
          if (!x.count(j)) {
            x.insert(j);
            grow = true;
          }
      }
    }
    return x;
  };

  bool changed = true;
  while (changed) {
    changed = false;

    // (Transitivity) + (Access), folded into one position closure per (R,P).
    for (const auto& [rel, n] : arity) {
      for (const auto& p : subsets_up_to(n, w)) {
        std::set<int> x = close_positions(rel, p);
        for (int j : x)
          if (sat.axioms.insert({rel, p, j}).second) changed = true;
      }
    }

    // (ID): backward propagation along each ID.
    for (const IdShape& s : shapes) {
      const std::string& body_rel = s.rule->body[0].relation;
      const std::string& head_rel = s.rule->head[0].relation;
      std::unordered_map<int, int> head_to_body;
      for (const auto& [bp, hp] : s.body_to_head) head_to_body[hp] = bp;

      std::vector<TruncAxiom> additions;
      for (const TruncAxiom& a : sat.axioms) {
        if (a.relation != head_rel) continue;
        if (!head_to_body.count(a.conclusion)) continue;
        bool all_exported = true;
        for (int q : a.premise)
          if (!head_to_body.count(q)) {
            all_exported = false;
            break;
          }
        if (!all_exported) continue;
        std::vector<int> premise;
        for (int q : a.premise) premise.push_back(head_to_body[q]);
        std::sort(premise.begin(), premise.end());
        additions.push_back(
            {body_rel, premise, head_to_body[a.conclusion]});
      }
      for (const TruncAxiom& a : additions)
        if (sat.axioms.insert(a).second) changed = true;
    }
  }

  // Fixpoint size bound: r * a^(w+1) possible axioms of breadth <= w.
  {
    size_t r = arity.size();
    size_t a = 1;
    for (const auto& [rel, n] : arity)
      a = std::max(a, static_cast<size_t>(n));
    size_t bound = r;
    for (int i = 0; i < w + 1; ++i) bound *= a;
    bound *= a;  // conclusion choice
    if (sat.axioms.size() > bound * 4)
      throw std::logic_error("saturate_truncated: size bound exceeded");
  }
  return sat;
}

std::string annot_name(const std::string& base, const std::vector<int>& p) {
  return base + "@" + positions_to_string(p);
}

SigmaLin build_sigma_lin(const std::vector<TGD>& ids, const Saturation& sat,
                         const std::vector<AccessMethod>& methods,
                         const std::vector<RbTransferSpec>& rb_transfers,
                         int w, const Signature& sig) {
  SigmaLin out;

  // (Lift): one rule per ID and annotation subset of its body relation.
  for (const TGD& id : ids) {
    IdShape shape(id);
    const Atom& body = id.body[0];
    const Atom& head = id.head[0];
    int n = static_cast<int>(body.args.size());
    for (const auto& p : subsets_up_to(n, w)) {
      std::vector<int> transferred = sat.transferred(body.relation, p);
      std::vector<int> head_subset;
      for (int bp : transferred)
        if (shape.body_to_head.count(bp))
          head_subset.push_back(shape.body_to_head.at(bp));
      std::sort(head_subset.begin(), head_subset.end());

      TGD lift;
      lift.id = "lift:" + id.id + "@" + positions_to_string(p);
      lift.role = RuleRole::lift;
      lift.body.push_back(Atom{annot_name(body.relation, p), body.args});
      lift.head.push_back(
          Atom{annot_name(head.relation, head_subset), head.args});
      out.bounded.push_back(std::move(lift));
    }
  }

  // (Transfer): annotated copies whose transferred set covers the inputs of
  // some unbounded method feed the primed relation.
  std::set<std::pair<std::string, std::vector<int>>> emitted;
  for (const AccessMethod& mt : methods) {
    int n = sig.arity(mt.relation);
    for (const auto& p : subsets_up_to(n, w)) {
      std::vector<int> tr = sat.transferred(mt.relation, p);
      bool covered = true;
      for (int i : mt.inputs)
        if (!std::count(tr.begin(), tr.end(), i)) {
          covered = false;
          break;
        }
      if (!covered) continue;
      if (!emitted.insert({mt.relation, p}).second) continue;
      std::vector<Term> vars;
      for (int i = 0; i < n; ++i)
        vars.push_back(Term::variable("v" + std::to_string(i)));
      TGD tr_rule;
      tr_rule.id = "transfer:" + mt.relation + "@" + positions_to_string(p);
      tr_rule.role = RuleRole::lin_transfer;
      tr_rule.body.push_back(Atom{annot_name(mt.relation, p), vars});
      tr_rule.head.push_back(Atom{primed(mt.relation), vars});
      out.acyclic.push_back(std::move(tr_rule));
    }
  }

  // (Result-bounded Fact Transfer): only from annotations that make the
  // method's inputs accessible.
  for (const RbTransferSpec& rb : rb_transfers) {
    int n = sig.arity(rb.relation);
    for (const auto& p : subsets_up_to(n, w)) {
      std::vector<int> tr = sat.transferred(rb.relation, p);
      bool covered = true;
      for (int i : rb.inputs)
        if (!std::count(tr.begin(), tr.end(), i)) {
          covered = false;
          break;
        }
      if (!covered) continue;
      std::vector<Term> vars;
      for (int i = 0; i < n; ++i)
        vars.push_back(Term::variable("v" + std::to_string(i)));
      std::vector<Term> head_args;
      std::unordered_set<int> keep(rb.inputs.begin(), rb.inputs.end());
      for (int i = 0; i < n; ++i)
        head_args.push_back(keep.count(i)
                                ? vars[i]
                                : Term::variable("z" + std::to_string(i)));
      TGD rule;
      rule.id = "rbft:" + rb.method + "@" + positions_to_string(p);
      rule.role = RuleRole::rb_fact_transfer;
      rule.body.push_back(Atom{annot_name(rb.relation, p), vars});
      rule.head.push_back(Atom{primed(rb.relation), head_args});
      out.acyclic.push_back(std::move(rule));
    }
  }
  return out;
}

Instance build_i0_lin(const CQ& q, const std::vector<TruncAxiom>& delta_all,
                      int w, const std::vector<Term>& accessible_seeds,
                      NullFactory& nulls) {
  Instance inst = canonical_database(q, nulls);
  for (const Term& c : accessible_seeds) inst.insert(Atom{kAccessible, {c}});

  // Close under the truncated accessibility axioms.
  bool grow = true;
  while (grow) {
    grow = false;
    for (const TruncAxiom& a : delta_all) {
      for (size_t idx : inst.facts_of(a.relation)) {
        const Atom f = inst.facts()[idx];
        bool fire = true;
        for (int p : a.premise)
          if (!inst.contains(Atom{kAccessible, {f.args[p]}})) {
            fire = false;
            break;
          }
        if (fire && inst.insert(Atom{kAccessible, {f.args[a.conclusion]}}))
          grow = true;
      }
    }
  }

  // Annotate and prime.
  Instance out;
  std::vector<Atom> base;
  for (const Atom& f : inst.facts()) {
    out.insert(f);
    if (f.relation != kAccessible) base.push_back(f);
  }
  for (const Atom& f : base) {
    std::vector<int> acc_positions;
    for (size_t p = 0; p < f.args.size(); ++p)
      if (inst.contains(Atom{kAccessible, {f.args[p]}}))
        acc_positions.push_back(static_cast<int>(p));
    for (const auto& sub :
         subsets_up_to(static_cast<int>(acc_positions.size()), w)) {
      std::vector<int> p;
      for (int i : sub) p.push_back(acc_positions[i]);
      out.insert(Atom{annot_name(f.relation, p), f.args});
    }
    if (acc_positions.size() == f.args.size())
      out.insert(prime_atom(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generalized linearization: normalization, b-closure, and Theta.
// ---------------------------------------------------------------------------

NormalizedGTGDs normalize_gtgds(const std::vector<TGD>& rules) {
  NormalizedGTGDs out;
  int counter = 0;

  auto guard_first = [](TGD t) {
    auto vars = t.body_variables();
    for (size_t i = 0; i < t.body.size(); ++i) {
      std::unordered_set<std::string> in_atom;
      for (const Term& x : t.body[i].args)
        if (x.is_variable()) in_atom.insert(x.name());
      if (in_atom.size() == vars.size()) {
        std::swap(t.body[0], t.body[i]);
        return t;
      }
    }
    throw std::runtime_error("normalize_gtgds: rule is not guarded: " +
                             t.to_string());
  };

  auto emit_full = [&](TGD t) {
    t = guard_first(std::move(t));
    if (t.head.size() == 1) {
      out.fulls.push_back(std::move(t));
      return;
    }
    // Multi-headed full GTGD: one auxiliary head relation plus projections.
    std::vector<std::string> hv = t.head_variables();
    std::string aux = "aux@" + std::to_string(counter++);
    std::vector<Term> aux_args;
    for (const std::string& v : hv) aux_args.push_back(Term::variable(v));
    out.aux_relations.push_back({aux, static_cast<int>(aux_args.size()), {}});

    TGD to_aux;
    to_aux.id = t.id + ":h";
    to_aux.role = t.role;
    to_aux.method = t.method;
    to_aux.body = t.body;
    to_aux.head = {Atom{aux, aux_args}};
    out.fulls.push_back(std::move(to_aux));
    int k = 0;
    for (const Atom& h : t.head) {
      TGD proj;
      proj.id = t.id + ":h" + std::to_string(k++);
      proj.role = t.role;
      proj.body = {Atom{aux, aux_args}};
      proj.head = {h};
      out.fulls.push_back(std::move(proj));
    }
  };

  for (const TGD& rule : rules) {
    if (rule.is_full()) {
      emit_full(rule);
      continue;
    }
    if (rule.is_id()) {
      out.ids.push_back(rule);
      continue;
    }
    // Non-full, non-ID: full part -> intermediate ID -> projections.
    std::vector<std::string> exported = rule.exported();
    std::vector<std::string> exist = rule.existentials();
    std::string aux = "aux@" + std::to_string(counter++);
    std::string auxx = aux + "x";
    std::vector<Term> exp_args, all_args;
    for (const std::string& v : exported) exp_args.push_back(Term::variable(v));
    all_args = exp_args;
    for (const std::string& v : exist) all_args.push_back(Term::variable(v));
    out.aux_relations.push_back({aux, static_cast<int>(exp_args.size()), {}});
    out.aux_relations.push_back({auxx, static_cast<int>(all_args.size()), {}});

    TGD to_aux;
    to_aux.id = rule.id + ":g";
    to_aux.role = rule.role;
    to_aux.method = rule.method;
    to_aux.body = rule.body;
    to_aux.head = {Atom{aux, exp_args}};
    emit_full(std::move(to_aux));

    TGD widen;
    widen.id = rule.id + ":x";
    widen.role = rule.role;
    widen.body = {Atom{aux, exp_args}};
    widen.head = {Atom{auxx, all_args}};
    out.ids.push_back(std::move(widen));

    int k = 0;
    for (const Atom& h : rule.head) {
      TGD proj;
      proj.id = rule.id + ":p" + std::to_string(k++);
      proj.role = rule.role;
      proj.body = {Atom{auxx, all_args}};
      proj.head = {h};
      emit_full(std::move(proj));
    }
  }
  return out;
}

namespace {

bool is_side(const std::vector<std::string>& side_sig,
             const std::string& rel) {
  return std::count(side_sig.begin(), side_sig.end(), rel) > 0;
}

// Canonical renaming: guard variables become u0, u1, ... in position order
// (repeats keep the first name); side atoms sorted.
SuitableGTGD canonicalize(const Atom& guard, std::vector<Atom> side,
                          const Atom& head) {
  std::unordered_map<std::string, std::string> ren;
  SuitableGTGD g;
  g.guard.relation = guard.relation;
  for (size_t i = 0; i < guard.args.size(); ++i) {
    const std::string& v = guard.args[i].name();
    auto it = ren.find(v);
    if (it == ren.end())
      it = ren.emplace(v, "u" + std::to_string(i)).first;
    g.guard.args.push_back(Term::variable(it->second));
  }
  auto rename_atom = [&](const Atom& a) {
    Atom out{a.relation, {}};
    for (const Term& t : a.args) out.args.push_back(Term::variable(ren.at(t.name())));
    return out;
  };
  for (const Atom& s : side) g.side.push_back(rename_atom(s));
  std::sort(g.side.begin(), g.side.end());
  g.side.erase(std::unique(g.side.begin(), g.side.end()), g.side.end());
  g.head = rename_atom(head);
  return g;
}

// A suitable GTGD needs all side variables and repeated guard variables
// confined to at most b guard positions.
bool is_suitable(const SuitableGTGD& g, int b) {
  std::unordered_set<std::string> x;
  for (const Atom& s : g.side)
    for (const Term& t : s.args) x.insert(t.name());
  std::unordered_map<std::string, int> count;
  for (const Term& t : g.guard.args) count[t.name()]++;
  for (const auto& [v, c] : count)
    if (c > 1) x.insert(v);
  int p = 0;
  for (const Term& t : g.guard.args)
    if (x.count(t.name())) ++p;
  return p <= b;
}

std::string ground_marker(const std::string& var) { return "\x1f" + var; }

Instance ground_atoms(const std::vector<Atom>& atoms) {
  Instance inst;
  for (const Atom& a : atoms) {
    Atom f{a.relation, {}};
    for (const Term& t : a.args)
      f.args.push_back(Term::constant(ground_marker(t.name())));
    inst.insert(std::move(f));
  }
  return inst;
}

Atom unground(const Atom& f) {
  Atom a{f.relation, {}};
  for (const Term& t : f.args) a.args.push_back(Term::variable(t.name().substr(1)));
  return a;
}

// Saturates a small ground instance under full rules (no fresh values).
void saturate_full(Instance& inst, const std::vector<TGD>& fulls) {
  bool grow = true;
  while (grow) {
    grow = false;
    for (const TGD& rule : fulls) {
      std::vector<Atom> added;
      for_each_homomorphism(rule.body, inst, {}, [&](const Homomorphism& h) {
        for (const Atom& ha : rule.head) {
          Atom f = apply_hom(ha, h);
          if (!inst.contains(f)) added.push_back(f);
        }
        return true;
      });
      for (Atom& f : added)
        if (inst.insert(f)) grow = true;
    }
  }
}

}  // namespace

std::string SuitableGTGD::key() const {
  std::string k = guard.to_string() + "&";
  for (const Atom& s : side) k += s.to_string() + ",";
  return k + "->" + head.to_string();
}

TGD SuitableGTGD::to_tgd(const std::string& id) const {
  TGD t;
  t.id = id;
  t.body.push_back(guard);
  for (const Atom& s : side) t.body.push_back(s);
  t.head.push_back(head);
  return t;
}

std::vector<SuitableGTGD> b_closure(const NormalizedGTGDs& sigma, int b,
                                    const std::vector<std::string>& side_sig) {
  std::map<std::string, SuitableGTGD> closure;

  auto try_insert = [&](const SuitableGTGD& g) -> bool {
    if (!is_suitable(g, b)) return false;
    return closure.emplace(g.key(), g).second;
  };

  // Seed: the suitable rules of Sigma (guard first by construction).
  for (const TGD& t : sigma.fulls) {
    std::vector<Atom> side(t.body.begin() + 1, t.body.end());
    bool all_side = true;
    for (const Atom& s : side)
      if (!is_side(side_sig, s.relation)) all_side = false;
    if (!all_side || is_side(side_sig, t.body[0].relation)) continue;
    try_insert(canonicalize(t.body[0], side, t.head[0]));
  }

  // Candidate suitable bodies: guard relation, <=b annotated positions with
  // a variable pattern, and a side instance over the pattern's variables.
  struct Body {
    Atom guard;
    std::vector<Atom> side;
  };
  std::vector<Body> bodies;
  {
    std::map<std::string, int> arity;
    auto note = [&](const Atom& a) {
      if (!is_side(side_sig, a.relation))
        arity[a.relation] = static_cast<int>(a.args.size());
    };
    for (const TGD& t : sigma.ids) {
      note(t.body[0]);
      note(t.head[0]);
    }
    for (const TGD& t : sigma.fulls) {
      for (const Atom& a : t.body) note(a);
      note(t.head[0]);
    }
    for (const auto& [rel, n] : arity) {
      for (const auto& p : subsets_up_to(n, b)) {
        // Set partitions of p via restricted-growth strings.
        std::vector<std::vector<int>> partitions;
        std::vector<int> rgs(p.size(), 0);
        std::function<void(size_t, int)> gen = [&](size_t i, int maxc) {
          if (i == p.size()) {
            partitions.push_back(rgs);
            return;
          }
          for (int c = 0; c <= maxc + 1 && c <= static_cast<int>(i); ++c) {
            rgs[i] = c;
            gen(i + 1, std::max(maxc, c));
          }
        };
        if (p.empty())
          partitions.push_back({});
        else
          gen(0, -1);

        for (const auto& part : partitions) {
          Atom guard{rel, {}};
          std::vector<std::string> class_var(p.size());
          for (size_t i = 0; i < p.size(); ++i)
            class_var[i] = "c" + std::to_string(part[i]);
          size_t pi = 0;
          for (int pos = 0; pos < n; ++pos) {
            if (pi < p.size() && p[pi] == pos) {
              guard.args.push_back(Term::variable(class_var[pi]));
              ++pi;
            } else {
              guard.args.push_back(Term::variable("y" + std::to_string(pos)));
            }
          }
          // All candidate side facts over the class variables.
          std::vector<std::string> classes;
          for (const std::string& v : class_var)
            if (!std::count(classes.begin(), classes.end(), v))
              classes.push_back(v);
          std::vector<Atom> pool;
          for (const std::string& srel : side_sig) {
            // Side relations of arity 1 in this artifact; enumerate
            // generically over small tuples anyway.
            std::vector<std::vector<std::string>> tuples = {{}};
            int a = 1;  // accessible
            for (int i = 0; i < a; ++i) {
              std::vector<std::vector<std::string>> next;
              for (const auto& tup : tuples)
                for (const std::string& c : classes) {
                  auto t2 = tup;
                  t2.push_back(c);
                  next.push_back(t2);
                }
              tuples = std::move(next);
            }
            for (const auto& tup : tuples) {
              Atom s{srel, {}};
              for (const std::string& c : tup) s.args.push_back(Term::variable(c));
              pool.push_back(s);
            }
          }
          for (size_t mask = 0; mask < (size_t(1) << pool.size()); ++mask) {
            Body body;
            body.guard = guard;
            for (size_t i = 0; i < pool.size(); ++i)
              if (mask & (size_t(1) << i)) body.side.push_back(pool[i]);
            bodies.push_back(std::move(body));
          }
        }
      }
    }
  }

  // Trivial suitable GTGDs: head already in the body.
  for (const Body& body : bodies) {
    try_insert(canonicalize(body.guard, body.side, body.guard));
    for (const Atom& s : body.side)
      try_insert(canonicalize(body.guard, body.side, s));
  }

  std::vector<IdShape> shapes;
  for (const TGD& t : sigma.ids) shapes.emplace_back(t);

  bool changed = true;
  while (changed) {
    changed = false;

    // (Transitivity): saturate each candidate body's local instance under
    // Sigma's fulls and the current closure; every derivable fact on the
    // body's domain becomes a head.
    std::vector<TGD> all_rules = sigma.fulls;
    {
      int i = 0;
      for (const auto& [k, g] : closure)
        all_rules.push_back(g.to_tgd("clo:" + std::to_string(i++)));
    }
    for (const Body& body : bodies) {
      std::vector<Atom> atoms = {body.guard};
      for (const Atom& s : body.side) atoms.push_back(s);
      Instance local = ground_atoms(atoms);
      saturate_full(local, all_rules);
      for (const Atom& f : local.facts()) {
        Atom head = unground(f);
        if (head == body.guard) continue;
        if (try_insert(canonicalize(body.guard, body.side, head)))
          changed = true;
      }
    }

    // (ID): backward rewriting of the guard through each ID.
    std::vector<SuitableGTGD> current;
    for (const auto& [k, g] : closure) current.push_back(g);
    for (const IdShape& s : shapes) {
      const Atom& ib = s.rule->body[0];
      const Atom& ih = s.rule->head[0];
      std::unordered_map<int, int> head_to_body;
      for (const auto& [bp, hp] : s.body_to_head) head_to_body[hp] = bp;
      for (const SuitableGTGD& g : current) {
        if (g.guard.relation != ih.relation) continue;
        // Keep = side vars + head vars; they must sit at exported positions.
        std::unordered_set<std::string> keep;
        for (const Atom& sd : g.side)
          for (const Term& t : sd.args) keep.insert(t.name());
        for (const Term& t : g.head.args) keep.insert(t.name());
        bool ok = true;
        for (size_t q = 0; q < g.guard.args.size(); ++q)
          if (keep.count(g.guard.args[q].name()) &&
              !head_to_body.count(static_cast<int>(q))) {
            ok = false;
            break;
          }
        if (!ok) continue;
        Atom new_guard{ib.relation, {}};
        for (size_t bp = 0; bp < ib.args.size(); ++bp) {
          auto it = s.body_to_head.find(static_cast<int>(bp));
          if (it != s.body_to_head.end())
            new_guard.args.push_back(g.guard.args[it->second]);
          else
            new_guard.args.push_back(
                Term::variable("w" + std::to_string(bp)));
        }
        if (try_insert(canonicalize(new_guard, g.side, g.head)))
          changed = true;
      }
    }
  }

  std::vector<SuitableGTGD> out;
  for (const auto& [k, g] : closure) out.push_back(g);
  return out;
}

namespace {

// Annotated relation name for the general construction: base, positions,
// and the canonical side instance over those positions.
std::string annot_chi_name(const std::string& base, const std::vector<int>& p,
                           const std::vector<Atom>& chi) {
  std::string name = base + "@" + positions_to_string(p) + "|";
  std::vector<std::string> parts;
  for (const Atom& a : chi) {
    std::string s = a.relation + "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (i) s += ",";
      s += a.args[i].name();  // position variable "x<k>"
    }
    parts.push_back(s + ")");
  }
  std::sort(parts.begin(), parts.end());
  for (const std::string& s : parts) name += s + ";";
  return name;
}

std::vector<TGD> closure_fulls(const std::vector<SuitableGTGD>& closure) {
  std::vector<TGD> out;
  int i = 0;
  for (const SuitableGTGD& g : closure)
    out.push_back(g.to_tgd("clo:" + std::to_string(i++)));
  return out;
}

}  // namespace

Theta build_theta(const NormalizedGTGDs& sigma,
                  const std::vector<SuitableGTGD>& closure, int w,
                  const std::vector<std::string>& side_sig) {
  Theta out;
  std::set<std::string> rule_keys;
  auto emit = [&](std::vector<TGD>& dst, TGD t) {
    std::string key = t.body[0].to_string() + "=>" + t.head[0].to_string();
    if (rule_keys.insert(key).second) dst.push_back(std::move(t));
  };

  // Base (non-side) relations of the normalized constraint set.
  std::map<std::string, int> arity;
  auto note = [&](const Atom& a) {
    if (!is_side(side_sig, a.relation))
      arity[a.relation] = static_cast<int>(a.args.size());
  };
  for (const TGD& t : sigma.ids) {
    note(t.body[0]);
    note(t.head[0]);
  }
  for (const TGD& t : sigma.fulls) {
    for (const Atom& a : t.body) note(a);
    note(t.head[0]);
  }

  const std::vector<TGD> fulls = closure_fulls(closure);
  std::vector<IdShape> shapes;
  for (const TGD& t : sigma.ids) shapes.emplace_back(t);

  for (const auto& [rel, n] : arity) {
    for (const auto& p : subsets_up_to(n, w)) {
      // Candidate side instances chi over the position variables of p.
      std::vector<Atom> pool;
      for (const std::string& srel : side_sig)
        for (int q : p)
          pool.push_back(
              Atom{srel, {Term::variable("x" + std::to_string(q))}});
      for (size_t mask = 0; mask < (size_t(1) << pool.size()); ++mask) {
        std::vector<Atom> chi;
        for (size_t i = 0; i < pool.size(); ++i)
          if (mask & (size_t(1) << i)) chi.push_back(pool[i]);
        std::string aname = annot_chi_name(rel, p, chi);

        // Homomorphisms h mapping P into P, identity outside.
        std::vector<std::vector<int>> hmaps = {{}};
        for (size_t i = 0; i < p.size(); ++i) {
          std::vector<std::vector<int>> next;
          for (const auto& hm : hmaps)
            for (int target : p) {
              auto h2 = hm;
              h2.push_back(target);
              next.push_back(h2);
            }
          hmaps = std::move(next);
        }
        for (const auto& hm : hmaps) {
          auto h_of = [&](int pos) {
            for (size_t i = 0; i < p.size(); ++i)
              if (p[i] == pos) return hm[i];
            return pos;
          };
          // Body atom R_{P,chi}(h(x)).
          Atom body_atom{aname, {}};
          for (int pos = 0; pos < n; ++pos)
            body_atom.args.push_back(
                Term::variable("x" + std::to_string(h_of(pos))));

          // Local instance: R(h(x)) + h(chi), saturated under the closure.
          std::vector<Atom> local_atoms;
          {
            Atom guard{rel, body_atom.args};
            local_atoms.push_back(guard);
            for (const Atom& c : chi) {
              Atom mapped{c.relation, {}};
              for (const Term& t : c.args) {
                int pos = std::stoi(t.name().substr(1));
                mapped.args.push_back(
                    Term::variable("x" + std::to_string(h_of(pos))));
              }
              local_atoms.push_back(mapped);
            }
          }
          Instance local = ground_atoms(local_atoms);
          saturate_full(local, fulls);

          // Forget + Instantiate: every local fact becomes a full head.
          for (const Atom& f : local.facts()) {
            TGD inst_rule;
            inst_rule.id = "inst:" + aname;
            inst_rule.role = RuleRole::lin_transfer;
            inst_rule.body = {body_atom};
            inst_rule.head = {unground(f)};
            emit(out.acyclic, std::move(inst_rule));
          }

          // Lift: fire each ID on a local fact of its body relation.
          for (const IdShape& sh : shapes) {
            const Atom& ib = sh.rule->body[0];
            const Atom& ih = sh.rule->head[0];
            for (size_t idx : local.facts_of(ib.relation)) {
              const Atom match = unground(local.facts()[idx]);
              // Exported head positions and their values.
              std::vector<int> head_subset;
              std::unordered_map<int, std::string> head_val;
              for (const auto& [bp, hp] : sh.body_to_head) {
                head_subset.push_back(hp);
                head_val[hp] = match.args[bp].name();
              }
              std::sort(head_subset.begin(), head_subset.end());
              if (static_cast<int>(head_subset.size()) > w) continue;

              // chi''' = local side facts over the exported values, written
              // over the head position variables.
              std::vector<Atom> chi3;
              for (const Atom& lf : local.facts()) {
                if (!is_side(side_sig, lf.relation)) continue;
                const Atom sf = unground(lf);
                // One pattern per way of reading the fact at positions.
                std::vector<std::vector<int>> reads = {{}};
                for (const Term& t : sf.args) {
                  std::vector<std::vector<int>> next;
                  for (const auto& r : reads)
                    for (int hp : head_subset)
                      if (head_val[hp] == t.name()) {
                        auto r2 = r;
                        r2.push_back(hp);
                        next.push_back(r2);
                      }
                  reads = std::move(next);
                }
                for (const auto& r : reads) {
                  Atom pat{sf.relation, {}};
                  for (int hp : r)
                    pat.args.push_back(
                        Term::variable("x" + std::to_string(hp)));
                  chi3.push_back(pat);
                }
              }
              std::sort(chi3.begin(), chi3.end());
              chi3.erase(std::unique(chi3.begin(), chi3.end()), chi3.end());

              Atom head_atom{annot_chi_name(ih.relation, head_subset, chi3),
                             {}};
              std::unordered_map<int, int> head_to_body;
              for (const auto& [bp, hp] : sh.body_to_head)
                head_to_body[hp] = bp;
              for (size_t hp = 0; hp < ih.args.size(); ++hp) {
                auto it = head_to_body.find(static_cast<int>(hp));
                if (it != head_to_body.end())
                  head_atom.args.push_back(
                      Term::variable(head_val[static_cast<int>(hp)]));
                else
                  head_atom.args.push_back(
                      Term::variable("z" + std::to_string(hp)));
              }
              TGD lift;
              lift.id = "lift:" + aname + ":" + sh.rule->id;
              lift.role = RuleRole::lift;
              lift.body = {body_atom};
              lift.head = {head_atom};
              emit(out.bounded, std::move(lift));
            }
          }
        }
      }
    }
  }
  return out;
}

Instance build_q_lin(const CQ& q, const NormalizedGTGDs& sigma,
                     const std::vector<SuitableGTGD>& closure, int w,
                     const std::vector<std::string>& side_sig,
                     const std::vector<Term>& accessible_seeds,
                     NullFactory& nulls) {
  Instance inst = canonical_database(q, nulls);
  for (const Term& c : accessible_seeds) inst.insert(Atom{kAccessible, {c}});

  std::vector<TGD> fulls = sigma.fulls;
  for (const TGD& t : closure_fulls(closure)) fulls.push_back(t);
  saturate_full(inst, fulls);

  Instance out;
  for (const Atom& f : inst.facts()) out.insert(f);
  for (const Atom& f : inst.facts()) {
    if (is_side(side_sig, f.relation)) continue;
    int n = static_cast<int>(f.args.size());
    for (const auto& p : subsets_up_to(n, w)) {
      // chi: side facts of inst over the values at positions p, as
      // patterns over the position variables.
      std::vector<Atom> chi;
      for (const std::string& srel : side_sig) {
        for (int pos : p) {
          if (inst.contains(Atom{srel, {f.args[pos]}}))
            chi.push_back(
                Atom{srel, {Term::variable("x" + std::to_string(pos))}});
        }
      }
      std::sort(chi.begin(), chi.end());
      out.insert(Atom{annot_chi_name(f.relation, p, chi), f.args});
    }
  }
  return out;
}

std::vector<TGD> reachable_rules(const std::vector<TGD>& rules,
                                 const Instance& start) {
  std::unordered_set<std::string> reach;
  for (const Atom& f : start.facts()) reach.insert(f.relation);
  bool grow = true;
  while (grow) {
    grow = false;
    for (const TGD& t : rules) {
      bool body_ok = true;
      for (const Atom& a : t.body)
        if (!reach.count(a.relation)) {
          body_ok = false;
          break;
        }
      if (!body_ok) continue;
      for (const Atom& a : t.head)
        if (reach.insert(a.relation).second) grow = true;
    }
  }
  std::vector<TGD> kept;
  for (const TGD& t : rules) {
    bool body_ok = true;
    for (const Atom& a : t.body)
      if (!reach.count(a.relation)) {
        body_ok = false;
        break;
      }
    if (body_ok) kept.push_back(t);
  }
  return kept;
}

}  // namespace mondet
