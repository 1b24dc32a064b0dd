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

#include "mondet/constraints.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace mondet {

namespace {

std::vector<std::string> collect_vars(const std::vector<Atom>& atoms) {
  std::vector<std::string> vars;
  std::unordered_set<std::string> seen;
  for (const Atom& a : atoms)
    for (const Term& t : a.args)
      if (t.is_variable() && seen.insert(t.name()).second)
        vars.push_back(t.name());
  return vars;
}

bool no_repeats(const Atom& a) {
  std::unordered_set<std::string> seen;
  for (const Term& t : a.args)
    if (t.is_variable() && !seen.insert(t.name()).second) return false;
  return true;
}

}  // namespace

std::vector<std::string> TGD::body_variables() const {
  return collect_vars(body);
}

std::vector<std::string> TGD::head_variables() const {
  return collect_vars(head);
}

std::vector<std::string> TGD::exported() const {
  std::unordered_set<std::string> in_head;
  for (const std::string& v : head_variables()) in_head.insert(v);
  std::vector<std::string> out;
  for (const std::string& v : body_variables())
    if (in_head.count(v)) out.push_back(v);
  return out;
}

std::vector<std::string> TGD::existentials() const {
  std::unordered_set<std::string> in_body;
  for (const std::string& v : body_variables()) in_body.insert(v);
  std::vector<std::string> out;
  for (const std::string& v : head_variables())
    if (!in_body.count(v)) out.push_back(v);
  return out;
}

bool TGD::is_id() const {
  return body.size() == 1 && head.size() == 1 && no_repeats(body[0]) &&
         no_repeats(head[0]);
}

bool TGD::is_guarded() const {
  auto vars = body_variables();
  for (const Atom& a : body) {
    std::unordered_set<std::string> in_atom;
    for (const Term& t : a.args)
      if (t.is_variable()) in_atom.insert(t.name());
    if (in_atom.size() == vars.size()) return true;
  }
  return body.empty();
}

bool TGD::is_frontier_guarded() const {
  auto ex = exported();
  for (const Atom& a : body) {
    std::unordered_set<std::string> in_atom;
    for (const Term& t : a.args)
      if (t.is_variable()) in_atom.insert(t.name());
    bool all = true;
    for (const std::string& v : ex)
      if (!in_atom.count(v)) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return body.empty();
}

std::string TGD::to_string() const {
  return atoms_to_string(body) + " -> " + atoms_to_string(head);
}

int id_width(const TGD& delta) {
  if (!delta.is_id()) throw std::runtime_error("id_width: not an ID");
  return static_cast<int>(delta.exported().size());
}

std::string FD::to_string(const Signature* sig) const {
  auto pos_name = [&](int p) -> std::string {
    if (sig && sig->has(relation)) {
      const auto& attrs = sig->at(relation).attrs;
      if (p >= 0 && p < static_cast<int>(attrs.size())) return attrs[p];
    }
    return std::to_string(p + 1);
  };
  std::string s = relation + ": ";
  for (size_t i = 0; i < determiner.size(); ++i) {
    if (i) s += ", ";
    s += pos_name(determiner[i]);
  }
  return s + " -> " + pos_name(determined);
}

const char* ConstraintClass::name() const {
  switch (kind) {
    case Kind::pure_id: return "PureID";
    case Kind::pure_fd: return "PureFD";
    case Kind::uid_plus_fd: return "UIDplusFD";
    case Kind::frontier_guarded_tgd: return "FrontierGuardedTGD";
    case Kind::unsupported: return "Unsupported";
  }
  return "?";
}

ConstraintClass classify(const ConstraintSet& sigma) {
  bool all_ids = true;
  bool all_uids = true;
  bool all_fg = true;
  int max_width = 0;
  for (const TGD& t : sigma.tgds) {
    if (t.is_id()) {
      int w = id_width(t);
      max_width = std::max(max_width, w);
      if (w > 1) all_uids = false;
    } else {
      all_ids = false;
      all_uids = false;
    }
    if (!t.is_frontier_guarded()) all_fg = false;
  }
  ConstraintClass cc;
  if (sigma.fds.empty() && all_ids) {
    cc.kind = ConstraintClass::Kind::pure_id;
    cc.max_width = max_width;
  } else if (sigma.tgds.empty() && !sigma.fds.empty()) {
    cc.kind = ConstraintClass::Kind::pure_fd;
  } else if (all_uids) {
    cc.kind = ConstraintClass::Kind::uid_plus_fd;
  } else if (all_fg && sigma.fds.empty()) {
    cc.kind = ConstraintClass::Kind::frontier_guarded_tgd;
  } else {
    cc.kind = ConstraintClass::Kind::unsupported;
  }
  return cc;
}

std::vector<int> detby(const std::string& relation, const std::vector<int>& p,
                       const std::vector<FD>& fds) {
  std::set<int> closure(p.begin(), p.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const FD& fd : fds) {
      if (fd.relation != relation) continue;
      if (closure.count(fd.determined)) continue;
      bool covered = true;
      for (int d : fd.determiner)
        if (!closure.count(d)) {
          covered = false;
          break;
        }
      if (covered) {
        closure.insert(fd.determined);
        changed = true;
      }
    }
  }
  return std::vector<int>(closure.begin(), closure.end());
}

Minimized minimize_under_fds(const CQ& q, const std::vector<FD>& fds) {
  // Union-find over the query's terms, oriented so constants win and
  // earlier variables absorb later ones.
  std::vector<std::string> vars = q.variables();
  std::unordered_map<std::string, size_t> var_rank;
  for (size_t i = 0; i < vars.size(); ++i) var_rank[vars[i]] = i;

  std::map<Term, Term> parent;
  std::function<Term(Term)> find = [&](Term t) -> Term {
    auto it = parent.find(t);
    if (it == parent.end() || it->second == t) return t;
    Term root = find(it->second);
    parent[t] = root;
    return root;
  };
  bool degenerate = false;
  auto merge = [&](Term a, Term b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a.is_constant() && b.is_constant()) {
      degenerate = true;
      return;
    }
    if (b.is_constant()) std::swap(a, b);
    if (a.is_variable() && b.is_variable() &&
        var_rank[b.name()] < var_rank[a.name()])
      std::swap(a, b);
    parent[b] = a;
  };

  auto rewrite = [&](const Atom& a) {
    Atom out{a.relation, {}};
    for (const Term& t : a.args) out.args.push_back(find(t));
    return out;
  };

  std::vector<Atom> atoms = q.atoms;
  bool changed = true;
  while (changed && !degenerate) {
    changed = false;
    for (size_t i = 0; i < atoms.size() && !degenerate; ++i)
      for (size_t j = 0; j < atoms.size() && !degenerate; ++j) {
        if (i == j) continue;
        const Atom a = rewrite(atoms[i]);
        const Atom b = rewrite(atoms[j]);
        if (a.relation != b.relation) continue;
        for (const FD& fd : fds) {
          if (fd.relation != a.relation) continue;
          bool agree = true;
          for (int d : fd.determiner)
            if (a.args[d] != b.args[d]) {
              agree = false;
              break;
            }
          if (!agree || a.args[fd.determined] == b.args[fd.determined])
            continue;
          merge(a.args[fd.determined], b.args[fd.determined]);
          changed = true;
        }
      }
  }
  Minimized out;
  out.degenerate = degenerate;
  if (degenerate) return out;

  out.query.name = q.name;
  std::unordered_set<Atom, AtomHash> seen;
  for (const Atom& a : atoms) {
    Atom r = rewrite(a);
    if (seen.insert(r).second) out.query.atoms.push_back(std::move(r));
  }
  // Free variables follow their representatives.
  std::unordered_set<std::string> fv_seen;
  for (const std::string& v : q.free_vars) {
    Term rep = find(Term::variable(v));
    if (rep.is_variable() && fv_seen.insert(rep.name()).second)
      out.query.free_vars.push_back(rep.name());
  }
  return out;
}

std::string primed(const std::string& relation) { return relation + "'"; }

Atom prime_atom(const Atom& a) { return Atom{primed(a.relation), a.args}; }

CQ prime_query(const CQ& q) {
  CQ out;
  out.name = q.name.empty() ? "Q'" : q.name + "'";
  out.free_vars = q.free_vars;
  for (const Atom& a : q.atoms) out.atoms.push_back(prime_atom(a));
  return out;
}

TGD prime_tgd(const TGD& t, const std::string& id) {
  TGD out;
  out.id = id;
  out.role = RuleRole::constraint_primed;
  for (const Atom& a : t.body) out.body.push_back(prime_atom(a));
  for (const Atom& a : t.head) out.head.push_back(prime_atom(a));
  return out;
}

FD prime_fd(const FD& f) {
  return FD{primed(f.relation), f.determiner, f.determined};
}

}  // namespace mondet
