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

#include "mondet/model.h"

#include <algorithm>
#include <sstream>

namespace mondet {

std::string Term::to_string() const {
  switch (kind_) {
    case Kind::constant:
      return "\"" + name_ + "\"";
    case Kind::variable:
      return name_;
    case Kind::null:
      return "_" + name_ + "#" + std::to_string(id_);
  }
  return "?";
}

bool Atom::is_ground() const {
  for (const Term& t : args)
    if (t.is_variable()) return false;
  return true;
}

std::string Atom::to_string() const {
  std::string s = relation + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += args[i].to_string();
  }
  return s + ")";
}

std::string atoms_to_string(const std::vector<Atom>& atoms) {
  std::string s;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i) s += ", ";
    s += atoms[i].to_string();
  }
  return s;
}

void Signature::add(Relation r) {
  if (index_.count(r.name))
    throw std::runtime_error("duplicate relation: " + r.name);
  if (r.arity < 0) throw std::runtime_error("negative arity: " + r.name);
  index_[r.name] = relations_.size();
  relations_.push_back(std::move(r));
}

const Signature::Relation& Signature::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw std::runtime_error("unknown relation: " + name);
  return relations_[it->second];
}

int Signature::max_arity() const {
  int m = 0;
  for (const auto& r : relations_) m = std::max(m, r.arity);
  return m;
}

std::vector<std::string> CQ::variables() const {
  std::vector<std::string> vars;
  std::unordered_set<std::string> seen;
  for (const Atom& a : atoms)
    for (const Term& t : a.args)
      if (t.is_variable() && seen.insert(t.name()).second)
        vars.push_back(t.name());
  return vars;
}

std::vector<Term> CQ::constants() const {
  std::vector<Term> cs;
  std::unordered_set<std::string> seen;
  for (const Atom& a : atoms)
    for (const Term& t : a.args)
      if (t.is_constant() && seen.insert(t.name()).second) cs.push_back(t);
  return cs;
}

std::string CQ::to_string() const {
  std::string s = name.empty() ? "Q" : name;
  if (!free_vars.empty()) {
    s += "(";
    for (size_t i = 0; i < free_vars.size(); ++i) {
      if (i) s += ",";
      s += free_vars[i];
    }
    s += ")";
  }
  return s + " :- " + atoms_to_string(atoms);
}

Instance::Instance(std::vector<Atom> facts) {
  for (Atom& f : facts) insert(std::move(f));
}

bool Instance::insert(Atom fact) {
  if (!fact.is_ground())
    throw std::runtime_error("non-ground fact: " + fact.to_string());
  if (set_.count(fact)) return false;
  set_.insert(fact);
  size_t idx = facts_.size();
  by_relation_[fact.relation].push_back(idx);
  for (size_t p = 0; p < fact.args.size(); ++p)
    by_slot_[{fact.relation, static_cast<int>(p), fact.args[p]}].push_back(
        idx);
  facts_.push_back(std::move(fact));
  return true;
}

const std::vector<size_t>& Instance::facts_of(
    const std::string& relation) const {
  static const std::vector<size_t> kEmpty;
  auto it = by_relation_.find(relation);
  return it == by_relation_.end() ? kEmpty : it->second;
}

const std::vector<size_t>& Instance::facts_with(const std::string& relation,
                                                int pos,
                                                const Term& value) const {
  static const std::vector<size_t> kEmpty;
  auto it = by_slot_.find({relation, pos, value});
  return it == by_slot_.end() ? kEmpty : it->second;
}

std::vector<Term> Instance::active_domain() const {
  std::vector<Term> dom;
  std::unordered_set<Term, TermHash> seen;
  for (const Atom& f : facts_)
    for (const Term& t : f.args)
      if (seen.insert(t).second) dom.push_back(t);
  return dom;
}

std::string Instance::to_string() const {
  std::string s = "{";
  for (size_t i = 0; i < facts_.size(); ++i) {
    if (i) s += ", ";
    s += facts_[i].to_string();
  }
  return s + "}";
}

Instance canonical_database(const CQ& q, NullFactory& nulls) {
  Instance db;
  std::unordered_map<std::string, Term> var_to_null;
  for (const Atom& a : q.atoms) {
    Atom fact{a.relation, {}};
    fact.args.reserve(a.args.size());
    for (const Term& t : a.args) {
      if (t.is_variable()) {
        auto it = var_to_null.find(t.name());
        if (it == var_to_null.end())
          it = var_to_null.emplace(t.name(), nulls.fresh(t.name())).first;
        fact.args.push_back(it->second);
      } else {
        fact.args.push_back(t);
      }
    }
    db.insert(std::move(fact));
  }
  return db;
}

Atom apply_hom(const Atom& atom, const Homomorphism& h) {
  Atom out{atom.relation, {}};
  out.args.reserve(atom.args.size());
  for (const Term& t : atom.args) {
    if (t.is_variable()) {
      auto it = h.find(t.name());
      if (it == h.end())
        throw std::runtime_error("unbound variable: " + t.name());
      out.args.push_back(it->second);
    } else {
      out.args.push_back(t);
    }
  }
  return out;
}

namespace {

// Matches one atom against one fact, extending h. Returns false on clash.
bool match_atom(const Atom& atom, const Atom& fact, Homomorphism& h) {
  if (atom.relation != fact.relation || atom.args.size() != fact.args.size())
    return false;
  for (size_t i = 0; i < atom.args.size(); ++i) {
    const Term& t = atom.args[i];
    if (t.is_variable()) {
      auto it = h.find(t.name());
      if (it == h.end())
        h.emplace(t.name(), fact.args[i]);
      else if (it->second != fact.args[i])
        return false;
    } else if (t != fact.args[i]) {
      return false;
    }
  }
  return true;
}

bool search(const std::vector<Atom>& atoms, size_t pos, const Instance& inst,
            Homomorphism& h,
            const std::function<bool(const Homomorphism&)>& cb) {
  if (pos == atoms.size()) return cb(h);
  const Atom& atom = atoms[pos];
  // Candidates come from the first already-bound position when there is
  // one, the whole relation otherwise; either way in insertion order.
  const std::vector<size_t>* candidates = &inst.facts_of(atom.relation);
  for (size_t i = 0; i < atom.args.size(); ++i) {
    const Term& t = atom.args[i];
    if (t.is_variable()) {
      auto it = h.find(t.name());
      if (it == h.end()) continue;
      candidates =
          &inst.facts_with(atom.relation, static_cast<int>(i), it->second);
    } else {
      candidates = &inst.facts_with(atom.relation, static_cast<int>(i), t);
    }
    break;
  }
  for (size_t idx : *candidates) {
    Homomorphism trial = h;
    if (!match_atom(atom, inst.facts()[idx], trial)) continue;
    if (!search(atoms, pos + 1, inst, trial, cb)) return false;
  }
  return true;
}

}  // namespace

void for_each_homomorphism(
    const std::vector<Atom>& atoms, const Instance& i, const Homomorphism& base,
    const std::function<bool(const Homomorphism&)>& cb) {
  Homomorphism h = base;
  search(atoms, 0, i, h, cb);
}

std::optional<Homomorphism> find_homomorphism(const CQ& q, const Instance& i,
                                              const Homomorphism& base) {
  std::optional<Homomorphism> found;
  for_each_homomorphism(q.atoms, i, base, [&](const Homomorphism& h) {
    found = h;
    return false;  // stop at the first one
  });
  return found;
}

}  // namespace mondet
