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

#ifndef MONDET_MODEL_H
#define MONDET_MODEL_H

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mondet {

/// A term is a constant, a variable, or a labeled null. Constants and
/// variables live in disjoint namespaces; nulls are identified by a
/// generation id (the tag is for readability only and never compared).
class Term {
 public:
  enum class Kind : uint8_t { constant, variable, null };

  Term() : kind_(Kind::constant) {}

  static Term constant(std::string name) {
    return Term(Kind::constant, 0, std::move(name));
  }
  static Term variable(std::string name) {
    return Term(Kind::variable, 0, std::move(name));
  }
  static Term null(int64_t id, std::string tag) {
    return Term(Kind::null, id, std::move(tag));
  }

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::constant; }
  bool is_variable() const { return kind_ == Kind::variable; }
  bool is_null() const { return kind_ == Kind::null; }

  /// Symbol for constants/variables, tag for nulls.
  const std::string& name() const { return name_; }
  int64_t null_id() const { return id_; }

  bool operator==(const Term& o) const {
    if (kind_ != o.kind_) return false;
    return kind_ == Kind::null ? id_ == o.id_ : name_ == o.name_;
  }
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const {
    if (kind_ != o.kind_) return kind_ < o.kind_;
    return kind_ == Kind::null ? id_ < o.id_ : name_ < o.name_;
  }

  std::string to_string() const;

 private:
  Term(Kind k, int64_t id, std::string name)
      : kind_(k), id_(id), name_(std::move(name)) {}

  Kind kind_;
  int64_t id_;
  std::string name_;
};

struct TermHash {
  size_t operator()(const Term& t) const {
    size_t h = t.is_null() ? std::hash<int64_t>()(t.null_id())
                           : std::hash<std::string>()(t.name());
    return h * 3 + static_cast<size_t>(t.kind());
  }
};

/// Source of fresh nulls. One per decision run; ids are monotone so that
/// null-merge orientation (older id survives) is deterministic.
class NullFactory {
 public:
  Term fresh(const std::string& tag) { return Term::null(next_++, tag); }
  int64_t next_id() const { return next_; }

 private:
  int64_t next_ = 1;
};

struct Atom {
  std::string relation;
  std::vector<Term> args;

  bool operator==(const Atom& o) const {
    return relation == o.relation && args == o.args;
  }
  bool operator!=(const Atom& o) const { return !(*this == o); }
  bool operator<(const Atom& o) const {
    if (relation != o.relation) return relation < o.relation;
    return args < o.args;
  }
  bool is_ground() const;
  std::string to_string() const;
};

struct AtomHash {
  size_t operator()(const Atom& a) const {
    size_t h = std::hash<std::string>()(a.relation);
    TermHash th;
    for (const Term& t : a.args) h = h * 31 + th(t);
    return h;
  }
};

std::string atoms_to_string(const std::vector<Atom>& atoms);

/// Relational signature. Attribute names are kept for the textual format
/// (position names resolve to indices); positions are 0-based internally.
class Signature {
 public:
  struct Relation {
    std::string name;
    int arity = 0;
    std::vector<std::string> attrs;  // empty or one name per position
  };

  void add(Relation r);
  bool has(const std::string& name) const { return index_.count(name) > 0; }
  const Relation& at(const std::string& name) const;
  int arity(const std::string& name) const { return at(name).arity; }
  const std::vector<Relation>& relations() const { return relations_; }
  int max_arity() const;

 private:
  std::vector<Relation> relations_;
  std::unordered_map<std::string, size_t> index_;
};

/// A conjunctive query. Parsed queries may carry free variables; the engine
/// Booleanizes by treating them as existential.
struct CQ {
  std::string name;
  std::vector<Atom> atoms;
  std::vector<std::string> free_vars;

  bool is_boolean() const { return free_vars.empty(); }
  std::vector<std::string> variables() const;  // in first-occurrence order
  std::vector<Term> constants() const;         // deduplicated, first-occurrence
  std::string to_string() const;
};

/// A finite set of ground facts with set semantics. Iteration order is
/// insertion order, which the homomorphism search relies on for determinism.
class Instance {
 public:
  Instance() = default;
  explicit Instance(std::vector<Atom> facts);

  /// Returns true if the fact was new. Rejects non-ground atoms.
  bool insert(Atom fact);
  bool contains(const Atom& fact) const { return set_.count(fact) > 0; }
  size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }

  const std::vector<Atom>& facts() const { return facts_; }
  /// Indices into facts() for one relation, in insertion order.
  const std::vector<size_t>& facts_of(const std::string& relation) const;
  /// Indices of facts of `relation` holding `value` at `pos`, insertion
  /// order (the homomorphism search keys candidates on the first bound
  /// position).
  const std::vector<size_t>& facts_with(const std::string& relation, int pos,
                                        const Term& value) const;

  /// Active domain in first-occurrence order.
  std::vector<Term> active_domain() const;

  std::string to_string() const;

 private:
  struct SlotKey {
    std::string relation;
    int pos;
    Term value;
    bool operator==(const SlotKey& o) const {
      return pos == o.pos && relation == o.relation && value == o.value;
    }
  };
  struct SlotHash {
    size_t operator()(const SlotKey& k) const {
      return std::hash<std::string>()(k.relation) * 1000003 +
             static_cast<size_t>(k.pos) * 257 + TermHash()(k.value);
    }
  };

  std::vector<Atom> facts_;
  std::unordered_set<Atom, AtomHash> set_;
  std::unordered_map<std::string, std::vector<size_t>> by_relation_;
  std::unordered_map<SlotKey, std::vector<size_t>, SlotHash> by_slot_;
};

using Homomorphism = std::map<std::string, Term>;

/// Instantiates the atoms of q, turning each variable into a distinct fresh
/// null tagged with the variable name. Constants are preserved.
Instance canonical_database(const CQ& q, NullFactory& nulls);

/// Applies h to an atom; variables not bound by h raise.
Atom apply_hom(const Atom& atom, const Homomorphism& h);

/// Backtracking search for a homomorphism from q into i (identity on
/// constants). Atoms are tried in order, candidate facts in insertion order,
/// so the first result is deterministic. `base` pre-binds some variables.
std::optional<Homomorphism> find_homomorphism(const CQ& q, const Instance& i,
                                              const Homomorphism& base = {});

/// Enumerates every homomorphism from `atoms` into i, extending `base`.
/// The callback returns false to stop the search.
void for_each_homomorphism(const std::vector<Atom>& atoms, const Instance& i,
                           const Homomorphism& base,
                           const std::function<bool(const Homomorphism&)>& cb);

inline bool evaluate_boolean(const CQ& q, const Instance& i) {
  return find_homomorphism(q, i).has_value();
}

}  // namespace mondet

#endif  // MONDET_MODEL_H
