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

#include "mondet/oracle.h"

#include <algorithm>
#include <unordered_set>

namespace mondet {

namespace {

// TGD model check: every body homomorphism extends to the head.
bool satisfies_tgd(const Instance& inst, const TGD& t) {
  bool ok = true;
  for_each_homomorphism(t.body, inst, {}, [&](const Homomorphism& h) {
    bool extended = false;
    for_each_homomorphism(t.head, inst, h, [&](const Homomorphism&) {
      extended = true;
      return false;
    });
    if (!extended) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

bool satisfies_fd(const Instance& inst, const FD& fd) {
  const auto& idx = inst.facts_of(fd.relation);
  for (size_t x = 0; x < idx.size(); ++x)
    for (size_t y = x + 1; y < idx.size(); ++y) {
      const Atom& f = inst.facts()[idx[x]];
      const Atom& g = inst.facts()[idx[y]];
      bool agree = true;
      for (int d : fd.determiner)
        if (f.args[d] != g.args[d]) {
          agree = false;
          break;
        }
      if (agree && f.args[fd.determined] != g.args[fd.determined])
        return false;
    }
  return true;
}

bool satisfies(const Instance& inst, const ConstraintSet& sigma) {
  for (const FD& fd : sigma.fds)
    if (!satisfies_fd(inst, fd)) return false;
  for (const TGD& t : sigma.tgds)
    if (!satisfies_tgd(inst, t)) return false;
  return true;
}

// Matching facts of an access (method + binding) in an instance.
std::vector<Atom> matching(const Instance& inst, const AccessMethod& mt,
                           const std::vector<Term>& binding) {
  std::vector<Atom> out;
  for (size_t idx : inst.facts_of(mt.relation)) {
    const Atom& f = inst.facts()[idx];
    bool match = true;
    for (size_t i = 0; i < mt.inputs.size(); ++i)
      if (f.args[mt.inputs[i]] != binding[i]) {
        match = false;
        break;
      }
    if (match) out.push_back(f);
  }
  return out;
}

// Every binding over `values` for the method's input positions.
std::vector<std::vector<Term>> bindings_over(const AccessMethod& mt,
                                             const std::vector<Term>& values) {
  std::vector<std::vector<Term>> out = {{}};
  for (size_t i = 0; i < mt.inputs.size(); ++i) {
    std::vector<std::vector<Term>> next;
    for (const auto& b : out)
      for (const Term& v : values) {
        auto b2 = b;
        b2.push_back(v);
        next.push_back(b2);
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Term> binding_values(const Instance& iacc, const CQ& q,
                                 bool accessible_constants) {
  std::vector<Term> values = iacc.active_domain();
  if (accessible_constants)
    for (const Term& c : q.constants())
      if (!std::count(values.begin(), values.end(), c)) values.push_back(c);
  return values;
}

// Access validity of iacc in i1, recording one valid output per access.
bool access_valid(const Schema& sch, const Instance& iacc, const Instance& i1,
                  const std::vector<Term>& values,
                  std::vector<CounterexampleCertificate::AccessChoice>* out) {
  for (const AccessMethod& mt : sch.methods) {
    for (const auto& binding : bindings_over(mt, values)) {
      std::vector<Atom> m1 = matching(i1, mt, binding);
      std::vector<Atom> macc = matching(iacc, mt, binding);
      CounterexampleCertificate::AccessChoice choice{mt.name, binding, {}};
      if (!mt.bound.is_bounded()) {
        // The only valid output is all matching tuples of I1.
        for (const Atom& f : m1)
          if (!iacc.contains(f)) return false;
        choice.output = m1;
      } else {
        size_t need = std::min<size_t>(static_cast<size_t>(mt.bound.k),
                                       m1.size());
        if (macc.size() < need) return false;
        choice.output.assign(macc.begin(), macc.begin() + need);
      }
      if (out && (!choice.output.empty() || !m1.empty()))
        out->push_back(std::move(choice));
    }
  }
  return true;
}

}  // namespace

bool certificate_valid(const Schema& sch, const CQ& q,
                       const CounterexampleCertificate& cert,
                       bool accessible_constants) {
  for (const Atom& f : cert.iacc.facts())
    if (!cert.i1.contains(f) || !cert.i2.contains(f)) return false;
  if (!satisfies(cert.i1, sch.constraints)) return false;
  if (!satisfies(cert.i2, sch.constraints)) return false;
  CQ boolq = q;
  boolq.free_vars.clear();
  if (!evaluate_boolean(boolq, cert.i1)) return false;
  if (evaluate_boolean(boolq, cert.i2)) return false;
  std::vector<Term> values =
      binding_values(cert.iacc, boolq, accessible_constants);
  return access_valid(sch, cert.iacc, cert.i1, values, nullptr);
}

std::optional<CounterexampleCertificate> search_counterexample(
    const Schema& sch, const CQ& q, const OracleOptions& opts) {
  CQ boolq = q;
  boolq.free_vars.clear();
  std::vector<Term> constants = boolq.constants();

  const int min_domain =
      std::max<int>(1, static_cast<int>(constants.size()));
  const int max_domain = std::max(opts.max_domain, min_domain);

  for (int dsize = min_domain; dsize <= max_domain; ++dsize) {
    // Domain: the query constants plus fresh values (interchangeable).
    std::vector<Term> domain = constants;
    int fresh_from = static_cast<int>(domain.size());
    for (int i = 0; static_cast<int>(domain.size()) < dsize; ++i)
      domain.push_back(Term::constant("v" + std::to_string(i + 1)));

    // Universe of facts over the domain, in deterministic order.
    std::vector<Atom> universe;
    for (const auto& rel : sch.signature.relations()) {
      std::vector<std::vector<Term>> tuples = {{}};
      for (int i = 0; i < rel.arity; ++i) {
        std::vector<std::vector<Term>> next;
        for (const auto& t : tuples)
          for (const Term& v : domain) {
            auto t2 = t;
            t2.push_back(v);
            next.push_back(t2);
          }
        tuples = std::move(next);
      }
      for (auto& t : tuples) universe.push_back(Atom{rel.name, std::move(t)});
    }

    // Canonicity under permutations of the fresh values.
    std::vector<std::vector<int>> perms;
    {
      std::vector<int> idx;
      int fresh_count = dsize - fresh_from;
      for (int i = 0; i < fresh_count; ++i) idx.push_back(i);
      do {
        perms.push_back(idx);
      } while (std::next_permutation(idx.begin(), idx.end()));
    }
    auto canonical = [&](const std::vector<size_t>& picked) {
      std::vector<Atom> base;
      for (size_t i : picked) base.push_back(universe[i]);
      std::sort(base.begin(), base.end());
      for (const auto& perm : perms) {
        std::vector<Atom> renamed;
        for (size_t i : picked) {
          Atom f = universe[i];
          for (Term& t : f.args)
            for (size_t k = 0; k < perm.size(); ++k)
              if (t == domain[fresh_from + k]) {
                t = domain[fresh_from + perm[k]];
                break;
              }
          renamed.push_back(std::move(f));
        }
        std::sort(renamed.begin(), renamed.end());
        if (renamed < base) return false;
      }
      return true;
    };

    std::optional<CounterexampleCertificate> found;

    std::function<bool(const Instance&)> consider =
        [&](const Instance& i1) -> bool {
      if (!satisfies(i1, sch.constraints)) return false;
      if (!evaluate_boolean(boolq, i1)) return false;

      const size_t n = i1.size();
      for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
        Instance iacc;
        for (size_t i = 0; i < n; ++i)
          if (mask & (size_t(1) << i)) iacc.insert(i1.facts()[i]);

        std::vector<Term> values =
            binding_values(iacc, boolq, opts.accessible_constants);
        std::vector<CounterexampleCertificate::AccessChoice> choices;
        if (!access_valid(sch, iacc, i1, values, &choices)) continue;

        // I2: iacc itself if it works, otherwise its chase completion.
        if (satisfies(iacc, sch.constraints) &&
            !evaluate_boolean(boolq, iacc)) {
          found = CounterexampleCertificate{i1, iacc, iacc, choices};
          return true;
        }
        NullFactory nulls;
        ChaseOptions copts;
        copts.round_budget = opts.chase_rounds;
        ChaseOutcome oc = restricted_chase(iacc, sch.constraints, nulls, copts);
        if (oc.status != ChaseOutcome::Status::saturated) continue;
        if (evaluate_boolean(boolq, oc.instance))
          continue;  // every completion of iacc satisfies q
        found = CounterexampleCertificate{i1, oc.instance, iacc, choices};
        return true;
      }
      return false;
    };

    // Enumerate i1 candidates by fact count, canonical representatives only.
    for (int count = 1; count <= opts.max_facts && !found; ++count) {
      std::vector<size_t> picked;
      std::function<bool(size_t)> rec = [&](size_t start) -> bool {
        if (static_cast<int>(picked.size()) == count) {
          if (!canonical(picked)) return false;
          Instance i1;
          for (size_t i : picked) i1.insert(universe[i]);
          return consider(i1);
        }
        for (size_t i = start; i < universe.size(); ++i) {
          picked.push_back(i);
          if (rec(i + 1)) return true;
          picked.pop_back();
        }
        return false;
      };
      if (rec(0)) break;
    }
    if (found) return found;
  }
  return std::nullopt;
}

namespace {

Entailment head_entailed(const ChaseOutcome& oc, const CQ& head) {
  if (evaluate_boolean(head, oc.instance)) return Entailment::yes;
  if (oc.status == ChaseOutcome::Status::saturated) return Entailment::no;
  return Entailment::unknown;
}

}  // namespace

Entailment entails_dependency(const ConstraintSet& sigma, const TGD& rule,
                              int round_budget) {
  Instance body;
  Homomorphism freeze;
  for (const std::string& v : rule.body_variables())
    freeze.emplace(v, Term::constant("e_" + v));
  for (const Atom& a : rule.body) body.insert(apply_hom(a, freeze));

  CQ head;
  head.name = "head";
  for (const Atom& a : rule.head) {
    Atom pattern{a.relation, {}};
    for (const Term& t : a.args) {
      auto it = t.is_variable() ? freeze.find(t.name()) : freeze.end();
      pattern.args.push_back(it != freeze.end() ? it->second : t);
    }
    head.atoms.push_back(std::move(pattern));
  }

  NullFactory nulls;
  ChaseOptions copts;
  copts.round_budget = round_budget;
  ChaseOutcome oc = restricted_chase(body, sigma, nulls, copts);
  if (oc.status == ChaseOutcome::Status::failed) return Entailment::yes;
  return head_entailed(oc, head);
}

Entailment entails_dependency(const ConstraintSet& sigma,
                              const TruncAxiom& axiom, int arity,
                              int round_budget) {
  return entails_dependency(sigma, axiom.to_tgd(arity), round_budget);
}

}  // namespace mondet
