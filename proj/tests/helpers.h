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

#ifndef MONDET_TESTS_HELPERS_H
#define MONDET_TESTS_HELPERS_H

#include <random>

#include "mondet/decide.h"
#include "mondet/oracle.h"

namespace mondet::testing {

inline Term v(const std::string& name) { return Term::variable(name); }
inline Term c(const std::string& name) { return Term::constant(name); }

inline Atom atom(const std::string& rel, std::vector<Term> args) {
  return Atom{rel, std::move(args)};
}

inline CQ cq(const std::string& name, std::vector<Atom> atoms,
             std::vector<std::string> free_vars = {}) {
  CQ q;
  q.name = name;
  q.atoms = std::move(atoms);
  q.free_vars = std::move(free_vars);
  return q;
}

inline TGD tgd(const std::string& id, std::vector<Atom> body,
               std::vector<Atom> head) {
  TGD t;
  t.id = id;
  t.body = std::move(body);
  t.head = std::move(head);
  return t;
}

inline Schema employee_schema(Bound ud_bound = Bound::none(),
                              bool with_constraint = true) {
  Schema sch;
  sch.signature.add({"Prof", 3, {"id", "name", "salary"}});
  sch.signature.add({"Udirectory", 3, {"id", "address", "phone"}});
  if (with_constraint)
    sch.constraints.tgds.push_back(
        tgd("tau", {atom("Prof", {v("i"), v("n"), v("s")})},
            {atom("Udirectory", {v("i"), v("a"), v("p")})}));
  sch.methods.push_back({"pr", "Prof", {0}, Bound::none()});
  sch.methods.push_back({"ud", "Udirectory", {}, ud_bound});
  return sch;
}

/// Udirectory with the keyed method ud2 (input id, bound 1) and optionally
/// the FD id -> address.
inline Schema directory_fd_schema(bool with_fd) {
  Schema sch;
  sch.signature.add({"Udirectory", 3, {"id", "address", "phone"}});
  sch.methods.push_back({"ud2", "Udirectory", {0}, Bound::result(1)});
  if (with_fd) sch.constraints.fds.push_back({"Udirectory", {0}, 1});
  return sch;
}

inline CQ q2_someone() {
  return cq("Q2", {atom("Udirectory", {v("i"), v("a"), v("p")})});
}

inline CQ q1_salary() {
  return cq("Q1", {atom("Prof", {v("i"), v("n"), c("10000")})});
}

/// Is "c2" the address of employee "c1".
inline CQ q3_address() {
  return cq("Q3", {atom("Udirectory", {c("c1"), c("c2"), v("p")})});
}

// ---------------------------------------------------------------------------
// Random problem generators for the property suites. All deterministic via
// the caller's RNG.
// ---------------------------------------------------------------------------

struct GenConfig {
  int max_relations = 3;
  int max_arity = 3;
  int max_ids = 3;
  int max_width = 2;
  int max_methods = 3;
  int max_bounded = 2;
  int max_bound = 3;
  int max_fds = 2;
  int max_query_atoms = 2;
  bool uids_only = false;
  bool with_fds = false;
  bool with_ids = true;
};

inline Schema random_schema(std::mt19937& rng, const GenConfig& cfg) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  Schema sch;
  int nrel = pick(1, cfg.max_relations);
  std::vector<int> arities;
  for (int r = 0; r < nrel; ++r) {
    int arity = pick(1, cfg.max_arity);
    arities.push_back(arity);
    sch.signature.add({"R" + std::to_string(r), arity, {}});
  }
  auto rel_name = [&](int r) { return "R" + std::to_string(r); };

  if (cfg.with_ids) {
    int nids = pick(0, cfg.max_ids);
    for (int k = 0; k < nids; ++k) {
      int rb = pick(0, nrel - 1);
      int rh = pick(0, nrel - 1);
      int max_w = std::min({cfg.max_width, arities[rb], arities[rh]});
      if (cfg.uids_only) max_w = std::min(max_w, 1);
      int w = pick(cfg.uids_only ? 1 : 0, std::max(max_w, cfg.uids_only ? 1 : 0));
      if (w > max_w) w = max_w;
      // Choose w body positions and w head positions without repetition.
      std::vector<int> bpos, hpos;
      for (int i = 0; i < arities[rb]; ++i) bpos.push_back(i);
      for (int i = 0; i < arities[rh]; ++i) hpos.push_back(i);
      std::shuffle(bpos.begin(), bpos.end(), rng);
      std::shuffle(hpos.begin(), hpos.end(), rng);
      Atom body{rel_name(rb), {}};
      for (int i = 0; i < arities[rb]; ++i)
        body.args.push_back(v("b" + std::to_string(i)));
      Atom head{rel_name(rh), {}};
      for (int i = 0; i < arities[rh]; ++i)
        head.args.push_back(v("h" + std::to_string(i)));
      for (int i = 0; i < w; ++i) head.args[hpos[i]] = body.args[bpos[i]];
      sch.constraints.tgds.push_back(
          tgd("id" + std::to_string(k), {body}, {head}));
    }
  }
  if (cfg.with_fds) {
    int nfds = pick(0, cfg.max_fds);
    for (int k = 0; k < nfds; ++k) {
      int r = pick(0, nrel - 1);
      if (arities[r] < 2) continue;
      FD fd;
      fd.relation = rel_name(r);
      int dsize = pick(1, std::max(1, arities[r] - 1));
      std::vector<int> pos;
      for (int i = 0; i < arities[r]; ++i) pos.push_back(i);
      std::shuffle(pos.begin(), pos.end(), rng);
      for (int i = 0; i < dsize; ++i) fd.determiner.push_back(pos[i]);
      std::sort(fd.determiner.begin(), fd.determiner.end());
      fd.determined = pos[dsize];
      sch.constraints.fds.push_back(std::move(fd));
    }
  }

  int nmethods = pick(1, cfg.max_methods);
  int bounded = 0;
  for (int k = 0; k < nmethods; ++k) {
    AccessMethod mt;
    mt.name = "m" + std::to_string(k);
    int r = pick(0, nrel - 1);
    mt.relation = rel_name(r);
    for (int i = 0; i < arities[r]; ++i)
      if (pick(0, 2) == 0) mt.inputs.push_back(i);
    if (bounded < cfg.max_bounded && pick(0, 1) == 0) {
      ++bounded;
      int k_bound = pick(1, cfg.max_bound);
      mt.bound = pick(0, 1) ? Bound::result(k_bound) : Bound::lower(k_bound);
    }
    sch.methods.push_back(std::move(mt));
  }
  return sch;
}

inline CQ random_query(std::mt19937& rng, const Schema& sch,
                       const GenConfig& cfg) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const auto& rels = sch.signature.relations();
  CQ q;
  q.name = "Q";
  int natoms = pick(1, cfg.max_query_atoms);
  int var_pool = pick(1, 3);
  for (int i = 0; i < natoms; ++i) {
    const auto& rel = rels[pick(0, static_cast<int>(rels.size()) - 1)];
    Atom a{rel.name, {}};
    for (int p = 0; p < rel.arity; ++p)
      a.args.push_back(v("x" + std::to_string(pick(0, var_pool))));
    q.atoms.push_back(std::move(a));
  }
  return q;
}

}  // namespace mondet::testing

#endif  // MONDET_TESTS_HELPERS_H
