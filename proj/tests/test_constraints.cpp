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

#include <doctest.h>

#include <algorithm>

#include "helpers.h"

using namespace mondet;
using namespace mondet::testing;

TEST_CASE("id_width counts exported variables") {
  CHECK(id_width(tgd("u", {atom("R", {v("x"), v("y")})},
                     {atom("S", {v("z"), v("y"), v("w")})})) == 1);
  CHECK(id_width(tgd("f", {atom("R", {v("x"), v("y")})},
                     {atom("S", {v("x"), v("y")})})) == 2);
  CHECK(id_width(tgd("z", {atom("R", {v("x"), v("y")})},
                     {atom("S", {v("u"), v("v")})})) == 0);
}

TEST_CASE("classify picks the most specific class") {
  SUBCASE("single ID without FDs") {
    ConstraintSet s;
    s.tgds.push_back(tgd("t", {atom("Prof", {v("i"), v("n"), v("s")})},
                         {atom("Udirectory", {v("i"), v("a"), v("p")})}));
    ConstraintClass cc = classify(s);
    CHECK(cc.kind == ConstraintClass::Kind::pure_id);
    CHECK(cc.max_width == 1);
  }
  SUBCASE("FDs only") {
    ConstraintSet s;
    s.fds.push_back({"Udirectory", {0}, 1});
    CHECK(classify(s).kind == ConstraintClass::Kind::pure_fd);
  }
  SUBCASE("width-2 ID plus an FD is not UIDplusFD") {
    ConstraintSet s;
    s.tgds.push_back(tgd("t", {atom("R", {v("x"), v("y")})},
                         {atom("S", {v("x"), v("y"), v("z")})}));
    s.fds.push_back({"S", {0}, 1});
    CHECK(classify(s).kind != ConstraintClass::Kind::uid_plus_fd);
    CHECK(classify(s).kind != ConstraintClass::Kind::pure_id);
    // Every exported variable sits in the (single) body atom.
    CHECK(classify(s).kind == ConstraintClass::Kind::unsupported);
  }
  SUBCASE("UIDs with FDs") {
    ConstraintSet s;
    s.tgds.push_back(tgd("t", {atom("R", {v("x"), v("y")})},
                         {atom("S", {v("x"), v("z"), v("w")})}));
    s.fds.push_back({"S", {0}, 1});
    CHECK(classify(s).kind == ConstraintClass::Kind::uid_plus_fd);
  }
  SUBCASE("frontier-guarded TGD") {
    ConstraintSet s;
    s.tgds.push_back(tgd("t",
                         {atom("R", {v("x"), v("y")}), atom("S", {v("y"), v("z")})},
                         {atom("T", {v("y")})}));
    CHECK(classify(s).kind == ConstraintClass::Kind::frontier_guarded_tgd);
  }
  SUBCASE("empty set classifies as PureID") {
    CHECK(classify({}).kind == ConstraintClass::Kind::pure_id);
  }
  SUBCASE("stable under reordering") {
    ConstraintSet s;
    s.tgds.push_back(tgd("a", {atom("R", {v("x"), v("y")})},
                         {atom("S", {v("x"), v("z"), v("w")})}));
    s.tgds.push_back(tgd("b", {atom("S", {v("x"), v("y"), v("z")})},
                         {atom("R", {v("y"), v("u")})}));
    ConstraintSet r;
    r.tgds = {s.tgds[1], s.tgds[0]};
    CHECK(classify(s).kind == classify(r).kind);
  }
}

TEST_CASE("detby attribute closure") {
  SUBCASE("single FD") {
    std::vector<FD> fds = {{"Udirectory", {0}, 1}};
    CHECK(detby("Udirectory", {0}, fds) == std::vector<int>{0, 1});
  }
  SUBCASE("all positions determine themselves") {
    CHECK(detby("R", {0, 1, 2}, {}) == std::vector<int>({0, 1, 2}));
  }
  SUBCASE("chained closure") {
    std::vector<FD> fds = {{"R", {0}, 1}, {"R", {1}, 2}};
    CHECK(detby("R", {0}, fds) == std::vector<int>({0, 1, 2}));
  }
  SUBCASE("other relations do not interfere") {
    std::vector<FD> fds = {{"S", {0}, 1}};
    CHECK(detby("R", {0}, fds) == std::vector<int>{0});
  }
}

namespace {

// Brute-force FD implication: P -> j holds iff every two-row instance that
// satisfies the FDs and agrees on P agrees on j. Rows over a tiny domain.
bool implied_brute_force(int arity, const std::vector<FD>& fds,
                         const std::vector<int>& p, int j) {
  // Two rows, each position independently equal or distinct: enumerate all
  // "agreement patterns" as bitmasks.
  for (int mask = 0; mask < (1 << arity); ++mask) {
    Instance inst;
    Atom r1{"R", {}}, r2{"R", {}};
    for (int i = 0; i < arity; ++i) {
      r1.args.push_back(c("a" + std::to_string(i)));
      r2.args.push_back(mask & (1 << i) ? c("a" + std::to_string(i))
                                        : c("b" + std::to_string(i)));
    }
    inst.insert(r1);
    inst.insert(r2);
    bool sat = true;
    for (const FD& fd : fds) {
      bool agree = true;
      for (int d : fd.determiner)
        if (!(mask & (1 << d))) agree = false;
      if (agree && !(mask & (1 << fd.determined))) sat = false;
    }
    if (!sat) continue;
    bool agree_p = true;
    for (int d : p)
      if (!(mask & (1 << d))) agree_p = false;
    if (agree_p && !(mask & (1 << j))) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("detby agrees with brute-force two-row implication") {
  std::mt19937 rng(23);
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  for (int trial = 0; trial < 60; ++trial) {
    int arity = pick(1, 4);
    std::vector<FD> fds;
    int nfds = pick(0, 3);
    for (int k = 0; k < nfds; ++k) {
      FD fd;
      fd.relation = "R";
      int dsize = pick(1, arity);
      for (int i = 0; i < dsize; ++i) fd.determiner.push_back(pick(0, arity - 1));
      std::sort(fd.determiner.begin(), fd.determiner.end());
      fd.determiner.erase(
          std::unique(fd.determiner.begin(), fd.determiner.end()),
          fd.determiner.end());
      fd.determined = pick(0, arity - 1);
      fds.push_back(fd);
    }
    std::vector<int> p;
    for (int i = 0; i < arity; ++i)
      if (pick(0, 1)) p.push_back(i);
    std::vector<int> closure = detby("R", p, fds);
    for (int j = 0; j < arity; ++j) {
      bool in_closure = std::count(closure.begin(), closure.end(), j) > 0;
      CHECK(in_closure == implied_brute_force(arity, fds, p, j));
    }
  }
}

TEST_CASE("detby is monotone and idempotent") {
  std::vector<FD> fds = {{"R", {0}, 1}, {"R", {1, 2}, 3}};
  auto c1 = detby("R", {0}, fds);
  auto c2 = detby("R", {0, 2}, fds);
  for (int x : c1) CHECK(std::count(c2.begin(), c2.end(), x));
  CHECK(detby("R", c1, fds) == c1);
}

TEST_CASE("minimize_under_fds") {
  SUBCASE("merges determined variables") {
    CQ q = cq("Q", {atom("R", {v("x"), v("y")}), atom("R", {v("x"), v("z")})});
    Minimized m = minimize_under_fds(q, {{"R", {0}, 1}});
    REQUIRE_FALSE(m.degenerate);
    CHECK(m.query.atoms.size() == 1);
  }
  SUBCASE("constant clash is degenerate") {
    CQ q = cq("Q", {atom("R", {v("x"), c("c1")}), atom("R", {v("x"), c("c2")})});
    Minimized m = minimize_under_fds(q, {{"R", {0}, 1}});
    CHECK(m.degenerate);
  }
  SUBCASE("unrelated FDs leave the query unchanged") {
    CQ q = cq("Q", {atom("R", {v("x"), v("y")}), atom("S", {v("y"), v("z")})});
    Minimized m = minimize_under_fds(q, {{"R", {0}, 1}});
    REQUIRE_FALSE(m.degenerate);
    CHECK(m.query.atoms.size() == 2);
  }
  SUBCASE("idempotent, and the result admits no further FD chase steps") {
    std::mt19937 rng(29);
    GenConfig cfg;
    cfg.with_fds = true;
    cfg.with_ids = false;
    for (int trial = 0; trial < 40; ++trial) {
      Schema sch = random_schema(rng, cfg);
      CQ q = random_query(rng, sch, cfg);
      Minimized m1 = minimize_under_fds(q, sch.constraints.fds);
      if (m1.degenerate) continue;
      Minimized m2 = minimize_under_fds(m1.query, sch.constraints.fds);
      REQUIRE_FALSE(m2.degenerate);
      CHECK(m2.query.atoms == m1.query.atoms);

      NullFactory nulls;
      Instance db = canonical_database(m1.query, nulls);
      ConstraintSet fd_only;
      fd_only.fds = sch.constraints.fds;
      ChaseOutcome oc = restricted_chase(db, fd_only, nulls, {8, 10000, false});
      CHECK(oc.fd_firings == 0);
    }
  }
}

TEST_CASE("priming renames relations structurally") {
  CQ q = q1_salary();
  CQ qp = prime_query(q);
  CHECK(qp.atoms[0].relation == "Prof'");
  CHECK(qp.atoms[0].args == q.atoms[0].args);
}
