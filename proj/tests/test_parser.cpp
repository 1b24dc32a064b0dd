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

#include "helpers.h"
#include "mondet/parser.h"

using namespace mondet;
using namespace mondet::testing;

namespace {

const char* kEmployeeFile = R"(
# university employee services
relation Prof(id, name, salary)
relation Udirectory(id, address, phone)

method pr on Prof input(id)
method ud on Udirectory input() limit 100

id: Prof(i,n,s) -> Udirectory(i,a,p)

query Q2 :- Udirectory(i,a,p)
query Q1(n) :- Prof(i,n,"10000")
)";

}  // namespace

TEST_CASE("parses the employee file") {
  ProblemFile pf = parse_problem(kEmployeeFile);
  CHECK(pf.schema.signature.relations().size() == 2);
  REQUIRE(pf.schema.methods.size() == 2);
  CHECK(pf.schema.methods[0].inputs == std::vector<int>{0});
  CHECK(pf.schema.methods[1].bound == Bound::result(100));
  REQUIRE(pf.schema.constraints.tgds.size() == 1);
  CHECK(pf.schema.constraints.tgds[0].is_id());
  REQUIRE(pf.queries.size() == 2);
  CHECK(pf.queries[0].is_boolean());
  CHECK(pf.queries[1].free_vars == std::vector<std::string>{"n"});
  CHECK(pf.queries[1].atoms[0].args[2] == c("10000"));
}

TEST_CASE("parse errors carry line numbers") {
  SUBCASE("duplicate relation") {
    try {
      parse_problem("relation R(a)\nrelation R(b)\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
    }
  }
  SUBCASE("constant in a constraint") {
    const char* text =
        "relation R(a, b)\nid: R(x,\"c\") -> R(y,x)\n";
    CHECK_THROWS_AS(parse_problem(text), ParseError);
  }
  SUBCASE("unknown relation in a query") {
    CHECK_THROWS_AS(parse_problem("relation R(a)\nquery Q :- S(x)\n"),
                    ParseError);
  }
  SUBCASE("arity mismatch in a constraint") {
    CHECK_THROWS_AS(
        parse_problem("relation R(a,b)\nid: R(x) -> R(x,y)\n"),
        ParseError);
  }
  SUBCASE("id tag on a non-ID dependency") {
    CHECK_THROWS_AS(
        parse_problem("relation R(a,b)\nid: R(x,x) -> R(x,y)\n"),
        ParseError);
  }
}

TEST_CASE("fd positions resolve by attribute name or index") {
  ProblemFile pf = parse_problem(
      "relation U(id, addr, phone)\nfd U: id -> addr\nfd U: 1, 3 -> 2\n"
      "query Q :- U(x,y,z)\n");
  REQUIRE(pf.schema.constraints.fds.size() == 2);
  CHECK(pf.schema.constraints.fds[0].determiner == std::vector<int>{0});
  CHECK(pf.schema.constraints.fds[0].determined == 1);
  CHECK(pf.schema.constraints.fds[1].determiner == std::vector<int>({0, 2}));
  CHECK(pf.schema.constraints.fds[1].determined == 1);
}

TEST_CASE("tgd statements accept multiple atoms") {
  ProblemFile pf = parse_problem(
      "relation R(a,b)\nrelation S(a,b)\n"
      "tgd: R(x,y), S(y,z) -> S(x,y)\n"
      "query Q :- R(x,y)\n");
  REQUIRE(pf.schema.constraints.tgds.size() == 1);
  CHECK(pf.schema.constraints.tgds[0].body.size() == 2);
}

TEST_CASE("options parse and round-trip into the problem") {
  ProblemFile pf = parse_problem(
      "relation R(a)\noption accessible-constants\noption width 2\n"
      "option budget-rounds 40\noption oracle-domain 3\n"
      "query Q :- R(x)\n");
  CHECK(pf.options.accessible_constants.value_or(false));
  CHECK(pf.options.width == 2);
  CHECK(pf.options.round_budget == 40);
  CHECK(pf.options.oracle_domain == 3);
}

TEST_CASE("parse then decide end to end") {
  ProblemFile pf = parse_problem(kEmployeeFile);
  DecideOptions opts;
  opts.accessible_constants = true;
  Verdict v2 = decide(pf.schema, pf.queries[0], opts);
  CHECK(v2.answer == Verdict::Answer::answerable);
  Verdict v1 = decide(pf.schema, pf.queries[1], opts);
  CHECK(v1.answer == Verdict::Answer::not_answerable);
}
