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

#ifndef MONDET_PARSER_H
#define MONDET_PARSER_H

#include "mondet/schema.h"

namespace mondet {

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line(line) {}
  int line;
};

/// Per-file options (CLI flags take precedence).
struct ProblemOptions {
  std::optional<bool> accessible_constants;
  std::optional<int> width;
  std::optional<int> round_budget;
  std::optional<int> oracle_domain;
};

struct ProblemFile {
  Schema schema;
  std::vector<CQ> queries;
  ProblemOptions options;
};

/// Line-oriented problem format, '#' comments:
///   relation Prof(id, name, salary)
///   method pr on Prof input(id)
///   method ud on Udirectory input() limit 100
///   id: Prof(i,n,s) -> Udirectory(i,a,p)
///   tgd: R(x,y), S(y,z) -> T(x,z)
///   fd Udirectory: id -> address
///   query Q2 :- Udirectory(i,a,p)
///   query Q1(n) :- Prof(i,n,"10000")
///   option accessible-constants
/// Throws ParseError with a line number; the result is validated.
ProblemFile parse_problem(const std::string& text);

}  // namespace mondet

#endif  // MONDET_PARSER_H
