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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mondet/jsonio.h"
#include "mondet/parser.h"

using namespace mondet;

int main(int argc, char** argv) {
  CLI::App app{
      "mondet: decides whether a Boolean conjunctive query is monotone "
      "answerable over a service schema with result-bounded access methods"};

  std::string file;
  std::string class_override;
  int width = 0;
  int budget_rounds = 0;
  bool accessible_constants = false;
  int oracle_domain = 0;
  bool dump_gamma = false;
  bool dump_theta = false;
  bool compact_json = false;

  app.add_option("file", file, "problem file")->required();
  app.add_option("--class-override", class_override,
                 "force a decider route (PureID, PureFD, UIDplusFD, "
                 "FrontierGuardedTGD)");
  app.add_option("--width", width,
                 "extra width margin for the linearization (default: derived "
                 "from the schema)");
  app.add_option("--budget-rounds", budget_rounds,
                 "chase round budget for semi-decision routes");
  app.add_flag("--accessible-constants", accessible_constants,
               "seed accessible(c) for every query constant");
  app.add_option("--oracle", oracle_domain,
                 "cross-check NotAnswerable verdicts with the brute-force "
                 "counterexample search up to this domain size");
  app.add_flag("--dump-gamma", dump_gamma,
               "print the containment problem dependencies to stderr");
  app.add_flag("--dump-theta", dump_theta,
               "print the linearized rule set to stderr");
  app.add_flag("--json", compact_json,
               "compact single-line JSON output (golden mode)");

  CLI11_PARSE(app, argc, argv);

  std::ifstream in(file);
  if (!in) {
    std::cerr << "error: cannot open " << file << "\n";
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  try {
    ProblemFile problem = parse_problem(buf.str());

    DecideOptions opts;
    opts.accessible_constants =
        accessible_constants ||
        problem.options.accessible_constants.value_or(false);
    opts.width = width > 0 ? width : problem.options.width.value_or(0);
    opts.round_budget = budget_rounds > 0
                            ? budget_rounds
                            : problem.options.round_budget.value_or(0);
    opts.class_override = class_override;
    if (oracle_domain <= 0 && problem.options.oracle_domain)
      oracle_domain = *problem.options.oracle_domain;

    nlohmann::json results = nlohmann::json::array();
    bool any_unknown = false;

    for (const CQ& q : problem.queries) {
      if (dump_gamma) {
        ContainmentProblem p =
            amondet_containment(choice_simplification(elim_upper_bounds(
                                    problem.schema)),
                                q, {});
        std::cerr << "# gamma for " << q.name << "\n" << p.dump();
      }
      if (dump_theta) {
        ConstraintClass cls = classify(problem.schema.constraints);
        if (cls.kind == ConstraintClass::Kind::pure_id) {
          IdRouteArtifacts art = build_id_route(problem.schema, q, opts);
          std::cerr << "# sigma-lin for " << q.name << " (w=" << art.w
                    << ", depth=" << art.depth << ")\n";
          for (const TGD& t : art.rules_used)
            std::cerr << "tgd: " << t.to_string() << "    # " << t.id << "\n";
        } else if (cls.kind == ConstraintClass::Kind::uid_plus_fd ||
                   cls.kind == ConstraintClass::Kind::pure_fd) {
          UidFdRouteArtifacts art = build_uidfd_route(problem.schema, q, opts);
          std::cerr << "# theta for " << q.name << " (w=" << art.w
                    << ", depth=" << art.depth << ")\n";
          for (const TGD& t : art.rules_used)
            std::cerr << "tgd: " << t.to_string() << "    # " << t.id << "\n";
        }
      }

      Verdict v = decide(problem.schema, q, opts);
      nlohmann::json jv = verdict_to_json(q, v);

      if (oracle_domain > 0 &&
          v.answer != Verdict::Answer::answerable) {
        OracleOptions oopts;
        oopts.max_domain = oracle_domain;
        oopts.accessible_constants = opts.accessible_constants;
        auto cert = search_counterexample(problem.schema, q, oopts);
        if (cert) jv["certificate"] = certificate_to_json(*cert);
      }
      if (oracle_domain > 0 && v.answer == Verdict::Answer::answerable) {
        OracleOptions oopts;
        oopts.max_domain = oracle_domain;
        oopts.accessible_constants = opts.accessible_constants;
        auto cert = search_counterexample(problem.schema, q, oopts);
        if (cert) {
          std::cerr << "internal error: decider says Answerable but the "
                       "oracle found a counterexample for "
                    << q.name << "\n";
          return 1;
        }
      }

      if (v.answer == Verdict::Answer::unknown) any_unknown = true;
      results.push_back(std::move(jv));
    }

    if (compact_json)
      std::cout << results.dump() << "\n";
    else
      std::cout << results.dump(2) << "\n";
    return any_unknown ? 2 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
