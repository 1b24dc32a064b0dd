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

#include "mondet/jsonio.h"

namespace mondet {

using nlohmann::json;

namespace {

json instance_to_json(const Instance& inst) {
  json arr = json::array();
  for (const Atom& f : inst.facts()) arr.push_back(f.to_string());
  return arr;
}

}  // namespace

json verdict_to_json(const CQ& q, const Verdict& v) {
  json j;
  j["query"] = q.name;
  j["answer"] = v.answer_name();
  j["class"] = v.constraint_class.name();
  j["pipeline"] = v.pipeline;
  if (!v.reason.empty()) j["reason"] = v.reason;
  json w;
  if (!v.witness.kind.empty()) {
    w["kind"] = v.witness.kind;
    w["summary"] = v.witness.summary;
    if (!v.witness.lines.empty()) w["derivation"] = v.witness.lines;
    if (v.witness.bound >= 0) w["depth_bound"] = v.witness.bound;
    j["witness"] = w;
  }
  j["stats"] = {{"rounds", v.stats.rounds},
                {"facts", v.stats.facts},
                {"depth", v.stats.depth}};
  return j;
}

json certificate_to_json(const CounterexampleCertificate& cert) {
  json j;
  j["i1"] = instance_to_json(cert.i1);
  j["i2"] = instance_to_json(cert.i2);
  j["iacc"] = instance_to_json(cert.iacc);
  json choices = json::array();
  for (const auto& c : cert.choices) {
    json ch;
    ch["method"] = c.method;
    json binding = json::array();
    for (const Term& t : c.binding) binding.push_back(t.to_string());
    ch["binding"] = binding;
    json output = json::array();
    for (const Atom& f : c.output) output.push_back(f.to_string());
    ch["output"] = output;
    choices.push_back(ch);
  }
  j["accesses"] = choices;
  return j;
}

}  // namespace mondet
