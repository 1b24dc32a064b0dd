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

#ifndef MONDET_JSONIO_H
#define MONDET_JSONIO_H

#include <json.hpp>

#include "mondet/decide.h"
#include "mondet/oracle.h"

namespace mondet {

nlohmann::json verdict_to_json(const CQ& q, const Verdict& v);
nlohmann::json certificate_to_json(const CounterexampleCertificate& cert);

}  // namespace mondet

#endif  // MONDET_JSONIO_H
