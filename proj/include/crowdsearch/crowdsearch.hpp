// Copyright 2026 The Crowdsearch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Everything except json_io.hpp, which needs nlohmann/json.

#ifndef CROWDSEARCH_CROWDSEARCH_HPP_
#define CROWDSEARCH_CROWDSEARCH_HPP_

#include "crowdsearch/asymptotics.hpp"
#include "crowdsearch/distributions.hpp"
#include "crowdsearch/equilibrium.hpp"
#include "crowdsearch/errors.hpp"
#include "crowdsearch/expert.hpp"
#include "crowdsearch/hetero.hpp"
#include "crowdsearch/montecarlo.hpp"
#include "crowdsearch/multiprize.hpp"
#include "crowdsearch/numeric.hpp"
#include "crowdsearch/principal.hpp"

#endif  // CROWDSEARCH_CROWDSEARCH_HPP_
