// Copyright 2026 The polyce Authors.
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

#ifndef POLYCE_GAME_IO_H_
#define POLYCE_GAME_IO_H_

#include <string>
#include <string_view>

#include "json.hpp"
#include "polyce/game.h"

namespace polyce {

// Game document:
//   {"players": ["x","y"],
//    "utilities": [{"terms": [{"exp": [2,0], "coef": 0.596}, ...]}, ...]}
// Exponent tuples follow the order of "players". Throws InputError naming the
// offending utility/term on malformed input.
PolynomialGame ParseGame(std::string_view text);
std::string SerializeGame(const PolynomialGame& game);
PolynomialGame LoadGameFile(const std::string& path);

// Distribution document:
//   {"support": [{"point": [0.0, 1.0], "prob": 0.5}, ...]}
// Grids are rebuilt from the distinct coordinates of the support.
nlohmann::json DistributionToJson(const SupportedDistribution& dist);
SupportedDistribution DistributionFromJson(const nlohmann::json& doc);

std::string ReadTextFile(const std::string& path);

}  // namespace polyce

#endif  // POLYCE_GAME_IO_H_
