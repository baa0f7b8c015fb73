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

#ifndef POLYCE_RANDOM_GAME_H_
#define POLYCE_RANDOM_GAME_H_

#include <cstdint>

#include "polyce/game.h"

namespace polyce {

// Game whose utilities have an independent standard normal coefficient on
// every monomial of total degree <= degree. Deterministic per seed. Players
// are named x, y, z for up to three players and p1, p2, ... otherwise.
PolynomialGame RandomGame(int num_players, int degree, std::uint64_t seed);

}  // namespace polyce

#endif  // POLYCE_RANDOM_GAME_H_
