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

#include "polyce/random_game.h"

#include <random>
#include <string>

#include "polyce/errors.h"
#include "polyce/sos.h"

namespace polyce {

PolynomialGame RandomGame(int num_players, int degree, std::uint64_t seed) {
  if (num_players < 1) throw InputError("random game needs at least one player");
  if (degree < 0) throw InputError("random game degree must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::vector<Exponent> monomials = sos::GradedMonomials(num_players, degree);
  std::vector<std::string> names;
  std::vector<MultiPoly> utilities;
  for (int i = 0; i < num_players; ++i) {
    names.push_back(num_players <= 3 ? std::string(1, "xyz"[i]) : "p" + std::to_string(i + 1));
    MultiPoly u(num_players);
    for (const Exponent& e : monomials) u.AddTerm(e, normal(rng));
    utilities.push_back(std::move(u));
  }
  return PolynomialGame(std::move(names), std::move(utilities));
}

}  // namespace polyce
