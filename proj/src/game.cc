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

#include "polyce/game.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "polyce/errors.h"

namespace polyce {

PolynomialGame::PolynomialGame(std::vector<std::string> player_names,
                               std::vector<MultiPoly> utilities)
    : player_names_(std::move(player_names)), utilities_(std::move(utilities)) {
  const int n = static_cast<int>(utilities_.size());
  if (n < 1) throw InputError("a game needs at least one player");
  if (static_cast<int>(player_names_.size()) != n) {
    throw InputError("got " + std::to_string(player_names_.size()) +
                     " player names for " + std::to_string(n) + " utilities");
  }
  for (int i = 0; i < n; ++i) {
    if (utilities_[i].num_vars() != n) {
      throw InputError("utility " + std::to_string(i) + " has " +
                       std::to_string(utilities_[i].num_vars()) +
                       " variables, expected " + std::to_string(n));
    }
  }
}

ProductGrid::ProductGrid(std::vector<std::vector<double>> grids)
    : grids_(std::move(grids)) {
  if (grids_.empty()) throw InputError("product grid needs at least one player");
  strides_.assign(grids_.size(), 1);
  num_cells_ = 1;
  for (int i = static_cast<int>(grids_.size()) - 1; i >= 0; --i) {
    const auto& g = grids_[i];
    if (g.empty()) throw InputError("empty grid for player " + std::to_string(i));
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (!std::isfinite(g[k]) || g[k] < -1.0 || g[k] > 1.0) {
        throw InputError("grid point " + std::to_string(g[k]) + " of player " +
                         std::to_string(i) + " is outside [-1,1]");
      }
      if (k > 0 && g[k] - g[k - 1] <= kGridMergeTol) {
        throw InputError("grid of player " + std::to_string(i) +
                         " is not strictly increasing");
      }
    }
    strides_[i] = num_cells_;
    num_cells_ *= g.size();
  }
}

std::vector<std::size_t> ProductGrid::Unflatten(std::size_t cell) const {
  std::vector<std::size_t> index(grids_.size());
  for (int i = 0; i < num_players(); ++i) index[i] = Coordinate(cell, i);
  return index;
}

std::size_t ProductGrid::Flatten(std::span<const std::size_t> index) const {
  std::size_t cell = 0;
  for (int i = 0; i < num_players(); ++i) cell += index[i] * strides_[i];
  return cell;
}

std::vector<double> ProductGrid::Point(std::size_t cell) const {
  std::vector<double> point(grids_.size());
  for (int i = 0; i < num_players(); ++i) point[i] = grids_[i][Coordinate(cell, i)];
  return point;
}

std::optional<std::size_t> ProductGrid::Find(int player, double value) const {
  const auto& g = grids_.at(player);
  auto it = std::lower_bound(g.begin(), g.end(), value - kGridMergeTol);
  if (it != g.end() && std::abs(*it - value) <= kGridMergeTol) {
    return static_cast<std::size_t>(it - g.begin());
  }
  return std::nullopt;
}

std::vector<double> NormalizeGrid(std::vector<double> points) {
  std::sort(points.begin(), points.end());
  std::vector<double> merged;
  for (double p : points) {
    if (merged.empty() || p - merged.back() > kGridMergeTol) merged.push_back(p);
  }
  return merged;
}

FiniteGame::FiniteGame(ProductGrid grid, std::vector<std::vector<double>> payoffs)
    : grid_(std::move(grid)), payoffs_(std::move(payoffs)) {
  if (static_cast<int>(payoffs_.size()) != grid_.num_players()) {
    throw InputError("payoff tensors do not match the number of players");
  }
  for (const auto& p : payoffs_) {
    if (p.size() != grid_.num_cells()) {
      throw InputError("payoff tensor shape does not match the grid");
    }
  }
}

SupportedDistribution::SupportedDistribution(ProductGrid grid,
                                             std::vector<double> probs)
    : grid_(std::move(grid)), probs_(std::move(probs)) {
  if (probs_.size() != grid_.num_cells()) {
    throw InputError("probability tensor shape does not match the grid");
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw InputError("negative or NaN probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InputError("probabilities sum to " + std::to_string(total));
  }
}

SupportedDistribution SupportedDistribution::FromApproximate(
    ProductGrid grid, std::vector<double> probs, double clean_tol) {
  double total = 0.0;
  for (double& p : probs) {
    if (p < -clean_tol || !std::isfinite(p)) {
      throw InputError("probability " + std::to_string(p) + " is too negative");
    }
    p = std::max(p, 0.0);
    total += p;
  }
  if (total <= 0.0) throw InputError("distribution has no mass");
  for (double& p : probs) p /= total;
  return SupportedDistribution(std::move(grid), std::move(probs));
}

SupportedDistribution SupportedDistribution::PointMass(
    std::span<const double> point) {
  std::vector<std::vector<double>> grids;
  for (double v : point) grids.push_back({v});
  return SupportedDistribution(ProductGrid(std::move(grids)), {1.0});
}

std::vector<double> SupportedDistribution::Marginal(int player) const {
  std::vector<double> marginal(grid_.size(player), 0.0);
  for (std::size_t cell = 0; cell < probs_.size(); ++cell) {
    marginal[grid_.Coordinate(cell, player)] += probs_[cell];
  }
  return marginal;
}

std::vector<SupportedDistribution::Atom> SupportedDistribution::Support(
    double threshold) const {
  std::vector<Atom> atoms;
  for (std::size_t cell = 0; cell < probs_.size(); ++cell) {
    if (probs_[cell] > threshold) atoms.push_back({grid_.Point(cell), probs_[cell]});
  }
  return atoms;
}

double EvalUtility(const PolynomialGame& game, int player,
                   std::span<const double> point) {
  if (player < 0 || player >= game.num_players()) {
    throw InputError("player index " + std::to_string(player) + " out of range");
  }
  if (static_cast<int>(point.size()) != game.num_players()) {
    throw InputError("point has " + std::to_string(point.size()) +
                     " coordinates, expected " + std::to_string(game.num_players()));
  }
  for (double v : point) {
    if (!(std::abs(v) <= 1.0)) {
      throw InputError("coordinate " + std::to_string(v) + " is outside [-1,1]");
    }
  }
  return game.utility(player).Evaluate(point);
}

std::vector<double> DeviationGainCoefficients(const PolynomialGame& game,
                                              int player,
                                              const SupportedDistribution& dist,
                                              std::size_t rec_index) {
  const ProductGrid& grid = dist.grid();
  if (grid.num_players() != game.num_players()) {
    throw InputError("distribution and game disagree on the number of players");
  }
  const MultiPoly& u = game.utility(player);
  const double rec = grid.points(player).at(rec_index);
  std::vector<double> gain(u.Degree(player) + 1, 0.0);
  double baseline = 0.0;
  // Walk only the cells whose own coordinate is rec_index.
  const std::size_t stride = grid.stride(player);
  const std::size_t block = stride * grid.size(player);
  for (std::size_t outer = 0; outer < grid.num_cells(); outer += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t cell = outer + rec_index * stride + inner;
      const double p = dist.Prob(cell);
      if (p == 0.0) continue;
      const std::vector<double> coeffs = u.RestrictToVariable(player, grid.Point(cell));
      for (std::size_t k = 0; k < coeffs.size(); ++k) gain[k] += p * coeffs[k];
      baseline += p * EvalUnivariate(coeffs, rec);
    }
  }
  gain[0] -= baseline;
  return gain;
}

MultiPoly DeviationGainPoly(const PolynomialGame& game, int player,
                            const SupportedDistribution& dist,
                            double recommendation) {
  auto index = dist.grid().Find(player, recommendation);
  if (!index) {
    throw InputError("recommendation " + std::to_string(recommendation) +
                     " is not a grid point of player " + std::to_string(player));
  }
  return MultiPoly::Univariate(DeviationGainCoefficients(game, player, dist, *index));
}

FiniteGame SampleGame(const PolynomialGame& game, const ProductGrid& grid) {
  if (grid.num_players() != game.num_players()) {
    throw InputError("grid and game disagree on the number of players");
  }
  std::vector<std::vector<double>> payoffs(game.num_players(),
                                           std::vector<double>(grid.num_cells()));
  for (std::size_t cell = 0; cell < grid.num_cells(); ++cell) {
    const std::vector<double> point = grid.Point(cell);
    for (int i = 0; i < game.num_players(); ++i) {
      payoffs[i][cell] = game.utility(i).Evaluate(point);
    }
  }
  return FiniteGame(grid, std::move(payoffs));
}

std::vector<double> ExpectedUtilities(const PolynomialGame& game,
                                      const SupportedDistribution& dist) {
  std::vector<double> value(game.num_players(), 0.0);
  for (std::size_t cell = 0; cell < dist.grid().num_cells(); ++cell) {
    if (dist.Prob(cell) == 0.0) continue;
    const std::vector<double> point = dist.grid().Point(cell);
    for (int i = 0; i < game.num_players(); ++i) {
      value[i] += dist.Prob(cell) * game.utility(i).Evaluate(point);
    }
  }
  return value;
}

std::vector<double> ExpectedUtilities(const FiniteGame& game,
                                      const SupportedDistribution& dist) {
  std::vector<double> value(game.num_players(), 0.0);
  for (std::size_t cell = 0; cell < dist.grid().num_cells(); ++cell) {
    for (int i = 0; i < game.num_players(); ++i) {
      value[i] += dist.Prob(cell) * game.Payoff(i, cell);
    }
  }
  return value;
}

}  // namespace polyce
