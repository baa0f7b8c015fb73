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

#ifndef POLYCE_GAME_H_
#define POLYCE_GAME_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyce/multipoly.h"

namespace polyce {

// Points closer than this are the same strategy.
inline constexpr double kGridMergeTol = 1e-9;

// n-player game on [-1,1]^n with one polynomial utility per player. Variable
// j of every utility is player j's strategy.
class PolynomialGame {
 public:
  PolynomialGame(std::vector<std::string> player_names,
                 std::vector<MultiPoly> utilities);

  int num_players() const { return static_cast<int>(utilities_.size()); }
  const std::vector<std::string>& player_names() const { return player_names_; }
  const MultiPoly& utility(int player) const { return utilities_.at(player); }
  const std::vector<MultiPoly>& utilities() const { return utilities_; }

 private:
  std::vector<std::string> player_names_;
  std::vector<MultiPoly> utilities_;
};

// Product of per-player strategy grids with row-major cell numbering (the
// last player's index varies fastest).
class ProductGrid {
 public:
  ProductGrid() = default;
  // Each grid must be nonempty, strictly increasing (gaps > kGridMergeTol)
  // and inside [-1,1].
  explicit ProductGrid(std::vector<std::vector<double>> grids);

  int num_players() const { return static_cast<int>(grids_.size()); }
  const std::vector<double>& points(int player) const { return grids_.at(player); }
  const std::vector<std::vector<double>>& grids() const { return grids_; }
  std::size_t size(int player) const { return grids_.at(player).size(); }
  std::size_t num_cells() const { return num_cells_; }
  std::size_t stride(int player) const { return strides_.at(player); }

  // Index of `player`'s strategy in `cell`.
  std::size_t Coordinate(std::size_t cell, int player) const {
    return (cell / strides_[player]) % grids_[player].size();
  }
  std::vector<std::size_t> Unflatten(std::size_t cell) const;
  std::size_t Flatten(std::span<const std::size_t> index) const;
  // Strategy profile of `cell` as real coordinates.
  std::vector<double> Point(std::size_t cell) const;
  // Grid index of `value` for `player`, if present within kGridMergeTol.
  std::optional<std::size_t> Find(int player, double value) const;

 private:
  std::vector<std::vector<double>> grids_;
  std::vector<std::size_t> strides_;
  std::size_t num_cells_ = 0;
};

// Sorts and merges points closer than kGridMergeTol. Used on parse paths so
// user-supplied grids cannot contain numerically duplicate strategies.
std::vector<double> NormalizeGrid(std::vector<double> points);

// Finite game on a product grid: payoffs(i)[cell] is player i's utility.
class FiniteGame {
 public:
  FiniteGame(ProductGrid grid, std::vector<std::vector<double>> payoffs);

  const ProductGrid& grid() const { return grid_; }
  int num_players() const { return grid_.num_players(); }
  double Payoff(int player, std::size_t cell) const { return payoffs_[player][cell]; }
  const std::vector<double>& payoffs(int player) const { return payoffs_.at(player); }

 private:
  ProductGrid grid_;
  std::vector<std::vector<double>> payoffs_;
};

// Probability distribution with finite support on a product grid.
class SupportedDistribution {
 public:
  // Entries must be >= 0 and sum to 1 within 1e-9.
  SupportedDistribution(ProductGrid grid, std::vector<double> probs);

  // Accepts solver output: clamps entries in [-clean_tol, 0) to zero and
  // renormalizes. Entries below -clean_tol are an error.
  static SupportedDistribution FromApproximate(ProductGrid grid,
                                               std::vector<double> probs,
                                               double clean_tol = 1e-6);

  // Point mass at `point` (singleton grids).
  static SupportedDistribution PointMass(std::span<const double> point);

  const ProductGrid& grid() const { return grid_; }
  int num_players() const { return grid_.num_players(); }
  const std::vector<double>& probs() const { return probs_; }
  double Prob(std::size_t cell) const { return probs_[cell]; }
  // Marginal probability of each of `player`'s grid points.
  std::vector<double> Marginal(int player) const;

  struct Atom {
    std::vector<double> point;
    double prob;
  };
  // Cells with probability above `threshold`, in cell order.
  std::vector<Atom> Support(double threshold = 0.0) const;

 private:
  ProductGrid grid_;
  std::vector<double> probs_;
};

// u_player(point); point must have one coordinate per player, each in [-1,1].
double EvalUtility(const PolynomialGame& game, int player,
                   std::span<const double> point);

// Ascending coefficients in t of
//   g(t) = sum_{s_-i} pi(s_i, s_-i) [u_i(t, s_-i) - u_i(s_i, s_-i)]
// for the recommendation with grid index `rec_index`.
std::vector<double> DeviationGainCoefficients(const PolynomialGame& game,
                                              int player,
                                              const SupportedDistribution& dist,
                                              std::size_t rec_index);

// Same polynomial as a univariate MultiPoly; `recommendation` must be one of
// the player's grid points.
MultiPoly DeviationGainPoly(const PolynomialGame& game, int player,
                            const SupportedDistribution& dist,
                            double recommendation);

// Restriction of the utilities to a product grid.
FiniteGame SampleGame(const PolynomialGame& game, const ProductGrid& grid);

// sum_s pi(s) u_i(s) for every player.
std::vector<double> ExpectedUtilities(const PolynomialGame& game,
                                      const SupportedDistribution& dist);
std::vector<double> ExpectedUtilities(const FiniteGame& game,
                                      const SupportedDistribution& dist);

}  // namespace polyce

#endif  // POLYCE_GAME_H_
