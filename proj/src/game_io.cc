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

#include "polyce/game_io.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "polyce/errors.h"

namespace polyce {

using nlohmann::json;

namespace {

const json& Member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(where + ": missing \"" + key + "\"");
  }
  return obj.at(key);
}

}  // namespace

PolynomialGame ParseGame(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("game document is not valid JSON: ") + e.what());
  }
  const json& players = Member(doc, "players", "game");
  if (!players.is_array() || players.empty()) {
    throw InputError("game: \"players\" must be a nonempty array of names");
  }
  std::vector<std::string> names;
  for (const json& p : players) {
    if (!p.is_string()) throw InputError("game: player names must be strings");
    names.push_back(p.get<std::string>());
  }
  const int n = static_cast<int>(names.size());
  const json& utilities = Member(doc, "utilities", "game");
  if (!utilities.is_array() || static_cast<int>(utilities.size()) != n) {
    throw InputError("game: expected " + std::to_string(n) + " utilities");
  }
  std::vector<MultiPoly> polys;
  for (int i = 0; i < n; ++i) {
    const std::string where = "utility " + std::to_string(i) + " (" + names[i] + ")";
    const json& terms = Member(utilities[i], "terms", where);
    if (!terms.is_array()) throw InputError(where + ": \"terms\" must be an array");
    MultiPoly poly(n);
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const std::string term_where = where + ", term " + std::to_string(k);
      const json& exp = Member(terms[k], "exp", term_where);
      const json& coef = Member(terms[k], "coef", term_where);
      if (!exp.is_array()) throw InputError(term_where + ": \"exp\" must be an array");
      if (static_cast<int>(exp.size()) != n) {
        throw InputError(term_where + ": exponent tuple has " +
                         std::to_string(exp.size()) + " entries, expected " +
                         std::to_string(n));
      }
      Exponent e;
      for (const json& v : exp) {
        if (!v.is_number_integer() || v.get<long long>() < 0) {
          throw InputError(term_where + ": exponents must be nonnegative integers");
        }
        e.push_back(v.get<int>());
      }
      if (!coef.is_number() || !std::isfinite(coef.get<double>())) {
        throw InputError(term_where + ": coefficient must be a finite number");
      }
      poly.AddTerm(e, coef.get<double>());
    }
    polys.push_back(std::move(poly));
  }
  return PolynomialGame(std::move(names), std::move(polys));
}

std::string SerializeGame(const PolynomialGame& game) {
  json doc;
  doc["players"] = game.player_names();
  json utilities = json::array();
  for (const MultiPoly& u : game.utilities()) {
    json terms = json::array();
    for (const auto& [exponent, coeff] : u.terms()) {
      terms.push_back({{"exp", exponent}, {"coef", coeff}});
    }
    utilities.push_back({{"terms", terms}});
  }
  doc["utilities"] = utilities;
  return doc.dump(2) + "\n";
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

PolynomialGame LoadGameFile(const std::string& path) {
  try {
    return ParseGame(ReadTextFile(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

json DistributionToJson(const SupportedDistribution& dist) {
  json support = json::array();
  for (const auto& atom : dist.Support()) {
    support.push_back({{"point", atom.point}, {"prob", atom.prob}});
  }
  return {{"support", support}};
}

SupportedDistribution DistributionFromJson(const json& doc) {
  const json& support = Member(doc, "support", "distribution");
  if (!support.is_array() || support.empty()) {
    throw InputError("distribution: \"support\" must be a nonempty array");
  }
  std::vector<std::vector<double>> points;
  std::vector<double> probs;
  for (const json& atom : support) {
    points.push_back(Member(atom, "point", "distribution atom").get<std::vector<double>>());
    probs.push_back(Member(atom, "prob", "distribution atom").get<double>());
  }
  const std::size_t n = points.front().size();
  std::vector<std::vector<double>> grids(n);
  for (const auto& p : points) {
    if (p.size() != n) throw InputError("distribution: inconsistent point dimensions");
    for (std::size_t i = 0; i < n; ++i) grids[i].push_back(p[i]);
  }
  for (auto& g : grids) g = NormalizeGrid(std::move(g));
  ProductGrid grid(grids);
  std::vector<double> dense(grid.num_cells(), 0.0);
  for (std::size_t a = 0; a < points.size(); ++a) {
    std::vector<std::size_t> index(n);
    for (std::size_t i = 0; i < n; ++i) index[i] = *grid.Find(static_cast<int>(i), points[a][i]);
    dense[grid.Flatten(index)] += probs[a];
  }
  return SupportedDistribution::FromApproximate(std::move(grid), std::move(dense), 1e-9);
}

}  // namespace polyce
