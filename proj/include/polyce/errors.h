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

#ifndef POLYCE_ERRORS_H_
#define POLYCE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace polyce {

// Malformed input: bad game documents, out-of-range parameters, dimension
// mismatches. The CLI maps these to exit code 1.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A conic solve that did not reach an Optimal status where the caller needs
// one (e.g. an infeasible relaxation that is provably nonempty). Exit code 2.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polyce

#endif  // POLYCE_ERRORS_H_
