// Copyright 2026 The ajac Authors
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

#ifndef AJAC_PROPERTIES_HPP_
#define AJAC_PROPERTIES_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ajac/model.hpp"

namespace ajac {

struct PropertyResult {
  std::string name;
  bool passed = false;
  double max_residual = 0.0;
  double tolerance = 0.0;
  int samples = 0;
};

/// Regressors under test. Defaults are the model's; tests swap in perturbed
/// versions to check that the suite actually catches errors.
struct PropertyHooks {
  std::function<KinRegressor<double>(const Eigen::Vector2d&, const Eigen::Vector2d&)>
      kin_regressor = [](const Eigen::Vector2d& q, const Eigen::Vector2d& xi) {
        return ajac::kin_regressor(q, xi);
      };
  std::function<DynRegressor<double>(const Eigen::Vector2d&, const Eigen::Vector2d&,
                                     const Eigen::Vector2d&, const Eigen::Vector2d&)>
      dyn_regressor = [](const Eigen::Vector2d& q, const Eigen::Vector2d& dq,
                         const Eigen::Vector2d& zeta, const Eigen::Vector2d& dzeta) {
        return ajac::dyn_regressor(q, dq, zeta, dzeta);
      };
};

struct PropertyOptions {
  int samples = 1000;
  std::uint64_t seed = 20260101;
  PropertyHooks hooks{};
};

std::vector<PropertyResult> run_property_suite(const PropertyOptions& options = {});

bool all_passed(const std::vector<PropertyResult>& results);

}  // namespace ajac

#endif  // AJAC_PROPERTIES_HPP_
