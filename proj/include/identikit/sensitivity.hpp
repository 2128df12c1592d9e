/*
 * Copyright (C) 2026 The identikit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef IDENTIKIT_SENSITIVITY_HPP
#define IDENTIKIT_SENSITIVITY_HPP

#include "identikit/model.hpp"
#include "identikit/ode.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace identikit
{

/// chi(j, i) = d z(t_j) / d theta_i for the active parameters, unscaled.
struct SensitivityMatrix {
    Eigen::MatrixXd values;         // n x p
    std::vector<double> times;      // t_1..t_n
    std::vector<std::string> names; // column labels, subset order
    Eigen::VectorXd theta;          // full parameter vector at which chi was evaluated

    Eigen::Index rows() const
    {
        return values.rows();
    }
    Eigen::Index cols() const
    {
        return values.cols();
    }
};

struct OutputWithSensitivities {
    Eigen::VectorXd output; // z(t_j; theta)
    SensitivityMatrix chi;
};

/// Integrates state, accumulated output and the forward sensitivity
/// equations for every active parameter in one pass. Step-size control
/// sees only the state and accumulated output, so a column does not depend
/// on which other parameters are active.
OutputWithSensitivities output_and_sensitivities(const ModelSystem& model, const Eigen::VectorXd& theta,
                                                 const std::vector<std::string>& active, const TimeGrid& grid,
                                                 const IntegratorConfig& config);

SensitivityMatrix output_sensitivities(const ModelSystem& model, const Eigen::VectorXd& theta,
                                       const std::vector<std::string>& active, const TimeGrid& grid,
                                       const IntegratorConfig& config);

/// Central differences of output_series; column i uses the step
/// rel_step * max(|theta_i|, 1e-8).
SensitivityMatrix finite_difference_sensitivities(const ModelSystem& model, const Eigen::VectorXd& theta,
                                                  const std::vector<std::string>& active, const TimeGrid& grid,
                                                  const IntegratorConfig& config, double rel_step);

/// Largest over columns of ||a_i - b_i|| / ||b_i|| (zero columns compare absolutely).
double max_relative_column_discrepancy(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

} // namespace identikit

#endif // IDENTIKIT_SENSITIVITY_HPP
