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
#ifndef IDENTIKIT_OLS_HPP
#define IDENTIKIT_OLS_HPP

#include "identikit/model.hpp"
#include "identikit/ode.hpp"
#include "identikit/trust_region.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace identikit
{

/// Observations y_j at the grid points.
struct DataSet {
    TimeGrid grid;
    Eigen::VectorXd values;
    std::string provenance;

    /// Checks |values| = n and that every value is finite.
    void validate() const;
};

struct FitConfig {
    Eigen::VectorXd initial_guess; // active parameters, subset order
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    int max_iterations  = 200;
    double gradient_tol = 1e-8;
    double step_tol     = 1e-10;
    double function_tol = 1e-12;

    /// Starts at `start` (a full parameter vector) with the model's bounds.
    static FitConfig defaults(const ModelSystem& model, const SubsetSpec& subset, const Eigen::VectorXd& start);
};

struct FitResult {
    std::vector<std::string> names;
    Eigen::VectorXd estimate;
    Eigen::VectorXd full_estimate;
    double objective    = 0.0;
    double sigma_hat_sq = 0.0;
    std::optional<Eigen::MatrixXd> covariance; // absent when rank deficient at the solution
    Eigen::VectorXd se;
    Eigen::VectorXd cv; // se / estimate, signed
    std::optional<double> kappa;
    Eigen::VectorXd fitted;    // z(t_j; estimate)
    Eigen::VectorXd residuals; // y_j - z(t_j; estimate)
    std::vector<double> times;
    bool converged                  = false;
    bool rank_deficient_at_solution = false;
    int iterations                  = 0;
    int evaluations                 = 0;
    double gradient_cosine          = 0.0;
    std::string termination;
    std::vector<std::string> warnings;
};

/// Sum of squared deviations |y - z(theta)|^2.
double objective(const Eigen::VectorXd& active_values, const SubsetSpec& subset, const DataSet& data,
                 const ModelSystem& model, const IntegratorConfig& config);

/// Bounded trust-region OLS fit with the forward-sensitivity Jacobian.
/// Non-convergence is reported through FitResult::converged, not thrown.
FitResult fit(const DataSet& data, const ModelSystem& model, const SubsetSpec& subset, const FitConfig& fit_config,
              const IntegratorConfig& integrator_config);

/// |r|^2 / (n - p); throws Error{DegenerateDof} when n <= p.
double sigma_hat(const Eigen::VectorXd& residuals, std::size_t p);

struct LinearizedEstimate {
    Eigen::VectorXd estimate;        // theta0 + V diag(1/s) U1^T eps
    Eigen::VectorXd normal_equation; // theta0 + (chi^T chi)^{-1} chi^T eps
};

/// First-order OLS estimate around theta0; throws Error{RankDeficient}.
LinearizedEstimate linearized_estimator(const Eigen::MatrixXd& chi, const Eigen::VectorXd& errors,
                                        const Eigen::VectorXd& theta0);

struct ResidualSummary {
    double mean                 = 0.0;
    double lag1_autocorrelation = 0.0;
    std::size_t runs            = 0; // maximal runs of equal sign (zeros skipped)
    double expected_runs        = 0.0;
    double runs_z               = 0.0; // Wald-Wolfowitz normal score
    std::vector<double> times;
    std::vector<double> residuals;
};

ResidualSummary residual_diagnostics(const Eigen::VectorXd& residuals, const std::vector<double>& times);

} // namespace identikit

#endif // IDENTIKIT_OLS_HPP
