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
#ifndef IDENTIKIT_LINALG_HPP
#define IDENTIKIT_LINALG_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

namespace identikit
{

/// Thin SVD, chi = U1 diag(s) V^T with s sorted descending.
struct SvdResult {
    Eigen::MatrixXd U1;
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd V;
};

/// Throws Error{ConvergenceFailure} on non-finite input or solver failure.
SvdResult svd(const Eigen::MatrixXd& matrix);

/// s_1 * max(n, p) * machine epsilon.
double rank_tolerance(const Eigen::VectorXd& s, std::size_t n, std::size_t p);

/// Number of singular values strictly above the tolerance (default rank_tolerance).
std::size_t numerical_rank(const Eigen::VectorXd& s, std::size_t n, std::size_t p,
                           std::optional<double> tolerance = std::nullopt);

/// s_1 / s_p; throws Error{RankDeficient} when s_p is not above the rank tolerance.
double condition_number(const Eigen::VectorXd& s, std::size_t n, std::optional<double> tolerance = std::nullopt);

/// chi^T chi.
Eigen::MatrixXd fisher(const Eigen::MatrixXd& chi);

/// sigma_sq (chi^T chi)^{-1}, evaluated as V diag(sigma_sq / s^2) V^T.
Eigen::MatrixXd covariance(double sigma_sq, const Eigen::MatrixXd& chi, std::optional<double> tolerance = std::nullopt);
Eigen::MatrixXd covariance(double sigma_sq, const SvdResult& decomposition, std::size_t n,
                           std::optional<double> tolerance = std::nullopt);

/// sqrt(diag(sigma)); throws Error{NegativeDiagonal}.
Eigen::VectorXd standard_errors(const Eigen::MatrixXd& sigma);

struct UncertaintyScore {
    Eigen::VectorXd cv; // signed: sqrt(Sigma_ii) / theta_i
    double score;       // Euclidean norm of cv
};

/// Throws Error{ZeroParameterValue} if any theta_i is zero.
UncertaintyScore uncertainty_score(const Eigen::VectorXd& theta, const Eigen::MatrixXd& sigma);

} // namespace identikit

#endif // IDENTIKIT_LINALG_HPP
