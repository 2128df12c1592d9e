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
#include "identikit/linalg.hpp"
#include "identikit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace identikit
{

SvdResult svd(const Eigen::MatrixXd& matrix)
{
    if (matrix.rows() < matrix.cols()) {
        throw Error(ErrorKind::InvalidArgument, "svd expects at least as many rows as columns");
    }
    if (!matrix.allFinite()) {
        throw Error(ErrorKind::ConvergenceFailure, "svd input contains non-finite entries");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> solver(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "Jacobi SVD did not converge");
    }
    return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

double rank_tolerance(const Eigen::VectorXd& s, std::size_t n, std::size_t p)
{
    if (s.size() == 0) {
        return 0.0;
    }
    return s[0] * static_cast<double>(std::max(n, p)) * std::numeric_limits<double>::epsilon();
}

std::size_t numerical_rank(const Eigen::VectorXd& s, std::size_t n, std::size_t p, std::optional<double> tolerance)
{
    if (s.size() == 0 || s[0] == 0.0) {
        return 0;
    }
    const double tol = tolerance.value_or(rank_tolerance(s, n, p));
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [tol](double v) { return v > tol; }));
}

double condition_number(const Eigen::VectorXd& s, std::size_t n, std::optional<double> tolerance)
{
    const auto p = static_cast<std::size_t>(s.size());
    if (p == 0 || numerical_rank(s, n, p, tolerance) < p) {
        throw Error(ErrorKind::RankDeficient, "condition number undefined for a rank-deficient matrix");
    }
    return s[0] / s[s.size() - 1];
}

Eigen::MatrixXd fisher(const Eigen::MatrixXd& chi)
{
    Eigen::MatrixXd f = chi.transpose() * chi;
    // Symmetrize against rounding in the product.
    return 0.5 * (f + f.transpose());
}

Eigen::MatrixXd covariance(double sigma_sq, const SvdResult& dec, std::size_t n, std::optional<double> tolerance)
{
    const auto& s = dec.singular_values;
    const auto p  = static_cast<std::size_t>(s.size());
    if (numerical_rank(s, n, p, tolerance) < p) {
        throw Error(ErrorKind::RankDeficient,
                    "sensitivity matrix has numerical rank below " + std::to_string(p));
    }
    const Eigen::VectorXd w = s.array().square().inverse().matrix() * sigma_sq;
    Eigen::MatrixXd cov     = dec.V * w.asDiagonal() * dec.V.transpose();
    return 0.5 * (cov + cov.transpose());
}

Eigen::MatrixXd covariance(double sigma_sq, const Eigen::MatrixXd& chi, std::optional<double> tolerance)
{
    return covariance(sigma_sq, svd(chi), static_cast<std::size_t>(chi.rows()), tolerance);
}

Eigen::VectorXd standard_errors(const Eigen::MatrixXd& sigma)
{
    Eigen::VectorXd se(sigma.rows());
    for (Eigen::Index k = 0; k < sigma.rows(); ++k) {
        const double v = sigma(k, k);
        if (!(v >= 0.0)) {
            throw Error(ErrorKind::NegativeDiagonal,
                        "covariance diagonal entry " + std::to_string(k) + " is " + std::to_string(v));
        }
        se[k] = std::sqrt(v);
    }
    return se;
}

UncertaintyScore uncertainty_score(const Eigen::VectorXd& theta, const Eigen::MatrixXd& sigma)
{
    if (theta.size() != sigma.rows() || sigma.rows() != sigma.cols()) {
        throw Error(ErrorKind::InvalidArgument, "parameter vector and covariance dimensions differ");
    }
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
        if (theta[k] == 0.0) {
            throw Error(ErrorKind::ZeroParameterValue,
                        "coefficient of variation undefined for zero parameter at position " + std::to_string(k));
        }
    }
    UncertaintyScore out;
    out.cv    = standard_errors(sigma).cwiseQuotient(theta);
    out.score = out.cv.norm();
    return out;
}

} // namespace identikit
