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
#ifndef IDENTIKIT_TRUST_REGION_HPP
#define IDENTIKIT_TRUST_REGION_HPP

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace identikit
{

/// Residual f(x) and, when requested, its Jacobian df/dx. Returning false
/// (or throwing identikit::Error) marks x as not evaluable; the solver
/// then shrinks the trust region.
using ResidualFunction = std::function<bool(const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd* jac)>;

struct TrustRegionOptions {
    int max_iterations  = 200;
    double gradient_tol = 1e-8;  // max_i |J_i^T f| / (|J_i| |f|)
    double step_tol     = 1e-10; // scaled step relative to scaled x
    double function_tol = 1e-12; // relative reduction of |f|^2
    double initial_radius_factor = 100.0;
};

enum class Termination { GradientSmall, StepSmall, ReductionSmall, ZeroResidual, MaxIterations, Stalled };

std::string to_string(Termination t);

struct TrustRegionResult {
    Eigen::VectorXd x;
    Eigen::VectorXd f;
    Eigen::MatrixXd jacobian;
    double cost = 0.0;            // |f|^2
    double gradient_cosine = 0.0; // at x
    int iterations  = 0;          // Jacobian evaluations after the first
    int evaluations = 0;
    bool converged  = false;
    Termination termination = Termination::MaxIterations;
};

/// Levenberg-Marquardt trust-region iteration with Jacobian-column scaling
/// for min |f(x)|^2 subject to lower < x < upper (open box). Trial points
/// that leave the box are pulled back to 99.5% of the way to the violated
/// bound. Each subproblem is solved through an SVD of the scaled Jacobian.
TrustRegionResult solve_bounded_least_squares(const ResidualFunction& residual, const Eigen::VectorXd& x0,
                                              const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                              const TrustRegionOptions& options = {});

} // namespace identikit

#endif // IDENTIKIT_TRUST_REGION_HPP
