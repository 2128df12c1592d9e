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
#include "identikit/trust_region.hpp"
#include "identikit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace identikit
{

std::string to_string(Termination t)
{
    switch (t) {
    case Termination::GradientSmall:
        return "gradient_small";
    case Termination::StepSmall:
        return "step_small";
    case Termination::ReductionSmall:
        return "reduction_small";
    case Termination::ZeroResidual:
        return "zero_residual";
    case Termination::MaxIterations:
        return "max_iterations";
    case Termination::Stalled:
        return "stalled";
    }
    return "unknown";
}

namespace
{

constexpr double eps = std::numeric_limits<double>::epsilon();

bool evaluate(const ResidualFunction& fn, const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd* jac)
{
    try {
        if (!fn(x, f, jac)) {
            return false;
        }
    }
    catch (const Error&) {
        return false;
    }
    return f.allFinite() && (jac == nullptr || jac->allFinite());
}

double gradient_cosine(const Eigen::MatrixXd& J, const Eigen::VectorXd& f)
{
    const double fn = f.norm();
    if (fn == 0.0) {
        return 0.0;
    }
    double worst = 0.0;
    for (Eigen::Index i = 0; i < J.cols(); ++i) {
        const double cn = J.col(i).norm();
        if (cn > 0) {
            worst = std::max(worst, std::abs(J.col(i).dot(f)) / (cn * fn));
        }
    }
    return worst;
}

// Minimizer of |Js u + f|^2 + mu |u|^2 with |u| close to radius, from the SVD
// of the scaled Jacobian.
Eigen::VectorXd subproblem_step(const Eigen::JacobiSVD<Eigen::MatrixXd>& dec, const Eigen::VectorXd& b,
                                double radius, std::size_t rows)
{
    const Eigen::VectorXd& s = dec.singularValues();
    const Eigen::MatrixXd& V = dec.matrixV();
    const double cutoff      = s.size() ? s[0] * static_cast<double>(std::max<std::size_t>(rows, s.size())) * eps : 0;

    auto coeffs = [&](double mu) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            if (s[i] > cutoff) {
                c[i] = -s[i] * b[i] / (s[i] * s[i] + mu);
            }
        }
        return c;
    };

    Eigen::VectorXd c = coeffs(0.0);
    if (c.norm() <= radius) {
        return V * c;
    }
    // |u(mu)| decreases monotonically in mu; |u(hi)| <= |Js^T f| / hi = radius.
    const double g = (s.array() * b.array()).matrix().norm();
    double hi      = g / radius;
    double lo      = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = lo > 0 ? std::sqrt(lo * hi) : hi * 1e-12;
        c                = coeffs(mid);
        const double len = c.norm();
        if (std::abs(len - radius) <= 1e-3 * radius) {
            return V * c;
        }
        if (len > radius) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (lo > 0 && hi / lo < 1.0 + 1e-12) {
            break;
        }
    }
    return V * coeffs(hi);
}

} // namespace

TrustRegionResult solve_bounded_least_squares(const ResidualFunction& residual, const Eigen::VectorXd& x0,
                                              const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                              const TrustRegionOptions& opt)
{
    const Eigen::Index n = x0.size();
    if (lower.size() != n || upper.size() != n) {
        throw Error(ErrorKind::InvalidArgument, "bound vectors must match the parameter count");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(lower[i] <= x0[i] && x0[i] <= upper[i])) {
            throw Error(ErrorKind::InvalidArgument, "initial guess lies outside the bounds");
        }
    }

    TrustRegionResult res;
    res.x = x0;
    if (!evaluate(residual, res.x, res.f, &res.jacobian)) {
        throw Error(ErrorKind::InvalidArgument, "residual cannot be evaluated at the initial guess");
    }
    res.evaluations = 1;
    res.cost        = res.f.squaredNorm();
    const auto m    = static_cast<std::size_t>(res.f.size());

    Eigen::VectorXd scale = res.jacobian.colwise().norm().transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (scale[i] == 0.0) {
            scale[i] = 1.0;
        }
    }
    double radius = opt.initial_radius_factor * scale.cwiseProduct(res.x).norm();
    if (radius == 0.0) {
        radius = opt.initial_radius_factor;
    }

    Eigen::VectorXd f_trial, f_lin;
    for (;;) {
        res.gradient_cosine = gradient_cosine(res.jacobian, res.f);
        if (res.cost == 0.0) {
            res.converged   = true;
            res.termination = Termination::ZeroResidual;
            return res;
        }
        if (res.gradient_cosine <= opt.gradient_tol) {
            res.converged   = true;
            res.termination = Termination::GradientSmall;
            return res;
        }
        if (res.iterations >= opt.max_iterations) {
            res.termination = Termination::MaxIterations;
            return res;
        }

        const Eigen::VectorXd norms = res.jacobian.colwise().norm().transpose();
        scale                       = scale.cwiseMax(norms);
        const Eigen::MatrixXd Js    = res.jacobian * scale.cwiseInverse().asDiagonal();
        Eigen::JacobiSVD<Eigen::MatrixXd> dec(Js, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd b = dec.matrixU().transpose() * res.f;

        bool accepted = false;
        for (int inner = 0; !accepted; ++inner) {
            if (inner > 100) {
                res.termination = Termination::Stalled;
                return res;
            }
            const Eigen::VectorXd u = subproblem_step(dec, b, radius, m);
            Eigen::VectorXd trial   = res.x + u.cwiseQuotient(scale);
            for (Eigen::Index i = 0; i < n; ++i) {
                if (trial[i] <= lower[i]) {
                    trial[i] = res.x[i] + 0.995 * (lower[i] - res.x[i]);
                } else if (trial[i] >= upper[i]) {
                    trial[i] = res.x[i] + 0.995 * (upper[i] - res.x[i]);
                }
            }
            const Eigen::VectorXd step = trial - res.x;
            const double step_norm     = scale.cwiseProduct(step).norm();
            f_lin                      = res.f + res.jacobian * step;
            const double predicted     = res.cost - f_lin.squaredNorm();

            const bool ok = evaluate(residual, trial, f_trial, nullptr);
            ++res.evaluations;
            const double trial_cost = ok ? f_trial.squaredNorm() : std::numeric_limits<double>::infinity();
            const double actual     = res.cost - trial_cost;
            const double ratio      = predicted > 0 && ok ? actual / predicted : -1.0;

            if (ratio < 0.25) {
                radius = 0.25 * (step_norm > 0 ? std::min(radius, step_norm) : radius);
            } else if (ratio > 0.75) {
                radius = std::max(radius, 2.0 * step_norm);
            }

            if (ratio > 1e-4) {
                Eigen::VectorXd f_new;
                Eigen::MatrixXd j_new;
                if (evaluate(residual, trial, f_new, &j_new)) {
                    const double old_cost = res.cost;
                    res.x                 = trial;
                    res.f                 = std::move(f_new);
                    res.jacobian          = std::move(j_new);
                    res.cost              = res.f.squaredNorm();
                    ++res.iterations;
                    ++res.evaluations;
                    accepted = true;
                    if (actual <= opt.function_tol * old_cost && predicted <= opt.function_tol * old_cost) {
                        res.gradient_cosine = gradient_cosine(res.jacobian, res.f);
                        res.converged       = true;
                        res.termination     = Termination::ReductionSmall;
                        return res;
                    }
                } else {
                    radius *= 0.25;
                }
            } else if (ok && predicted >= 0 && predicted <= opt.function_tol * res.cost &&
                       std::abs(actual) <= opt.function_tol * res.cost) {
                res.converged   = true;
                res.termination = Termination::ReductionSmall;
                return res;
            }

            if (radius <= opt.step_tol * scale.cwiseProduct(res.x).norm()) {
                res.gradient_cosine = gradient_cosine(res.jacobian, res.f);
                res.converged       = true;
                res.termination     = Termination::StepSmall;
                return res;
            }
        }
    }
}

} // namespace identikit
