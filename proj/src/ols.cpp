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
#include "identikit/ols.hpp"
#include "identikit/error.hpp"
#include "identikit/linalg.hpp"
#include "identikit/sensitivity.hpp"

#include <cmath>

namespace identikit
{

void DataSet::validate() const
{
    if (static_cast<std::size_t>(values.size()) != grid.size()) {
        throw Error(ErrorKind::DataParseError, "data set has " + std::to_string(values.size()) + " values for " +
                                                   std::to_string(grid.size()) + " times");
    }
    if (!values.allFinite()) {
        throw Error(ErrorKind::DataParseError, "data set contains non-finite values");
    }
}

FitConfig FitConfig::defaults(const ModelSystem& model, const SubsetSpec& subset, const Eigen::VectorXd& start)
{
    FitConfig cfg;
    const auto idx    = subset.active_indices(model);
    const auto p      = static_cast<Eigen::Index>(idx.size());
    cfg.initial_guess = subset.active_values(model, start);
    cfg.lower.resize(p);
    cfg.upper.resize(p);
    for (Eigen::Index k = 0; k < p; ++k) {
        const auto& info = model.parameters()[idx[static_cast<std::size_t>(k)]];
        cfg.lower[k]     = info.lower;
        cfg.upper[k]     = info.upper;
    }
    return cfg;
}

double objective(const Eigen::VectorXd& active_values, const SubsetSpec& subset, const DataSet& data,
                 const ModelSystem& model, const IntegratorConfig& config)
{
    data.validate();
    const Eigen::VectorXd z = output_series(model, subset.assemble(model, active_values), data.grid, config);
    return (data.values - z).squaredNorm();
}

double sigma_hat(const Eigen::VectorXd& residuals, std::size_t p)
{
    const auto n = static_cast<std::size_t>(residuals.size());
    if (n <= p) {
        throw Error(ErrorKind::DegenerateDof,
                    "need more observations than parameters (n=" + std::to_string(n) + ", p=" + std::to_string(p) + ")");
    }
    return residuals.squaredNorm() / static_cast<double>(n - p);
}

FitResult fit(const DataSet& data, const ModelSystem& model, const SubsetSpec& subset, const FitConfig& fit_config,
              const IntegratorConfig& integrator_config)
{
    data.validate();
    subset.validate(model);
    const std::size_t n = data.grid.size();
    const std::size_t p = subset.active.size();
    if (n <= p) {
        throw Error(ErrorKind::DegenerateDof, "need more observations than active parameters");
    }
    if (static_cast<std::size_t>(fit_config.initial_guess.size()) != p) {
        throw Error(ErrorKind::InvalidArgument, "initial guess does not match the active subset");
    }

    ResidualFunction residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd* jac) {
        const Eigen::VectorXd full = subset.assemble(model, x);
        model.validate(full);
        if (jac == nullptr) {
            f = output_series(model, full, data.grid, integrator_config) - data.values;
            return true;
        }
        auto out = output_and_sensitivities(model, full, subset.active, data.grid, integrator_config);
        f        = out.output - data.values;
        *jac     = std::move(out.chi.values);
        return true;
    };

    FitResult res;
    res.names = subset.active;
    res.times = data.grid.points();

    {
        const auto start = output_sensitivities(model, subset.assemble(model, fit_config.initial_guess),
                                                subset.active, data.grid, integrator_config);
        const auto s     = svd(start.values).singular_values;
        if (numerical_rank(s, n, p) < p) {
            res.warnings.push_back("sensitivity matrix is rank deficient at the initial guess");
        }
    }

    TrustRegionOptions opt;
    opt.max_iterations = fit_config.max_iterations;
    opt.gradient_tol   = fit_config.gradient_tol;
    opt.step_tol       = fit_config.step_tol;
    opt.function_tol   = fit_config.function_tol;
    const auto tr = solve_bounded_least_squares(residual, fit_config.initial_guess, fit_config.lower,
                                                fit_config.upper, opt);

    res.estimate        = tr.x;
    res.full_estimate   = subset.assemble(model, tr.x);
    res.residuals       = -tr.f;
    res.fitted          = data.values + tr.f;
    res.objective       = res.residuals.squaredNorm();
    res.sigma_hat_sq    = sigma_hat(res.residuals, p);
    res.converged       = tr.converged;
    res.iterations      = tr.iterations;
    res.evaluations     = tr.evaluations;
    res.gradient_cosine = tr.gradient_cosine;
    res.termination     = to_string(tr.termination);

    try {
        const SvdResult dec = svd(tr.jacobian);
        res.kappa           = condition_number(dec.singular_values, n);
        res.covariance      = covariance(res.sigma_hat_sq, dec, n);
        const auto score    = uncertainty_score(res.estimate, *res.covariance);
        res.se              = standard_errors(*res.covariance);
        res.cv              = score.cv;
    }
    catch (const Error& e) {
        if (e.kind() != ErrorKind::RankDeficient && e.kind() != ErrorKind::ZeroParameterValue) {
            throw;
        }
        if (e.kind() == ErrorKind::RankDeficient) {
            res.rank_deficient_at_solution = true;
            res.kappa.reset();
            res.covariance.reset();
        } else {
            res.se = standard_errors(*res.covariance);
        }
        res.warnings.emplace_back(e.what());
    }
    return res;
}

LinearizedEstimate linearized_estimator(const Eigen::MatrixXd& chi, const Eigen::VectorXd& errors,
                                        const Eigen::VectorXd& theta0)
{
    if (errors.size() != chi.rows() || theta0.size() != chi.cols()) {
        throw Error(ErrorKind::InvalidArgument, "linearized estimator dimensions do not match");
    }
    const SvdResult dec = svd(chi);
    const auto n        = static_cast<std::size_t>(chi.rows());
    const auto p        = static_cast<std::size_t>(chi.cols());
    if (numerical_rank(dec.singular_values, n, p) < p) {
        throw Error(ErrorKind::RankDeficient, "linearized estimator needs a full-rank sensitivity matrix");
    }
    LinearizedEstimate out;
    const Eigen::VectorXd proj = dec.U1.transpose() * errors;
    out.estimate               = theta0 + dec.V * proj.cwiseQuotient(dec.singular_values);
    out.normal_equation        = theta0 + fisher(chi).ldlt().solve(chi.transpose() * errors);
    return out;
}

ResidualSummary residual_diagnostics(const Eigen::VectorXd& residuals, const std::vector<double>& times)
{
    const auto n = residuals.size();
    if (n < 10 || static_cast<std::size_t>(n) != times.size()) {
        throw Error(ErrorKind::InvalidArgument, "residual diagnostics need n >= 10 residuals with matching times");
    }
    ResidualSummary out;
    out.mean = residuals.mean();
    const Eigen::VectorXd c = residuals.array() - out.mean;
    const double denom      = c.squaredNorm();
    out.lag1_autocorrelation = denom > 0 ? c.head(n - 1).dot(c.tail(n - 1)) / denom : 0.0;

    double pos = 0, neg = 0;
    int last   = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const int sign = residuals[j] > 0 ? 1 : (residuals[j] < 0 ? -1 : 0);
        if (sign == 0) {
            continue;
        }
        (sign > 0 ? pos : neg) += 1;
        if (sign != last) {
            ++out.runs;
            last = sign;
        }
    }
    const double total = pos + neg;
    if (pos > 0 && neg > 0) {
        out.expected_runs = 2.0 * pos * neg / total + 1.0;
        const double var  = (out.expected_runs - 1.0) * (out.expected_runs - 2.0) / (total - 1.0);
        out.runs_z        = var > 0 ? (static_cast<double>(out.runs) - out.expected_runs) / std::sqrt(var) : 0.0;
    } else {
        out.expected_runs = 1.0;
    }
    out.times = times;
    out.residuals.assign(residuals.begin(), residuals.end());
    return out;
}

} // namespace identikit
