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
#include "identikit/sensitivity.hpp"
#include "identikit/error.hpp"

#include <algorithm>
#include <cmath>

namespace identikit
{

namespace
{

std::vector<std::size_t> resolve(const ModelSystem& model, const std::vector<std::string>& active)
{
    std::vector<std::size_t> idx;
    for (const auto& name : active) {
        const auto i = model.require_index(name);
        if (std::find(idx.begin(), idx.end(), i) != idx.end()) {
            throw Error(ErrorKind::InvalidArgument, "parameter '" + name + "' is listed twice");
        }
        idx.push_back(i);
    }
    return idx;
}

} // namespace

OutputWithSensitivities output_and_sensitivities(const ModelSystem& model, const Eigen::VectorXd& theta,
                                                 const std::vector<std::string>& active, const TimeGrid& grid,
                                                 const IntegratorConfig& config)
{
    model.validate(theta);
    const auto idx  = resolve(model, active);
    const auto d    = static_cast<Eigen::Index>(model.state_dim());
    const auto np   = static_cast<Eigen::Index>(model.parameter_count());
    const auto p    = static_cast<Eigen::Index>(idx.size());
    const auto blk  = d + 1; // state + accumulated output

    // Layout: [x, C, s_1, c_1, ..., s_p, c_p].
    OdeSystem sys;
    sys.dim = static_cast<std::size_t>(blk * (1 + p));

    Eigen::MatrixXd gx(d, d), gtheta(d, np);
    Eigen::RowVectorXd hx(d), htheta(np);
    sys.rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        auto x = y.head(d);
        model.vector_field(t, x, theta, dy.head(d));
        dy[d] = model.output_rate(t, x, theta);
        if (p == 0) {
            return;
        }
        model.state_jacobian(t, x, theta, gx);
        model.param_jacobian(t, x, theta, gtheta);
        model.output_rate_state_grad(t, x, theta, hx);
        model.output_rate_param_grad(t, x, theta, htheta);
        for (Eigen::Index k = 0; k < p; ++k) {
            const auto off = blk * (1 + k);
            const auto col = static_cast<Eigen::Index>(idx[static_cast<std::size_t>(k)]);
            auto s         = y.segment(off, d);
            dy.segment(off, d).noalias() = gx * s + gtheta.col(col);
            dy[off + d]                  = hx.dot(s) + htheta[col];
        }
    };

    Eigen::VectorXd y0 = Eigen::VectorXd::Zero(blk * (1 + p));
    y0.head(d)         = model.initial_state(theta);
    const Eigen::MatrixXd x0_theta = model.initial_state_jacobian(theta);
    for (Eigen::Index k = 0; k < p; ++k) {
        y0.segment(blk * (1 + k), d) = x0_theta.col(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(k)]));
    }

    IntegratorConfig cfg  = config;
    cfg.error_components = static_cast<std::size_t>(blk);
    const Trajectory traj = integrate(sys, y0, grid, cfg);

    const auto n = static_cast<Eigen::Index>(grid.size());
    OutputWithSensitivities out;
    out.output.resize(n);
    out.chi.values.resize(n, p);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& now  = traj.states[static_cast<std::size_t>(j + 1)];
        const auto& prev = traj.states[static_cast<std::size_t>(j)];
        out.output[j]    = now[d] - prev[d];
        for (Eigen::Index k = 0; k < p; ++k) {
            const auto c         = blk * (1 + k) + d;
            out.chi.values(j, k) = now[c] - prev[c];
        }
    }
    out.chi.times = grid.points();
    out.chi.names = active;
    out.chi.theta = theta;
    return out;
}

SensitivityMatrix output_sensitivities(const ModelSystem& model, const Eigen::VectorXd& theta,
                                       const std::vector<std::string>& active, const TimeGrid& grid,
                                       const IntegratorConfig& config)
{
    return output_and_sensitivities(model, theta, active, grid, config).chi;
}

SensitivityMatrix finite_difference_sensitivities(const ModelSystem& model, const Eigen::VectorXd& theta,
                                                  const std::vector<std::string>& active, const TimeGrid& grid,
                                                  const IntegratorConfig& config, double rel_step)
{
    if (!(rel_step > 0)) {
        throw Error(ErrorKind::InvalidArgument, "finite-difference step must be positive");
    }
    constexpr double floor = 1e-8;
    const auto idx         = resolve(model, active);

    SensitivityMatrix chi;
    chi.values.resize(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto i       = static_cast<Eigen::Index>(idx[k]);
        const double h     = rel_step * std::max(std::abs(theta[i]), floor);
        Eigen::VectorXd up = theta, down = theta;
        up[i] += h;
        down[i] -= h;
        const Eigen::VectorXd zu = output_series(model, up, grid, config);
        const Eigen::VectorXd zd = output_series(model, down, grid, config);
        chi.values.col(static_cast<Eigen::Index>(k)) = (zu - zd) / (up[i] - down[i]);
    }
    chi.times = grid.points();
    chi.names = active;
    chi.theta = theta;
    return chi;
}

double max_relative_column_discrepancy(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::InvalidArgument, "matrices differ in shape");
    }
    double worst = 0.0;
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
        const double ref  = b.col(k).norm();
        const double diff = (a.col(k) - b.col(k)).norm();
        worst             = std::max(worst, ref > 0 ? diff / ref : diff);
    }
    return worst;
}

} // namespace identikit
