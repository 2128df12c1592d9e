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
#include "identikit/ode.hpp"
#include "identikit/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace identikit
{

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument:
        return "InvalidArgument";
    case ErrorKind::StepLimitExceeded:
        return "StepLimitExceeded";
    case ErrorKind::NonFiniteState:
        return "NonFiniteState";
    case ErrorKind::SubsetUnknownName:
        return "SubsetUnknownName";
    case ErrorKind::InvalidSubsetSize:
        return "InvalidSubsetSize";
    case ErrorKind::ConvergenceFailure:
        return "ConvergenceFailure";
    case ErrorKind::RankDeficient:
        return "RankDeficient";
    case ErrorKind::NegativeDiagonal:
        return "NegativeDiagonal";
    case ErrorKind::ZeroParameterValue:
        return "ZeroParameterValue";
    case ErrorKind::DegenerateDof:
        return "DegenerateDof";
    case ErrorKind::DataParseError:
        return "DataParseError";
    case ErrorKind::ConfigError:
        return "ConfigError";
    }
    return "Unknown";
}

TimeGrid::TimeGrid(double t0, std::vector<double> points)
    : m_t0(t0)
    , m_points(std::move(points))
{
    if (!std::isfinite(m_t0)) {
        throw Error(ErrorKind::InvalidArgument, "time grid origin must be finite");
    }
    if (m_points.empty()) {
        throw Error(ErrorKind::InvalidArgument, "time grid needs at least one observation time");
    }
    double prev = m_t0;
    for (double t : m_points) {
        if (!std::isfinite(t) || !(t > prev)) {
            throw Error(ErrorKind::InvalidArgument,
                        "time grid points must be finite, strictly increasing and after t0");
        }
        prev = t;
    }
}

TimeGrid TimeGrid::uniform(double t0, double span, std::size_t n)
{
    if (n == 0 || !(span > 0)) {
        throw Error(ErrorKind::InvalidArgument, "uniform grid needs n >= 1 and span > 0");
    }
    std::vector<double> pts(n);
    for (std::size_t j = 0; j < n; ++j) {
        pts[j] = t0 + span * static_cast<double>(j + 1) / static_cast<double>(n);
    }
    pts.back() = t0 + span;
    return TimeGrid(t0, std::move(pts));
}

void IntegratorConfig::validate() const
{
    if (!(rel_tol > 0) || !(abs_tol > 0) || max_steps <= 0 || !(max_step > 0)) {
        throw Error(ErrorKind::InvalidArgument,
                    "integrator config needs rel_tol > 0, abs_tol > 0, max_step > 0, max_steps > 0");
    }
}

namespace
{

// Dormand & Prince (1980) 5(4) tableau, FSAL.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double safety = 0.9;
constexpr double fac_min = 0.2;
constexpr double fac_max = 5.0;

class Stepper
{
public:
    Stepper(const OdeSystem& sys, const IntegratorConfig& cfg)
        : m_sys(sys)
        , m_cfg(cfg)
        , m_ctrl(cfg.error_components == 0 ? sys.dim : std::min(cfg.error_components, sys.dim))
        , k2(sys.dim)
        , k3(sys.dim)
        , k4(sys.dim)
        , k5(sys.dim)
        , k6(sys.dim)
        , tmp(sys.dim)
        , err(sys.dim)
    {
    }

    // Weighted RMS norm over the controlled components.
    double norm(const Eigen::VectorXd& v, const Eigen::VectorXd& ya, const Eigen::VectorXd& yb) const
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < m_ctrl; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            double sc = m_cfg.abs_tol + m_cfg.rel_tol * std::max(std::abs(ya[ii]), std::abs(yb[ii]));
            double q  = v[ii] / sc;
            acc += q * q;
        }
        return m_ctrl == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(m_ctrl));
    }

    double initial_step(double t, const Eigen::VectorXd& y, const Eigen::VectorXd& f0)
    {
        double d0 = norm(y, y, y);
        double d1 = norm(f0, y, y);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        tmp       = y + h0 * f0;
        m_sys.rhs(t + h0, tmp, k2);
        Eigen::VectorXd df = k2 - f0;
        double d2          = norm(df, y, y) / h0;
        double dmax        = std::max(d1, d2);
        double h1          = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
        return std::min(100 * h0, h1);
    }

    // One trial step from (t, y) with derivative f0; fills y_new, f_new.
    // Returns the error norm.
    double attempt(double t, double h, const Eigen::VectorXd& y, const Eigen::VectorXd& f0,
                   Eigen::VectorXd& y_new, Eigen::VectorXd& f_new)
    {
        tmp = y + h * a21 * f0;
        m_sys.rhs(t + c2 * h, tmp, k2);
        tmp = y + h * (a31 * f0 + a32 * k2);
        m_sys.rhs(t + c3 * h, tmp, k3);
        tmp = y + h * (a41 * f0 + a42 * k2 + a43 * k3);
        m_sys.rhs(t + c4 * h, tmp, k4);
        tmp = y + h * (a51 * f0 + a52 * k2 + a53 * k3 + a54 * k4);
        m_sys.rhs(t + c5 * h, tmp, k5);
        tmp = y + h * (a61 * f0 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        m_sys.rhs(t + h, tmp, k6);
        y_new = y + h * (b1 * f0 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        m_sys.rhs(t + h, y_new, f_new);
        err = h * (e1 * f0 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * f_new);
        return norm(err, y, y_new);
    }

private:
    const OdeSystem& m_sys;
    const IntegratorConfig& m_cfg;
    std::size_t m_ctrl;
    Eigen::VectorXd k2, k3, k4, k5, k6, tmp, err;
};

bool all_finite(const Eigen::VectorXd& v)
{
    return v.allFinite();
}

} // namespace

Trajectory integrate(const OdeSystem& system, const Eigen::VectorXd& y0, const TimeGrid& grid,
                     const IntegratorConfig& config)
{
    config.validate();
    if (static_cast<std::size_t>(y0.size()) != system.dim) {
        throw Error(ErrorKind::InvalidArgument, "initial state dimension " + std::to_string(y0.size()) +
                                                    " does not match system dimension " +
                                                    std::to_string(system.dim));
    }
    if (!all_finite(y0)) {
        throw Error(ErrorKind::NonFiniteState, "initial state is not finite");
    }

    Trajectory out;
    out.times.reserve(grid.size() + 1);
    out.states.reserve(grid.size() + 1);
    out.times.push_back(grid.t0());
    out.states.push_back(y0);

    Stepper stepper(system, config);
    const auto n = static_cast<Eigen::Index>(system.dim);
    Eigen::VectorXd y = y0, f(n), y_new(n), f_new(n);

    double t = grid.t0();
    system.rhs(t, y, f);
    if (!all_finite(f)) {
        throw Error(ErrorKind::NonFiniteState, "vector field is not finite at t0");
    }
    double h    = std::min(stepper.initial_step(t, y, f), config.max_step);
    long steps  = 0;
    bool reject = false;

    for (double target : grid.points()) {
        while (t < target) {
            if (++steps > config.max_steps) {
                throw Error(ErrorKind::StepLimitExceeded,
                            "exceeded " + std::to_string(config.max_steps) + " steps at t=" + std::to_string(t));
            }
            double proposal = std::min(h, config.max_step);
            double step     = proposal;
            bool clipped    = false;
            if (t + step * (1.0 + 1e-10) >= target) {
                step    = target - t;
                clipped = true;
            }
            if (!(step > 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))) {
                throw Error(ErrorKind::NonFiniteState, "step size underflow at t=" + std::to_string(t));
            }

            double e = stepper.attempt(t, step, y, f, y_new, f_new);
            if (!std::isfinite(e)) {
                h      = step * fac_min;
                reject = true;
                continue;
            }
            double fac = e == 0.0 ? fac_max : safety * std::pow(e, -0.2);
            if (e <= 1.0) {
                if (!all_finite(y_new) || !all_finite(f_new)) {
                    throw Error(ErrorKind::NonFiniteState, "non-finite state at t=" + std::to_string(t + step));
                }
                t = clipped ? target : t + step;
                y.swap(y_new);
                f.swap(f_new);
                double grow = reject ? std::min(1.0, fac) : std::min(fac_max, fac);
                h           = step * std::max(fac_min, grow);
                if (clipped) {
                    h = std::max(h, proposal);
                }
                reject = false;
            } else {
                h      = step * std::max(fac_min, fac);
                reject = true;
            }
        }
        out.times.push_back(target);
        out.states.push_back(y);
    }
    return out;
}

} // namespace identikit
