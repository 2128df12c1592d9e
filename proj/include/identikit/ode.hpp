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
#ifndef IDENTIKIT_ODE_HPP
#define IDENTIKIT_ODE_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace identikit
{

/// Observation schedule: an initial time t0 and strictly increasing
/// observation times t_1 < ... < t_n, all after t0.
class TimeGrid
{
public:
    TimeGrid(double t0, std::vector<double> points);

    /// n equally spaced points on (t0, t0 + span]; the last point is exactly t0 + span.
    static TimeGrid uniform(double t0, double span, std::size_t n);

    double t0() const noexcept
    {
        return m_t0;
    }
    const std::vector<double>& points() const noexcept
    {
        return m_points;
    }
    std::size_t size() const noexcept
    {
        return m_points.size();
    }

    /// t_{j-1} for observation j (0-based), with t_{-1} = t0.
    double interval_start(std::size_t j) const
    {
        return j == 0 ? m_t0 : m_points[j - 1];
    }

private:
    double m_t0;
    std::vector<double> m_points;
};

struct IntegratorConfig {
    double rel_tol   = 1e-8;
    double abs_tol   = 1e-10;
    double max_step  = std::numeric_limits<double>::infinity();
    long max_steps   = 1'000'000;
    // Only the leading components take part in step-size control (0 = all).
    // Sensitivity integrations restrict control to the state so the step
    // sequence does not depend on which parameters are active.
    std::size_t error_components = 0;

    void validate() const;
};

/// Right-hand side dy/dt = f(t, y) of a first-order system with fixed dimension.
struct OdeSystem {
    std::size_t dim = 0;
    std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt)> rhs;
};

struct Trajectory {
    std::vector<double> times;           // t0 followed by the grid points
    std::vector<Eigen::VectorXd> states; // aligned with times
};

/// Dormand-Prince 5(4) integration that lands exactly on every grid point.
/// Throws Error{StepLimitExceeded} or Error{NonFiniteState}.
Trajectory integrate(const OdeSystem& system, const Eigen::VectorXd& y0, const TimeGrid& grid,
                     const IntegratorConfig& config);

} // namespace identikit

#endif // IDENTIKIT_ODE_HPP
