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
#ifndef IDENTIKIT_MODEL_HPP
#define IDENTIKIT_MODEL_HPP

#include "identikit/ode.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace identikit
{

struct ParameterInfo {
    std::string name;
    std::string unit;
    double lower; // fit bounds, exclusive
    double upper;
};

/// Parametric system dx/dt = g(t, x; theta), x(t0) = x0(theta), observed
/// through an accumulated output: z_j = integral of h(t, x; theta) over
/// (t_{j-1}, t_j]. Parameter vectors passed in are always the full vector.
class ModelSystem
{
public:
    virtual ~ModelSystem() = default;

    virtual std::string name() const                             = 0;
    virtual std::size_t state_dim() const                        = 0;
    virtual std::vector<std::string> state_names() const         = 0;
    virtual const std::vector<ParameterInfo>& parameters() const = 0;

    /// Throws Error{InvalidArgument} when theta is outside the model's domain.
    virtual void validate(const Eigen::VectorXd& theta) const;

    virtual Eigen::VectorXd initial_state(const Eigen::VectorXd& theta) const = 0;
    /// d x0 / d theta, state_dim x parameter_count.
    virtual Eigen::MatrixXd initial_state_jacobian(const Eigen::VectorXd& theta) const = 0;

    virtual void vector_field(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                              Eigen::Ref<Eigen::VectorXd> dxdt) const = 0;
    /// dg/dx, state_dim x state_dim.
    virtual void state_jacobian(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                                Eigen::MatrixXd& out) const = 0;
    /// dg/dtheta, state_dim x parameter_count.
    virtual void param_jacobian(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                                Eigen::MatrixXd& out) const = 0;

    virtual double output_rate(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::VectorXd& theta) const = 0;
    virtual void output_rate_state_grad(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                                        const Eigen::VectorXd& theta, Eigen::Ref<Eigen::RowVectorXd> out) const = 0;
    virtual void output_rate_param_grad(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                                        const Eigen::VectorXd& theta, Eigen::Ref<Eigen::RowVectorXd> out) const = 0;

    std::size_t parameter_count() const
    {
        return parameters().size();
    }
    std::vector<std::string> parameter_names() const;
    std::optional<std::size_t> index_of(std::string_view name) const;
    /// Like index_of, but throws Error{SubsetUnknownName}.
    std::size_t require_index(std::string_view name) const;
};

/// Named, ordered full parameter vector.
class ParameterSet
{
public:
    ParameterSet(const ModelSystem& model, Eigen::VectorXd values);

    const std::vector<std::string>& names() const noexcept
    {
        return m_names;
    }
    const std::vector<std::string>& units() const noexcept
    {
        return m_units;
    }
    const Eigen::VectorXd& values() const noexcept
    {
        return m_values;
    }
    double value(std::string_view name) const;
    void set(std::string_view name, double value);

private:
    std::vector<std::string> m_names;
    std::vector<std::string> m_units;
    Eigen::VectorXd m_values;
};

/// Active (estimated) parameters in a fixed order; every other parameter is
/// held at its value in `fixed`.
struct SubsetSpec {
    std::vector<std::string> active;
    std::map<std::string, double> fixed;

    /// Complement taken from `full` (usually nominal values).
    static SubsetSpec from_active(const ModelSystem& model, std::vector<std::string> active,
                                  const Eigen::VectorXd& full);

    /// Checks uniqueness and that active + fixed cover the model exactly once.
    void validate(const ModelSystem& model) const;
    std::vector<std::size_t> active_indices(const ModelSystem& model) const;
    /// Full parameter vector with active entries taken from `active_values`.
    Eigen::VectorXd assemble(const ModelSystem& model, const Eigen::VectorXd& active_values) const;
    Eigen::VectorXd active_values(const ModelSystem& model, const Eigen::VectorXd& full) const;
    std::string label(std::string_view sep = ";") const;
};

/// State trajectory with the accumulated output appended as the last component.
Trajectory simulate(const ModelSystem& model, const Eigen::VectorXd& theta, const TimeGrid& grid,
                    const IntegratorConfig& config);

/// z_j = C(t_j) - C(t_{j-1}) for every grid point.
Eigen::VectorXd output_series(const ModelSystem& model, const Eigen::VectorXd& theta, const TimeGrid& grid,
                              const IntegratorConfig& config);

} // namespace identikit

#endif // IDENTIKIT_MODEL_HPP
