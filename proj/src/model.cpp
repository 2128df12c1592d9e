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
#include "identikit/model.hpp"
#include "identikit/error.hpp"

#include <algorithm>
#include <set>

namespace identikit
{

void ModelSystem::validate(const Eigen::VectorXd& theta) const
{
    if (static_cast<std::size_t>(theta.size()) != parameter_count()) {
        throw Error(ErrorKind::InvalidArgument, name() + " expects " + std::to_string(parameter_count()) +
                                                    " parameters, got " + std::to_string(theta.size()));
    }
    if (!theta.allFinite()) {
        throw Error(ErrorKind::InvalidArgument, "parameter vector is not finite");
    }
}

std::vector<std::string> ModelSystem::parameter_names() const
{
    std::vector<std::string> out;
    for (const auto& p : parameters()) {
        out.push_back(p.name);
    }
    return out;
}

std::optional<std::size_t> ModelSystem::index_of(std::string_view name) const
{
    const auto& ps = parameters();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t ModelSystem::require_index(std::string_view name) const
{
    auto idx = index_of(name);
    if (!idx) {
        throw Error(ErrorKind::SubsetUnknownName, "'" + std::string(name) + "' is not a parameter of " + this->name());
    }
    return *idx;
}

ParameterSet::ParameterSet(const ModelSystem& model, Eigen::VectorXd values)
    : m_values(std::move(values))
{
    for (const auto& p : model.parameters()) {
        m_names.push_back(p.name);
        m_units.push_back(p.unit);
    }
    if (static_cast<std::size_t>(m_values.size()) != m_names.size()) {
        throw Error(ErrorKind::InvalidArgument, "parameter set size does not match model");
    }
}

double ParameterSet::value(std::string_view name) const
{
    auto it = std::find(m_names.begin(), m_names.end(), name);
    if (it == m_names.end()) {
        throw Error(ErrorKind::SubsetUnknownName, "unknown parameter '" + std::string(name) + "'");
    }
    return m_values[it - m_names.begin()];
}

void ParameterSet::set(std::string_view name, double value)
{
    auto it = std::find(m_names.begin(), m_names.end(), name);
    if (it == m_names.end()) {
        throw Error(ErrorKind::SubsetUnknownName, "unknown parameter '" + std::string(name) + "'");
    }
    m_values[it - m_names.begin()] = value;
}

SubsetSpec SubsetSpec::from_active(const ModelSystem& model, std::vector<std::string> active,
                                   const Eigen::VectorXd& full)
{
    SubsetSpec spec;
    spec.active = std::move(active);
    for (const auto& name : spec.active) {
        model.require_index(name);
    }
    const auto& ps = model.parameters();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (std::find(spec.active.begin(), spec.active.end(), ps[i].name) == spec.active.end()) {
            spec.fixed[ps[i].name] = full[static_cast<Eigen::Index>(i)];
        }
    }
    spec.validate(model);
    return spec;
}

void SubsetSpec::validate(const ModelSystem& model) const
{
    std::set<std::string> seen;
    for (const auto& name : active) {
        model.require_index(name);
        if (!seen.insert(name).second) {
            throw Error(ErrorKind::InvalidArgument, "parameter '" + name + "' appears twice in subset");
        }
    }
    for (const auto& [name, value] : fixed) {
        model.require_index(name);
        if (!seen.insert(name).second) {
            throw Error(ErrorKind::InvalidArgument, "parameter '" + name + "' is both active and fixed");
        }
    }
    if (seen.size() != model.parameter_count()) {
        throw Error(ErrorKind::InvalidArgument, "subset does not cover every model parameter");
    }
}

std::vector<std::size_t> SubsetSpec::active_indices(const ModelSystem& model) const
{
    std::vector<std::size_t> idx;
    idx.reserve(active.size());
    for (const auto& name : active) {
        idx.push_back(model.require_index(name));
    }
    return idx;
}

Eigen::VectorXd SubsetSpec::assemble(const ModelSystem& model, const Eigen::VectorXd& active_values) const
{
    if (static_cast<std::size_t>(active_values.size()) != active.size()) {
        throw Error(ErrorKind::InvalidArgument, "active value count does not match subset");
    }
    Eigen::VectorXd full(static_cast<Eigen::Index>(model.parameter_count()));
    for (const auto& [name, value] : fixed) {
        full[static_cast<Eigen::Index>(model.require_index(name))] = value;
    }
    auto idx = active_indices(model);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        full[static_cast<Eigen::Index>(idx[k])] = active_values[static_cast<Eigen::Index>(k)];
    }
    return full;
}

Eigen::VectorXd SubsetSpec::active_values(const ModelSystem& model, const Eigen::VectorXd& full) const
{
    auto idx = active_indices(model);
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
        out[static_cast<Eigen::Index>(k)] = full[static_cast<Eigen::Index>(idx[k])];
    }
    return out;
}

std::string SubsetSpec::label(std::string_view sep) const
{
    std::string out;
    for (std::size_t k = 0; k < active.size(); ++k) {
        if (k) {
            out += sep;
        }
        out += active[k];
    }
    return out;
}

Trajectory simulate(const ModelSystem& model, const Eigen::VectorXd& theta, const TimeGrid& grid,
                    const IntegratorConfig& config)
{
    model.validate(theta);
    const auto d = static_cast<Eigen::Index>(model.state_dim());

    OdeSystem sys;
    sys.dim = static_cast<std::size_t>(d + 1);
    sys.rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        auto x = y.head(d);
        model.vector_field(t, x, theta, dy.head(d));
        dy[d] = model.output_rate(t, x, theta);
    };

    Eigen::VectorXd y0(d + 1);
    y0.head(d) = model.initial_state(theta);
    y0[d]      = 0.0;

    IntegratorConfig cfg  = config;
    cfg.error_components = sys.dim;
    return integrate(sys, y0, grid, cfg);
}

Eigen::VectorXd output_series(const ModelSystem& model, const Eigen::VectorXd& theta, const TimeGrid& grid,
                              const IntegratorConfig& config)
{
    Trajectory traj = simulate(model, theta, grid, config);
    const auto d    = static_cast<Eigen::Index>(model.state_dim());
    Eigen::VectorXd z(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t j = 0; j < grid.size(); ++j) {
        z[static_cast<Eigen::Index>(j)] = traj.states[j + 1][d] - traj.states[j][d];
    }
    return z;
}

} // namespace identikit
