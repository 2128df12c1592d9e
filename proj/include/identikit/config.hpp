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
#ifndef IDENTIKIT_CONFIG_HPP
#define IDENTIKIT_CONFIG_HPP

#include "identikit/model.hpp"
#include "identikit/ode.hpp"
#include "identikit/subset_search.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace identikit
{

/// Observation grid as written by users: start, length, spacing (years).
struct GridSpec {
    double t0      = 0.0;
    double span    = 5.0;
    double cadence = 1.0 / 52.0;

    /// span / cadence must be (close to) a positive integer.
    std::size_t count() const;
    TimeGrid make() const;
};

/// "t0:span:cadence"; every field accepts a ratio such as 1/52.
GridSpec parse_grid_spec(const std::string& text);

/// Comma separated, whitespace trimmed, empty entries rejected.
std::vector<std::string> split_names(const std::string& text);

struct RunConfig {
    std::string model = "seirs";
    Eigen::VectorXd nominal; // full parameter vector in model order
    GridSpec grid;
    double sigma0_sq   = 500.0;
    std::uint64_t seed = 42;

    std::size_t j_min = 1;
    std::size_t j_max = 5;
    std::vector<std::string> core{"beta0", "a1", "b1"};
    std::vector<std::string> pool{"S0", "E0", "I0", "N", "L", "D", "M", "P"};
    FeasibilityThresholds thresholds;
    unsigned threads = 0;

    IntegratorConfig integrator;

    std::vector<std::string> fit_subset{"L", "beta0", "a1", "b1"};
    int fit_max_iterations  = 200;
    double fit_gradient_tol = 1e-8;
    double fit_step_tol     = 1e-10;
    double fit_function_tol = 1e-12;

    std::filesystem::path output_dir = "out";

    /// Built-in defaults with the model's nominal values.
    static RunConfig defaults();

    /// Names exist in the model, ranges are sane; throws Error{ConfigError}.
    void validate(const ModelSystem& model) const;
};

/// Built-in models by name; throws Error{ConfigError} for unknown names.
std::unique_ptr<ModelSystem> make_model(const std::string& name);
Eigen::VectorXd model_nominal(const std::string& name);

/// INI text with sections [model] [parameters] [grid] [noise] [select]
/// [integrator] [fit] [output]. Unknown sections or keys are errors; a
/// [parameters] section must list every model parameter.
RunConfig parse_run_config(std::istream& is, const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

/// Human-readable listing of every key and its default, for --help.
std::string describe_defaults();

} // namespace identikit

#endif // IDENTIKIT_CONFIG_HPP
