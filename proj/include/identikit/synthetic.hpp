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
#ifndef IDENTIKIT_SYNTHETIC_HPP
#define IDENTIKIT_SYNTHETIC_HPP

#include "identikit/model.hpp"
#include "identikit/ode.hpp"
#include "identikit/ols.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace identikit
{

struct NoiseSpec {
    double sigma0 = 0.0; // standard deviation, people
    std::uint64_t seed = 0;
};

/// Standard normal variates: std::mt19937_64 feeding the Box-Muller
/// transform. The engine's output sequence is fixed by the C++ standard, so
/// a seed pins the stream wherever libm agrees on log/sin/cos.
class NormalStream
{
public:
    explicit NormalStream(std::uint64_t seed)
        : m_engine(seed)
    {
    }

    double next();

    static std::string generator_name()
    {
        return "mt19937_64/box-muller";
    }

private:
    double uniform_open(); // (0, 1]

    std::mt19937_64 m_engine;
    double m_spare  = 0.0;
    bool m_has_spare = false;
};

/// y_j = z(t_j; theta0) + sigma0 v_j with v_j from NormalStream(seed).
DataSet generate(const ModelSystem& model, const Eigen::VectorXd& theta0, const TimeGrid& grid,
                 const NoiseSpec& noise, const IntegratorConfig& config);

} // namespace identikit

#endif // IDENTIKIT_SYNTHETIC_HPP
