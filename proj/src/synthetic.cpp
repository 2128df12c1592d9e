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
#include "identikit/synthetic.hpp"
#include "identikit/error.hpp"

#include <cmath>
#include <numbers>

namespace identikit
{

double NormalStream::uniform_open()
{
    // 53 random bits -> k / 2^53 in [0, 1), reflected to (0, 1].
    const std::uint64_t bits = m_engine() >> 11;
    return 1.0 - static_cast<double>(bits) * 0x1.0p-53;
}

double NormalStream::next()
{
    if (m_has_spare) {
        m_has_spare = false;
        return m_spare;
    }
    const double u1     = uniform_open();
    const double u2     = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle  = 2.0 * std::numbers::pi * u2;
    m_spare             = radius * std::sin(angle);
    m_has_spare         = true;
    return radius * std::cos(angle);
}

DataSet generate(const ModelSystem& model, const Eigen::VectorXd& theta0, const TimeGrid& grid,
                 const NoiseSpec& noise, const IntegratorConfig& config)
{
    if (!(noise.sigma0 >= 0.0) || !std::isfinite(noise.sigma0)) {
        throw Error(ErrorKind::InvalidArgument, "noise standard deviation must be finite and >= 0");
    }
    DataSet out{grid, output_series(model, theta0, grid, config), {}};
    NormalStream normals(noise.seed);
    for (Eigen::Index j = 0; j < out.values.size(); ++j) {
        const double v = normals.next();
        if (noise.sigma0 > 0.0) {
            out.values[j] += noise.sigma0 * v;
        }
    }
    out.provenance = "synthetic " + NormalStream::generator_name() + " seed=" + std::to_string(noise.seed);
    return out;
}

} // namespace identikit
