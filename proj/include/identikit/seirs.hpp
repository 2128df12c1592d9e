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
#ifndef IDENTIKIT_SEIRS_HPP
#define IDENTIKIT_SEIRS_HPP

#include "identikit/model.hpp"
#include "identikit/ode.hpp"

#include <Eigen/Dense>

#include <utility>

namespace identikit::seirs
{

// Positions in the full parameter vector.
namespace param
{
enum Index : Eigen::Index { S0, E0, I0, N, L, D, M, P, Beta0, A1, B1, Count };
}

// Positions in the state vector.
namespace comp
{
enum Index : Eigen::Index { S, E, I, R, Count };
}

/// Seasonal SEIRS parameters. Times are in years, populations in people.
struct SeirsParameters {
    double S0;
    double E0;
    double I0;
    double N;
    double L;     // mean duration of immunity
    double D;     // mean duration of active infection
    double M;     // mean latency period
    double P;     // mean life span
    double beta0; // baseline transmission, 1/years
    double a1;
    double b1;

    /// Throws Error{InvalidArgument} naming the offending field.
    void validate() const;

    Eigen::VectorXd to_vector() const;
    static SeirsParameters from_vector(const Eigen::VectorXd& theta);

    /// S0=2.78e5, E0=0.108, I0=0.189, N=1e6, L=5, D=9.59e-3, M=5.48e-3,
    /// P=75, beta0=375, a1=0.02, b1=-0.02.
    static SeirsParameters nominal();
};

using Vector4 = Eigen::Matrix<double, 4, 1>;
using Matrix4 = Eigen::Matrix<double, 4, 4>;
using Matrix4x11 = Eigen::Matrix<double, 4, 11>;

/// beta0 * (1 + a1 cos(2 pi t) + b1 sin(2 pi t)).
double beta_at(double t, double beta0, double a1, double b1);

/// (a1, b1) for the amplitude/phase form beta0 (1 + beta1 cos(2 pi (t - phase))).
std::pair<double, double> seasonal_coefficients(double beta1, double phase);

Vector4 vector_field(double t, const Vector4& x, const SeirsParameters& p);

struct Jacobians {
    Matrix4 state;    // dg/dx
    Matrix4x11 param; // dg/dtheta, columns ordered as param::Index
};
Jacobians jacobians(double t, const Vector4& x, const SeirsParameters& p);

/// The SEIRS system with incidence E/M as the accumulated output.
class SeirsModel final : public ModelSystem
{
public:
    SeirsModel();

    std::string name() const override
    {
        return "seirs";
    }
    std::size_t state_dim() const override
    {
        return comp::Count;
    }
    std::vector<std::string> state_names() const override
    {
        return {"S", "E", "I", "R"};
    }
    const std::vector<ParameterInfo>& parameters() const override
    {
        return m_params;
    }

    void validate(const Eigen::VectorXd& theta) const override;
    Eigen::VectorXd initial_state(const Eigen::VectorXd& theta) const override;
    Eigen::MatrixXd initial_state_jacobian(const Eigen::VectorXd& theta) const override;
    void vector_field(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                      Eigen::Ref<Eigen::VectorXd> dxdt) const override;
    void state_jacobian(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                        Eigen::MatrixXd& out) const override;
    void param_jacobian(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                        Eigen::MatrixXd& out) const override;
    double output_rate(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::VectorXd& theta) const override;
    void output_rate_state_grad(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                                Eigen::Ref<Eigen::RowVectorXd> out) const override;
    void output_rate_param_grad(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                                Eigen::Ref<Eigen::RowVectorXd> out) const override;

private:
    std::vector<ParameterInfo> m_params;
};

/// Weekly observations over five years starting at t0 = 0 (n = 260).
TimeGrid default_grid();

struct NominalScenario {
    SeirsParameters params = SeirsParameters::nominal();
    double sigma0_sq       = 500.0;
    TimeGrid grid          = default_grid();
};

/// New active infections per observation interval.
Eigen::VectorXd incidence_series(const SeirsParameters& p, const TimeGrid& grid, const IntegratorConfig& config);

} // namespace identikit::seirs

#endif // IDENTIKIT_SEIRS_HPP
