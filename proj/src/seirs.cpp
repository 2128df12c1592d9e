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
#include "identikit/seirs.hpp"
#include "identikit/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace identikit::seirs
{

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double inf    = std::numeric_limits<double>::infinity();

using namespace param;
using namespace comp;

void require(bool ok, const char* field, const std::string& what)
{
    if (!ok) {
        throw Error(ErrorKind::InvalidArgument, std::string(field) + " " + what);
    }
}

Vector4 to4(const Eigen::Ref<const Eigen::VectorXd>& x)
{
    return Vector4(x[S], x[E], x[I], x[R]);
}

} // namespace

void SeirsParameters::validate() const
{
    const double vals[] = {S0, E0, I0, N, L, D, M, P, beta0, a1, b1};
    const char* names[] = {"S0", "E0", "I0", "N", "L", "D", "M", "P", "beta0", "a1", "b1"};
    for (int i = 0; i < param::Count; ++i) {
        require(std::isfinite(vals[i]), names[i], "must be finite");
    }
    require(S0 >= 0, "S0", "must be >= 0");
    require(E0 >= 0, "E0", "must be >= 0");
    require(I0 >= 0, "I0", "must be >= 0");
    require(N > 0, "N", "must be > 0");
    require(L > 0, "L", "must be > 0");
    require(D > 0, "D", "must be > 0");
    require(M > 0, "M", "must be > 0");
    require(P > 0, "P", "must be > 0");
    require(beta0 > 0, "beta0", "must be > 0");
    require(S0 + E0 + I0 <= N, "S0+E0+I0", "must not exceed N (R(t0) would be negative)");
}

Eigen::VectorXd SeirsParameters::to_vector() const
{
    Eigen::VectorXd v(param::Count);
    v << S0, E0, I0, N, L, D, M, P, beta0, a1, b1;
    return v;
}

SeirsParameters SeirsParameters::from_vector(const Eigen::VectorXd& theta)
{
    if (theta.size() != param::Count) {
        throw Error(ErrorKind::InvalidArgument, "SEIRS parameter vector must have 11 entries");
    }
    return {theta[param::S0], theta[param::E0], theta[param::I0],    theta[param::N],
            theta[param::L],  theta[param::D],  theta[param::M],     theta[param::P],
            theta[param::Beta0], theta[param::A1], theta[param::B1]};
}

SeirsParameters SeirsParameters::nominal()
{
    return {2.78e5, 1.08e-1, 1.89e-1, 1.00e6, 5.00, 9.59e-3, 5.48e-3, 75.00, 375.00, 2.00e-2, -2.00e-2};
}

double beta_at(double t, double beta0, double a1, double b1)
{
    return beta0 * (1.0 + a1 * std::cos(two_pi * t) + b1 * std::sin(two_pi * t));
}

std::pair<double, double> seasonal_coefficients(double beta1, double phase)
{
    return {beta1 * std::cos(two_pi * phase), beta1 * std::sin(two_pi * phase)};
}

Vector4 vector_field(double t, const Vector4& x, const SeirsParameters& p)
{
    const double beta = beta_at(t, p.beta0, p.a1, p.b1);
    const double force = beta * x[S] * x[I] / p.N;
    Vector4 dx;
    dx[S] = p.N / p.P + x[R] / p.L - force - x[S] / p.P;
    dx[E] = force - x[E] / p.M - x[E] / p.P;
    dx[I] = x[E] / p.M - x[I] / p.D - x[I] / p.P;
    dx[R] = x[I] / p.D - x[R] / p.L - x[R] / p.P;
    return dx;
}

Jacobians jacobians(double t, const Vector4& x, const SeirsParameters& p)
{
    const double c     = std::cos(two_pi * t);
    const double s     = std::sin(two_pi * t);
    const double beta  = p.beta0 * (1.0 + p.a1 * c + p.b1 * s);
    const double si_n  = x[S] * x[I] / p.N;
    const double iP    = 1.0 / p.P;

    Jacobians J;
    J.state.setZero();
    J.state(S, S) = -beta * x[I] / p.N - iP;
    J.state(S, I) = -beta * x[S] / p.N;
    J.state(S, R) = 1.0 / p.L;
    J.state(E, S) = beta * x[I] / p.N;
    J.state(E, E) = -1.0 / p.M - iP;
    J.state(E, I) = beta * x[S] / p.N;
    J.state(I, E) = 1.0 / p.M;
    J.state(I, I) = -1.0 / p.D - iP;
    J.state(R, I) = 1.0 / p.D;
    J.state(R, R) = -1.0 / p.L - iP;

    J.param.setZero();
    // S0, E0, I0 enter only through the initial condition.
    J.param(S, N) = iP + beta * si_n / p.N;
    J.param(E, N) = -beta * si_n / p.N;

    const double L2 = p.L * p.L, D2 = p.D * p.D, M2 = p.M * p.M, P2 = p.P * p.P;
    J.param(S, L) = -x[R] / L2;
    J.param(R, L) = x[R] / L2;

    J.param(I, D) = x[I] / D2;
    J.param(R, D) = -x[I] / D2;

    J.param(E, M) = x[E] / M2;
    J.param(I, M) = -x[E] / M2;

    J.param(S, P) = (x[S] - p.N) / P2;
    J.param(E, P) = x[E] / P2;
    J.param(I, P) = x[I] / P2;
    J.param(R, P) = x[R] / P2;

    const double shape = 1.0 + p.a1 * c + p.b1 * s;
    J.param(S, Beta0)  = -shape * si_n;
    J.param(E, Beta0)  = shape * si_n;
    J.param(S, A1)     = -p.beta0 * c * si_n;
    J.param(E, A1)     = p.beta0 * c * si_n;
    J.param(S, B1)     = -p.beta0 * s * si_n;
    J.param(E, B1)     = p.beta0 * s * si_n;
    return J;
}

SeirsModel::SeirsModel()
    : m_params{
          {"S0", "people", 0.0, inf},   {"E0", "people", 0.0, inf},  {"I0", "people", 0.0, inf},
          {"N", "people", 0.0, inf},    {"L", "years", 0.0, inf},    {"D", "years", 0.0, inf},
          {"M", "years", 0.0, inf},     {"P", "years", 0.0, inf},    {"beta0", "1/years", 0.0, inf},
          {"a1", "1", -1.0, 1.0},       {"b1", "1", -1.0, 1.0},
      }
{
}

void SeirsModel::validate(const Eigen::VectorXd& theta) const
{
    ModelSystem::validate(theta);
    SeirsParameters::from_vector(theta).validate();
}

Eigen::VectorXd SeirsModel::initial_state(const Eigen::VectorXd& theta) const
{
    Eigen::VectorXd x0(comp::Count);
    x0 << theta[S0], theta[E0], theta[I0], theta[N] - theta[S0] - theta[E0] - theta[I0];
    return x0;
}

Eigen::MatrixXd SeirsModel::initial_state_jacobian(const Eigen::VectorXd&) const
{
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(comp::Count, param::Count);
    J(S, S0) = 1.0;
    J(E, E0) = 1.0;
    J(I, I0) = 1.0;
    J(R, S0) = -1.0;
    J(R, E0) = -1.0;
    J(R, I0) = -1.0;
    J(R, N)  = 1.0;
    return J;
}

void SeirsModel::vector_field(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                              Eigen::Ref<Eigen::VectorXd> dxdt) const
{
    dxdt = seirs::vector_field(t, to4(x), SeirsParameters::from_vector(theta));
}

void SeirsModel::state_jacobian(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                                Eigen::MatrixXd& out) const
{
    out = jacobians(t, to4(x), SeirsParameters::from_vector(theta)).state;
}

void SeirsModel::param_jacobian(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                                Eigen::MatrixXd& out) const
{
    out = jacobians(t, to4(x), SeirsParameters::from_vector(theta)).param;
}

double SeirsModel::output_rate(double, const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::VectorXd& theta) const
{
    return x[E] / theta[M];
}

void SeirsModel::output_rate_state_grad(double, const Eigen::Ref<const Eigen::VectorXd>&,
                                        const Eigen::VectorXd& theta, Eigen::Ref<Eigen::RowVectorXd> out) const
{
    out.setZero();
    out[E] = 1.0 / theta[M];
}

void SeirsModel::output_rate_param_grad(double, const Eigen::Ref<const Eigen::VectorXd>& x,
                                        const Eigen::VectorXd& theta, Eigen::Ref<Eigen::RowVectorXd> out) const
{
    out.setZero();
    out[M] = -x[E] / (theta[M] * theta[M]);
}

TimeGrid default_grid()
{
    return TimeGrid::uniform(0.0, 5.0, 260);
}

Eigen::VectorXd incidence_series(const SeirsParameters& p, const TimeGrid& grid, const IntegratorConfig& config)
{
    static const SeirsModel model;
    return output_series(model, p.to_vector(), grid, config);
}

} // namespace identikit::seirs
