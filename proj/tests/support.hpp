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
// Shared fixtures for the unit and acceptance tests: reference models and
// independent re-implementations used as oracles.
#ifndef IDENTIKIT_TESTS_SUPPORT_HPP
#define IDENTIKIT_TESTS_SUPPORT_HPP

#include "identikit/model.hpp"
#include "identikit/seirs.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace testing
{

inline double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double max_rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
    return scale == 0.0 ? 0.0 : (a - b).cwiseAbs().maxCoeff() / scale;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols)
{
    std::normal_distribution<double> nd;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = nd(rng);
        }
    }
    return m;
}

// SEIRS right-hand side written out term by term, deliberately not sharing
// code with the library: (S, E, I, R) and theta in model order.
inline Eigen::Vector4d reference_seirs_rhs(double t, const Eigen::Vector4d& x, const Eigen::VectorXd& th)
{
    const double S = x[0], E = x[1], I = x[2], R = x[3];
    const double N = th[3], L = th[4], D = th[5], M = th[6], P = th[7];
    const double b0 = th[8], a1 = th[9], b1 = th[10];
    const double w    = 2.0 * std::numbers::pi * t;
    const double beta = b0 + b0 * a1 * std::cos(w) + b0 * b1 * std::sin(w);
    const double inf  = beta * I * S / N;
    Eigen::Vector4d dx;
    dx[0] = N / P - S / P - inf + R / L;
    dx[1] = inf - (1.0 / M + 1.0 / P) * E;
    dx[2] = E / M - (1.0 / D + 1.0 / P) * I;
    dx[3] = I / D - (1.0 / L + 1.0 / P) * R;
    return dx;
}

// SEIRS with an extra trailing parameter "dummy" that enters nothing.
class DummyParameterModel final : public identikit::ModelSystem
{
public:
    DummyParameterModel()
        : m_params(m_base.parameters())
    {
        m_params.push_back({"dummy", "1", -1e9, 1e9});
    }
    std::string name() const override
    {
        return "seirs+dummy";
    }
    std::size_t state_dim() const override
    {
        return 4;
    }
    std::vector<std::string> state_names() const override
    {
        return m_base.state_names();
    }
    const std::vector<identikit::ParameterInfo>& parameters() const override
    {
        return m_params;
    }
    void validate(const Eigen::VectorXd& theta) const override
    {
        identikit::ModelSystem::validate(theta);
        m_base.validate(theta.head(11));
    }
    Eigen::VectorXd initial_state(const Eigen::VectorXd& theta) const override
    {
        return m_base.initial_state(theta.head(11));
    }
    Eigen::MatrixXd initial_state_jacobian(const Eigen::VectorXd& theta) const override
    {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 12);
        j.leftCols(11)    = m_base.initial_state_jacobian(theta.head(11));
        return j;
    }
    void vector_field(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                      Eigen::Ref<Eigen::VectorXd> dxdt) const override
    {
        m_base.vector_field(t, x, theta.head(11), dxdt);
    }
    void state_jacobian(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                        Eigen::MatrixXd& out) const override
    {
        m_base.state_jacobian(t, x, theta.head(11), out);
    }
    void param_jacobian(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                        Eigen::MatrixXd& out) const override
    {
        Eigen::MatrixXd base;
        m_base.param_jacobian(t, x, theta.head(11), base);
        out = Eigen::MatrixXd::Zero(4, 12);
        out.leftCols(11) = base;
    }
    double output_rate(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::VectorXd& theta) const override
    {
        return m_base.output_rate(t, x, theta.head(11));
    }
    void output_rate_state_grad(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                                Eigen::Ref<Eigen::RowVectorXd> out) const override
    {
        m_base.output_rate_state_grad(t, x, theta.head(11), out);
    }
    void output_rate_param_grad(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                                Eigen::Ref<Eigen::RowVectorXd> out) const override
    {
        out.setZero();
        m_base.output_rate_param_grad(t, x, theta.head(11), out.head(11));
    }

private:
    identikit::seirs::SeirsModel m_base;
    std::vector<identikit::ParameterInfo> m_params;
};

// Output rate c1 + c2 t + c3 cos(2 pi t) + c4 sin(2 pi t) with a trivial
// state, so z_j is linear in theta and the interval integrals are known.
class LinearOutputModel final : public identikit::ModelSystem
{
public:
    LinearOutputModel()
    {
        for (int i = 1; i <= 4; ++i) {
            m_params.push_back({"c" + std::to_string(i), "1", -1e6, 1e6});
        }
    }
    std::string name() const override
    {
        return "linear";
    }
    std::size_t state_dim() const override
    {
        return 1;
    }
    std::vector<std::string> state_names() const override
    {
        return {"x"};
    }
    const std::vector<identikit::ParameterInfo>& parameters() const override
    {
        return m_params;
    }
    Eigen::VectorXd initial_state(const Eigen::VectorXd&) const override
    {
        return Eigen::VectorXd::Zero(1);
    }
    Eigen::MatrixXd initial_state_jacobian(const Eigen::VectorXd&) const override
    {
        return Eigen::MatrixXd::Zero(1, 4);
    }
    void vector_field(double, const Eigen::Ref<const Eigen::VectorXd>&, const Eigen::VectorXd&,
                      Eigen::Ref<Eigen::VectorXd> dxdt) const override
    {
        dxdt.setZero();
    }
    void state_jacobian(double, const Eigen::Ref<const Eigen::VectorXd>&, const Eigen::VectorXd&,
                        Eigen::MatrixXd& out) const override
    {
        out = Eigen::MatrixXd::Zero(1, 1);
    }
    void param_jacobian(double, const Eigen::Ref<const Eigen::VectorXd>&, const Eigen::VectorXd&,
                        Eigen::MatrixXd& out) const override
    {
        out = Eigen::MatrixXd::Zero(1, 4);
    }
    static Eigen::RowVector4d basis(double t)
    {
        const double w = 2.0 * std::numbers::pi * t;
        return {1.0, t, std::cos(w), std::sin(w)};
    }
    // Integral of the basis over [a, b].
    static Eigen::RowVector4d basis_integral(double a, double b)
    {
        const double tw = 2.0 * std::numbers::pi;
        return {b - a, 0.5 * (b * b - a * a), (std::sin(tw * b) - std::sin(tw * a)) / tw,
                -(std::cos(tw * b) - std::cos(tw * a)) / tw};
    }
    double output_rate(double t, const Eigen::Ref<const Eigen::VectorXd>&,
                       const Eigen::VectorXd& theta) const override
    {
        return basis(t).dot(theta.head(4));
    }
    void output_rate_state_grad(double, const Eigen::Ref<const Eigen::VectorXd>&, const Eigen::VectorXd&,
                                Eigen::Ref<Eigen::RowVectorXd> out) const override
    {
        out.setZero();
    }
    void output_rate_param_grad(double t, const Eigen::Ref<const Eigen::VectorXd>&, const Eigen::VectorXd&,
                                Eigen::Ref<Eigen::RowVectorXd> out) const override
    {
        out = basis(t);
    }

private:
    std::vector<identikit::ParameterInfo> m_params;
};

} // namespace testing

#endif // IDENTIKIT_TESTS_SUPPORT_HPP
