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
#include "identikit/error.hpp"
#include "identikit/seirs.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace identikit;
using namespace identikit::seirs;
using testing::rel_diff;
using testing::reference_seirs_rhs;

namespace
{

Vector4 nominal_x0()
{
    const auto p = SeirsParameters::nominal();
    return {p.S0, p.E0, p.I0, p.N - p.S0 - p.E0 - p.I0};
}

} // namespace

TEST_CASE("seasonal transmission rate")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ut(-3.0, 3.0);
    for (int k = 0; k < 20; ++k) {
        CHECK(beta_at(ut(rng), 375.0, 0.0, 0.0) == 375.0);
    }
    CHECK(std::abs(beta_at(0.25, 375.0, 0.02, -0.02) - 375.0 * (1.0 - 0.02)) < 1e-12 * 375.0);

    // Amplitude/phase form and the cos/sin form describe the same curve.
    const double beta1 = 0.05, phase = 0.1;
    const auto [a1, b1] = seasonal_coefficients(beta1, phase);
    for (int k = 0; k < 100; ++k) {
        const double t        = ut(rng);
        const double expected = 375.0 * (1.0 + beta1 * std::cos(2.0 * std::numbers::pi * (t - phase)));
        CHECK(rel_diff(beta_at(t, 375.0, a1, b1), expected) < 1e-12);
        CHECK(std::abs(beta_at(t + 1.0, 375.0, a1, b1) - beta_at(t, 375.0, a1, b1)) < 1e-12 * 375.0);
    }
}

TEST_CASE("vector field: equilibrium, conservation and independent oracle")
{
    auto p = SeirsParameters::nominal();
    CHECK(vector_field(0.3, Vector4(p.N, 0, 0, 0), p).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        Vector4 x(u(rng), u(rng), u(rng), u(rng));
        x *= p.N / x.sum();
        const double t = 5.0 * u(rng);
        CHECK(std::abs(vector_field(t, x, p).sum()) < 1e-9 * p.N / p.P + 1e-6);
    }

    const Eigen::VectorXd theta = p.to_vector();
    for (double t : {0.0, 0.13, 0.5, 2.71}) {
        const Vector4 x  = nominal_x0();
        const Vector4 g  = vector_field(t, x, p);
        const Eigen::Vector4d r = reference_seirs_rhs(t, x, theta);
        for (int i = 0; i < 4; ++i) {
            CHECK(rel_diff(g[i], r[i]) < 1e-10);
        }
        // The ModelSystem entry point agrees with the free function.
        SeirsModel model;
        Eigen::VectorXd dx(4);
        model.vector_field(t, Eigen::VectorXd(x), theta, dx);
        CHECK((dx - Eigen::VectorXd(g)).norm() == 0.0);
    }
}

TEST_CASE("analytic jacobians")
{
    const auto p      = SeirsParameters::nominal();
    const double t    = 0.37;
    const Vector4 x(2.5e5, 1200.0, 1500.0, 7.473e5);
    const auto jac    = jacobians(t, x, p);
    const double c    = std::cos(2.0 * std::numbers::pi * t);
    const double sixn = x[0] * x[2] / p.N;

    CHECK(rel_diff(jac.param(0, param::A1), -p.beta0 * c * sixn) < 1e-14);
    CHECK(rel_diff(jac.param(1, param::A1), p.beta0 * c * sixn) < 1e-14);
    CHECK(jac.param(2, param::A1) == 0.0);
    CHECK(jac.param(3, param::A1) == 0.0);
    CHECK(rel_diff(jac.state(2, 1), 1.0 / p.M) < 1e-15);

    // Central differences of the independent RHS.
    const Eigen::VectorXd theta = p.to_vector();
    for (int k = 0; k < 4; ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
        Eigen::Vector4d xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const Eigen::Vector4d fd = (reference_seirs_rhs(t, xp, theta) - reference_seirs_rhs(t, xm, theta)) / (2 * h);
        for (int i = 0; i < 4; ++i) {
            if (std::abs(jac.state(i, k)) > 1e-8) {
                CHECK(rel_diff(jac.state(i, k), fd[i]) < 1e-6);
            } else {
                CHECK(std::abs(fd[i]) < 1e-6);
            }
        }
    }
    for (int k = 0; k < param::Count; ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(theta[k]));
        Eigen::VectorXd tp = theta, tm = theta;
        tp[k] += h;
        tm[k] -= h;
        const Eigen::Vector4d fd = (reference_seirs_rhs(t, x, tp) - reference_seirs_rhs(t, x, tm)) / (2 * h);
        for (int i = 0; i < 4; ++i) {
            if (std::abs(jac.param(i, k)) > 1e-8) {
                CHECK_MESSAGE(rel_diff(jac.param(i, k), fd[i]) < 1e-6, "row ", i, " param ", k);
            } else {
                CHECK(std::abs(fd[i]) < 1e-6);
            }
        }
    }
}

TEST_CASE("parameter validation names the offending field")
{
    auto p = SeirsParameters::nominal();
    CHECK_NOTHROW(p.validate());
    p.M = 0.0;
    try {
        p.validate();
        FAIL("expected InvalidArgument");
    }
    catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidArgument);
        CHECK(std::string(e.what()).find("M") != std::string::npos);
    }
    p     = SeirsParameters::nominal();
    p.S0  = p.N;
    CHECK_THROWS_AS(p.validate(), Error);
    CHECK(SeirsParameters::from_vector(SeirsParameters::nominal().to_vector()).to_vector() ==
          SeirsParameters::nominal().to_vector());
}

TEST_CASE("incidence without infection is zero")
{
    auto p = SeirsParameters::nominal();
    p.E0   = 0.0;
    p.I0   = 0.0;
    const auto z = incidence_series(p, default_grid(), {});
    REQUIRE(z.size() == 260);
    CHECK(z.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("incidence telescopes to the cumulative output")
{
    SeirsModel model;
    const auto theta = SeirsParameters::nominal().to_vector();
    const auto grid  = default_grid();
    const auto traj  = simulate(model, theta, grid, {});
    const auto z     = output_series(model, theta, grid, {});
    REQUIRE(traj.states.back().size() == 5);
    CHECK(rel_diff(z.sum(), traj.states.back()[4]) < 1e-12);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        CHECK(z[static_cast<Eigen::Index>(j)] == traj.states[j + 1][4] - traj.states[j][4]);
    }
}

TEST_CASE("incidence is stable under tolerance refinement")
{
    IntegratorConfig fine;
    fine.rel_tol /= 10;
    fine.abs_tol /= 10;
    const auto p = SeirsParameters::nominal();
    const auto a = incidence_series(p, default_grid(), {});
    const auto b = incidence_series(p, default_grid(), fine);
    CHECK((a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff() < 1e-5);
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        CHECK(std::abs(a[j] - b[j]) <= 1e-5 * std::abs(b[j]) + 1e-6);
    }
}

TEST_CASE("population is conserved and compartments stay nonnegative")
{
    SeirsModel model;
    const auto p    = SeirsParameters::nominal();
    const auto traj = simulate(model, p.to_vector(), default_grid(), {});
    for (const auto& x : traj.states) {
        CHECK(std::abs(x.head(4).sum() - p.N) / p.N < 1e-8);
        CHECK(x.head(4).minCoeff() >= -p.N * 1e-10);
    }
}

TEST_CASE("model metadata")
{
    SeirsModel model;
    CHECK(model.parameter_count() == 11);
    CHECK(model.parameter_names() ==
          std::vector<std::string>{"S0", "E0", "I0", "N", "L", "D", "M", "P", "beta0", "a1", "b1"});
    CHECK(model.state_names() == std::vector<std::string>{"S", "E", "I", "R"});
    CHECK(model.require_index("beta0") == 8);
    CHECK_FALSE(model.index_of("beta"));
    CHECK_THROWS_AS(model.require_index("beta"), Error);
    CHECK(model.parameters()[9].lower == -1.0);
    CHECK(model.parameters()[9].upper == 1.0);
}

TEST_CASE("final state is stable when the tolerances are halved")
{
    SeirsModel model;
    const auto theta = SeirsParameters::nominal().to_vector();
    IntegratorConfig coarse, fine;
    fine.rel_tol  = coarse.rel_tol / 2;
    fine.abs_tol  = coarse.abs_tol / 2;
    const auto a  = simulate(model, theta, default_grid(), coarse).states.back();
    const auto b  = simulate(model, theta, default_grid(), fine).states.back();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        CHECK_MESSAGE(std::abs(a[i] - b[i]) < coarse.rel_tol * std::abs(b[i]) + coarse.abs_tol, "component ", i);
    }
}
