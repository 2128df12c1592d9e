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
#include "identikit/sensitivity.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace identikit;
using namespace identikit::seirs;

namespace
{

const std::vector<std::string> core{"beta0", "a1", "b1"};

// Entry-wise comparison restricted to entries that matter for the column.
void check_entrywise(const Eigen::MatrixXd& fwd, const Eigen::MatrixXd& fd, double tol)
{
    for (Eigen::Index k = 0; k < fwd.cols(); ++k) {
        const double floor = 1e-6 * fwd.col(k).norm();
        int bad            = 0;
        for (Eigen::Index j = 0; j < fwd.rows(); ++j) {
            if (std::abs(fwd(j, k)) > floor && testing::rel_diff(fwd(j, k), fd(j, k)) >= tol) {
                ++bad;
            }
        }
        CHECK_MESSAGE(bad == 0, "column ", k);
    }
}

} // namespace

TEST_CASE("core columns match central finite differences entry by entry")
{
    SeirsModel model;
    const auto theta = SeirsParameters::nominal().to_vector();
    const auto grid  = default_grid();
    IntegratorConfig tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-12;
    const auto fwd = output_sensitivities(model, theta, core, grid, {});
    const auto fd  = finite_difference_sensitivities(model, theta, core, grid, tight, 1e-5);
    REQUIRE(fwd.rows() == 260);
    REQUIRE(fwd.cols() == 3);
    CHECK(fwd.names == core);
    check_entrywise(fwd.values, fd.values, 1e-4);
}

TEST_CASE("single-pool subsets agree with finite differences column-wise")
{
    SeirsModel model;
    const auto theta = SeirsParameters::nominal().to_vector();
    IntegratorConfig tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-12;
    for (const char* extra : {"L", "M", "P"}) {
        std::vector<std::string> active{extra};
        active.insert(active.end(), core.begin(), core.end());
        const auto fwd = output_sensitivities(model, theta, active, default_grid(), {});
        const auto fd  = finite_difference_sensitivities(model, theta, active, default_grid(), tight, 1e-5);
        CHECK_MESSAGE(max_relative_column_discrepancy(fwd.values, fd.values) < 1e-3, extra);
    }
}

TEST_CASE("a parameter that enters nothing has a zero column")
{
    testing::DummyParameterModel model;
    Eigen::VectorXd theta(12);
    theta << SeirsParameters::nominal().to_vector(), 3.0;
    const std::vector<std::string> active{"dummy", "beta0"};
    const auto grid = TimeGrid::uniform(0.0, 1.0, 52);
    const auto fwd  = output_sensitivities(model, theta, active, grid, {});
    const auto fd   = finite_difference_sensitivities(model, theta, active, grid, {}, 1e-5);
    CHECK(fwd.values.col(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(fd.values.col(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(fwd.values.col(1).norm() > 0.0);
}

TEST_CASE("finite differences converge at second order")
{
    SeirsModel model;
    const auto theta = SeirsParameters::nominal().to_vector();
    const auto grid  = TimeGrid::uniform(0.0, 1.0, 52);
    IntegratorConfig tight;
    tight.rel_tol = 1e-13;
    tight.abs_tol = 1e-13;
    const std::vector<std::string> active{"L", "beta0", "a1"};
    const auto exact = output_sensitivities(model, theta, active, grid, tight).values;
    const auto fd1   = finite_difference_sensitivities(model, theta, active, grid, tight, 4e-3).values;
    const auto fd2   = finite_difference_sensitivities(model, theta, active, grid, tight, 2e-3).values;
    for (Eigen::Index k = 0; k < exact.cols(); ++k) {
        const double e1    = (fd1.col(k) - exact.col(k)).norm();
        const double e2    = (fd2.col(k) - exact.col(k)).norm();
        const double ratio = e1 / e2;
        CHECK_MESSAGE(ratio > 3.5, "column ", k, " ratio ", ratio);
        CHECK_MESSAGE(ratio < 4.5, "column ", k, " ratio ", ratio);
    }
}

TEST_CASE("columns do not depend on which other parameters are active")
{
    SeirsModel model;
    const auto theta = SeirsParameters::nominal().to_vector();
    const auto grid  = default_grid();
    const std::vector<std::string> a{"N", "L", "D", "beta0", "a1", "b1"};
    const std::vector<std::string> b{"L", "D", "M", "b1", "beta0"};
    const std::vector<std::string> both{"L", "D", "beta0", "b1"};
    const auto ca = output_sensitivities(model, theta, a, grid, {}).values;
    const auto cb = output_sensitivities(model, theta, b, grid, {}).values;
    const auto cx = output_sensitivities(model, theta, both, grid, {}).values;
    const int in_a[] = {1, 2, 3, 5};
    const int in_b[] = {0, 1, 4, 3};
    for (int k = 0; k < 4; ++k) {
        CHECK(testing::max_rel_diff(ca.col(in_a[k]), cx.col(k)) < 1e-9);
        CHECK(testing::max_rel_diff(cb.col(in_b[k]), cx.col(k)) < 1e-9);
    }
}

TEST_CASE("output from the sensitivity integration equals the plain output")
{
    SeirsModel model;
    const auto theta = SeirsParameters::nominal().to_vector();
    const auto grid  = default_grid();
    const auto both  = output_and_sensitivities(model, theta, {"M", "beta0"}, grid, {});
    const auto z     = output_series(model, theta, grid, {});
    CHECK(both.output == z);
    CHECK(both.chi.times == grid.points());
    CHECK(both.chi.theta == theta);
}

TEST_CASE("linear output model has exact sensitivities")
{
    testing::LinearOutputModel model;
    const Eigen::Vector4d theta(2.0, -1.0, 0.5, 3.0);
    const auto grid = TimeGrid::uniform(0.0, 2.0, 24);
    IntegratorConfig tight;
    tight.rel_tol  = 1e-12;
    tight.abs_tol  = 1e-12;
    const auto chi = output_sensitivities(model, theta, {"c1", "c2", "c3", "c4"}, grid, tight).values;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const Eigen::RowVector4d expected =
            testing::LinearOutputModel::basis_integral(grid.interval_start(j), grid.points()[j]);
        CHECK((chi.row(static_cast<Eigen::Index>(j)) - expected).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("unknown names are rejected")
{
    SeirsModel model;
    const auto theta = SeirsParameters::nominal().to_vector();
    try {
        output_sensitivities(model, theta, {"beta"}, default_grid(), {});
        FAIL("expected SubsetUnknownName");
    }
    catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SubsetUnknownName);
    }
    CHECK_THROWS_AS(output_sensitivities(model, theta, {"L", "L"}, default_grid(), {}), Error);
}

TEST_CASE("column discrepancy metric")
{
    Eigen::MatrixXd a(2, 2), b(2, 2);
    a << 1, 0, 0, 2;
    b << 1, 0, 0, 2.2;
    CHECK(max_relative_column_discrepancy(a, a) == 0.0);
    CHECK(max_relative_column_discrepancy(a, b) == doctest::Approx(0.2 / 2.2).epsilon(1e-12));
}
