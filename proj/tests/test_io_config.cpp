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
#include "identikit/config.hpp"
#include "identikit/error.hpp"
#include "identikit/io.hpp"
#include "identikit/seirs.hpp"
#include "identikit/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace identikit;
namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "identikit_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void write(const fs::path& p, const std::string& text)
{
    std::ofstream os(p, std::ios::binary);
    os << text;
}

ErrorKind kind_of(const std::function<void()>& fn)
{
    try {
        fn();
    }
    catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvalidArgument;
}

std::string message_of(const std::function<void()>& fn)
{
    try {
        fn();
    }
    catch (const Error& e) {
        return e.what();
    }
    return {};
}

RunConfig parse(const std::string& text)
{
    std::istringstream is(text);
    return parse_run_config(is, "test.ini");
}

} // namespace

TEST_CASE("numbers round-trip at full precision")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> ex(-300, 300);
    for (int k = 0; k < 5000; ++k) {
        const double x = std::ldexp(mant(rng), ex(rng));
        CHECK(io::parse_number(io::format_number(x)) == x);
    }
    CHECK(io::format_number(0.1) == "0.10000000000000001");
    CHECK(io::format_number(260.0) == "260");
    CHECK(io::parse_number(" 1e-3 ") == 1e-3);
    CHECK(io::parse_number("+2.5") == 2.5);
    for (const char* bad : {"", "abc", "1.2.3", "1,5", "12x", "--1"}) {
        CHECK(kind_of([&] { io::parse_number(bad); }) == ErrorKind::DataParseError);
    }
}

TEST_CASE("data set CSV round trip")
{
    const seirs::SeirsModel model;
    const auto data = generate(model, seirs::SeirsParameters::nominal().to_vector(), seirs::default_grid(),
                               {std::sqrt(500.0), 42}, {});
    const auto path = scratch("data.csv");
    io::write_dataset_csv(path, data);
    const auto back = io::read_dataset_csv(path, 0.0);
    CHECK(back.values == data.values);
    CHECK(back.grid.points() == data.grid.points());

    const auto text = slurp(path);
    CHECK(text.rfind("t,y\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 261);
}

TEST_CASE("malformed data files report the line")
{
    const auto path = scratch("bad.csv");
    write(path, "t,y\n0.1,5\n0.2,oops\n");
    CHECK(kind_of([&] { io::read_dataset_csv(path, 0.0); }) == ErrorKind::DataParseError);
    CHECK(message_of([&] { io::read_dataset_csv(path, 0.0); }).find(":3:") != std::string::npos);

    write(path, "time,value\n0.1,5\n");
    CHECK(kind_of([&] { io::read_dataset_csv(path, 0.0); }) == ErrorKind::DataParseError);
    write(path, "t,y\n0.1,5,7\n");
    CHECK(kind_of([&] { io::read_dataset_csv(path, 0.0); }) == ErrorKind::DataParseError);
    write(path, "t,y\n0.2,5\n0.1,7\n");
    CHECK(kind_of([&] { io::read_dataset_csv(path, 0.0); }) == ErrorKind::DataParseError);
    write(path, "t,y\n");
    CHECK(kind_of([&] { io::read_dataset_csv(path, 0.0); }) == ErrorKind::DataParseError);
    CHECK(kind_of([&] { io::read_dataset_csv(scratch("missing.csv"), 0.0); }) == ErrorKind::DataParseError);

    // CRLF line endings and blank lines are tolerated.
    write(path, "t,y\r\n0.5,1.25\r\n\r\n1,2\r\n");
    const auto ok = io::read_dataset_csv(path, 0.0);
    CHECK(ok.values.size() == 2);
    CHECK(ok.values[0] == 1.25);
}

TEST_CASE("subset report CSV layout")
{
    SubsetReport good;
    good.subset.active = {"L", "beta0"};
    good.p             = 2;
    good.rank_ok       = true;
    good.rank          = 2;
    good.kappa         = 12.5;
    good.score         = 0.25;
    good.cv            = Eigen::Vector2d(0.1, -0.2);
    good.status        = "ok";
    SubsetReport bad;
    bad.subset.active = {"S0", "beta0"};
    bad.p             = 2;
    bad.status        = "StepLimitExceeded: too many steps, really";
    const auto path   = scratch("subsets.csv");
    io::write_subset_reports_csv(path, {good, bad});
    CHECK(slurp(path) == "subset,p,rank_ok,kappa,alpha,cv_1,cv_2,status\n"
                         "L;beta0,2,true,12.5,0.25,0.10000000000000001,-0.20000000000000001,ok\n"
                         "S0;beta0,2,false,,,,,StepLimitExceeded: too many steps; really\n");
    io::write_scatter_csv(scratch("scatter.csv"), {good, bad});
    CHECK(slurp(scratch("scatter.csv")) == "kappa,alpha\n12.5,0.25\n");
}

TEST_CASE("grid specifications")
{
    const auto g = parse_grid_spec("0:5:1/52");
    CHECK(g.count() == 260);
    CHECK(g.make().points() == seirs::default_grid().points());
    CHECK(parse_grid_spec("1990:2:0.5").count() == 4);
    CHECK(kind_of([] { parse_grid_spec("0:5"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_grid_spec("0:5:0.3"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_grid_spec("0:-1:0.5"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_grid_spec("0:5:1/0"); }) == ErrorKind::ConfigError);
}

TEST_CASE("empty config gives the documented defaults")
{
    const auto c = parse("");
    CHECK(c.model == "seirs");
    CHECK(c.nominal == seirs::SeirsParameters::nominal().to_vector());
    CHECK(c.grid.count() == 260);
    CHECK(c.sigma0_sq == 500.0);
    CHECK(c.seed == 42);
    CHECK(c.j_min == 1);
    CHECK(c.j_max == 5);
    CHECK(c.thresholds.kappa_max == 1e11);
    CHECK(c.thresholds.alpha_max == 1.0);
    CHECK(c.fit_subset == std::vector<std::string>{"L", "beta0", "a1", "b1"});
    CHECK(c.integrator.rel_tol == 1e-8);
    CHECK_FALSE(describe_defaults().empty());
}

TEST_CASE("config sections override defaults")
{
    const auto c = parse("# comment\n"
                         "[model]\nname = seirs\n"
                         "[parameters]\nS0=1e5\nE0=0\nI0=0\nN=1e6\nL=4\nD=0.01\nM=0.005\nP=70\n"
                         "beta0=300\na1=0.01\nb1=-0.03\n"
                         "[grid]\nt0=1\nspan=2\ncadence=1/52\n"
                         "[noise]\nsigma0_sq=100\nseed=7\n"
                         "[select]\nj_min=2\nj_max=3\ncore=beta0\npool=L, D ,M\nkappa_max=1e9\nalpha_max=0.5\n"
                         "threads=2\n"
                         "[integrator]\nrel_tol=1e-9\nabs_tol=1e-11\nmax_steps=1000\nmax_step=inf\n"
                         "[fit]\nsubset=L,D\nmax_iterations=50\ngradient_tol=1e-6\nstep_tol=1e-9\nfunction_tol=1e-10\n"
                         "[output]\ndir=results\n");
    CHECK(c.nominal[1] == 0.0);
    CHECK(c.nominal[10] == -0.03);
    CHECK(c.grid.t0 == 1.0);
    CHECK(c.grid.count() == 104);
    CHECK(c.seed == 7);
    CHECK(c.pool == std::vector<std::string>{"L", "D", "M"});
    CHECK(c.core == std::vector<std::string>{"beta0"});
    CHECK(c.threads == 2);
    CHECK(c.integrator.max_steps == 1000);
    CHECK(c.fit_max_iterations == 50);
    CHECK(c.output_dir == fs::path("results"));
}

TEST_CASE("config errors name the field")
{
    CHECK(message_of([] { parse("[parameters]\nS0=1e5\nE0=0\nI0=0\nN=1e6\nL=4\nD=0.01\nM=0.005\nP=70\na1=0\nb1=0\n"); })
              .find("beta0") != std::string::npos);
    CHECK(message_of([] { parse("[grid]\nspam=1\n"); }).find("spam") != std::string::npos);
    CHECK(message_of([] { parse("[gird]\nspan=1\n"); }).find("gird") != std::string::npos);
    CHECK(message_of([] { parse("[noise]\nseed=-4\n"); }).find("noise.seed") != std::string::npos);
    CHECK(message_of([] { parse("[fit]\nsubset=L,beta\n"); }).find("beta") != std::string::npos);
    CHECK(message_of([] { parse("[select]\nj_max=9\n"); }).find("j_max") != std::string::npos);
    CHECK(message_of([] { parse("[model]\nname=sir\n"); }).find("sir") != std::string::npos);
    CHECK(message_of([] { parse("[parameters]\nS0=2e6\nE0=0\nI0=0\nN=1e6\nL=4\nD=0.01\nM=0.005\nP=70\n"
                                "beta0=1\na1=0\nb1=0\n"); })
              .find("S0") != std::string::npos);
    // Syntax errors carry the line number.
    CHECK(message_of([] { parse("[grid]\nspan=1\n[broken\n"); }).find("test.ini:3") != std::string::npos);
    CHECK(kind_of([] { parse("[grid]\nspan=abc\n"); }) == ErrorKind::ConfigError);
}

TEST_CASE("the shipped example config spells out the defaults")
{
    const auto c = load_run_config(fs::path(IDENTIKIT_SOURCE_DIR) / "docs" / "example.ini");
    const auto d = RunConfig::defaults();
    CHECK(c.nominal == d.nominal);
    CHECK(c.grid.make().points() == d.grid.make().points());
    CHECK(c.sigma0_sq == d.sigma0_sq);
    CHECK(c.seed == d.seed);
    CHECK(c.core == d.core);
    CHECK(c.pool == d.pool);
    CHECK(c.fit_subset == d.fit_subset);
    CHECK(c.integrator.max_step == d.integrator.max_step);
    CHECK(c.output_dir == d.output_dir);
}

TEST_CASE("inline comments are stripped")
{
    const auto c = parse("[noise]\nseed = 9 ; the seed\nsigma0_sq = 4 # variance\n");
    CHECK(c.seed == 9);
    CHECK(c.sigma0_sq == 4.0);
}
