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

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace identikit
{

namespace
{

namespace pt = boost::property_tree;

[[noreturn]] void config_error(const std::string& msg)
{
    throw Error(ErrorKind::ConfigError, msg);
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Values may carry a trailing "; comment" or "# comment".
std::string value_text(const std::string& raw)
{
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if ((raw[i] == ';' || raw[i] == '#') && (i == 0 || raw[i - 1] == ' ' || raw[i - 1] == '\t')) {
            return trim(raw.substr(0, i));
        }
    }
    return trim(raw);
}

// Plain number or a ratio a/b.
double parse_scalar(const std::string& text, const std::string& field)
{
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) {
            return io::parse_number(text);
        }
        const double num = io::parse_number(text.substr(0, slash));
        const double den = io::parse_number(text.substr(slash + 1));
        if (den == 0.0) {
            config_error(field + ": division by zero in '" + text + "'");
        }
        return num / den;
    }
    catch (const Error& e) {
        if (e.kind() == ErrorKind::ConfigError) {
            throw;
        }
        config_error(field + ": '" + text + "' is not a number");
    }
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& field)
{
    const std::string t = trim(text);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
        config_error(field + ": '" + text + "' is not a non-negative integer");
    }
    try {
        return std::stoull(t);
    }
    catch (const std::exception&) {
        config_error(field + ": '" + text + "' is out of range");
    }
}

// Known keys per section, used to reject typos.
const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"model", {"name"}},
        {"parameters", {}}, // checked against the model
        {"grid", {"t0", "span", "cadence"}},
        {"noise", {"sigma0_sq", "seed"}},
        {"select", {"j_min", "j_max", "core", "pool", "kappa_max", "alpha_max", "threads"}},
        {"integrator", {"rel_tol", "abs_tol", "max_steps", "max_step"}},
        {"fit", {"subset", "max_iterations", "gradient_tol", "step_tol", "function_tol"}},
        {"output", {"dir"}},
    };
    return keys;
}

} // namespace

std::size_t GridSpec::count() const
{
    if (!std::isfinite(t0) || !(span > 0) || !std::isfinite(span) || !(cadence > 0) || !std::isfinite(cadence)) {
        config_error("grid: t0 must be finite, span and cadence positive");
    }
    const double ratio = span / cadence;
    const double n     = std::round(ratio);
    if (n < 1 || std::abs(ratio - n) > 1e-6 * std::max(1.0, n)) {
        config_error("grid: span / cadence must be a positive integer (got " + io::format_number(ratio) + ")");
    }
    return static_cast<std::size_t>(n);
}

TimeGrid GridSpec::make() const
{
    return TimeGrid::uniform(t0, span, count());
}

GridSpec parse_grid_spec(const std::string& text)
{
    std::vector<std::string> parts;
    std::string part;
    std::istringstream is(text);
    while (std::getline(is, part, ':')) {
        parts.push_back(trim(part));
    }
    if (parts.size() != 3) {
        config_error("grid: expected t0:span:cadence, got '" + text + "'");
    }
    GridSpec g{parse_scalar(parts[0], "grid.t0"), parse_scalar(parts[1], "grid.span"),
               parse_scalar(parts[2], "grid.cadence")};
    g.count();
    return g;
}

std::vector<std::string> split_names(const std::string& text)
{
    std::vector<std::string> names;
    std::string name;
    std::istringstream is(text);
    while (std::getline(is, name, ',')) {
        name = trim(name);
        if (name.empty()) {
            config_error("empty name in list '" + text + "'");
        }
        names.push_back(name);
    }
    if (names.empty()) {
        config_error("empty name list");
    }
    return names;
}

std::unique_ptr<ModelSystem> make_model(const std::string& name)
{
    if (name == "seirs") {
        return std::make_unique<seirs::SeirsModel>();
    }
    config_error("model.name: unknown model '" + name + "' (available: seirs)");
}

Eigen::VectorXd model_nominal(const std::string& name)
{
    if (name == "seirs") {
        return seirs::SeirsParameters::nominal().to_vector();
    }
    config_error("model.name: unknown model '" + name + "' (available: seirs)");
}

RunConfig RunConfig::defaults()
{
    RunConfig c;
    c.nominal = model_nominal(c.model);
    return c;
}

void RunConfig::validate(const ModelSystem& m) const
{
    if (nominal.size() != static_cast<Eigen::Index>(m.parameter_count())) {
        config_error("parameters: expected " + std::to_string(m.parameter_count()) + " values");
    }
    try {
        m.validate(nominal);
    }
    catch (const Error& e) {
        config_error(std::string("parameters: ") + e.what());
    }
    grid.count();
    if (!(sigma0_sq >= 0) || !std::isfinite(sigma0_sq)) {
        config_error("noise.sigma0_sq: must be finite and >= 0");
    }
    auto check_names = [&](const std::vector<std::string>& names, const std::string& field) {
        std::set<std::string> seen;
        for (const auto& n : names) {
            if (!m.index_of(n)) {
                config_error(field + ": unknown parameter '" + n + "'");
            }
            if (!seen.insert(n).second) {
                config_error(field + ": duplicate parameter '" + n + "'");
            }
        }
    };
    check_names(core, "select.core");
    check_names(pool, "select.pool");
    for (const auto& n : core) {
        for (const auto& q : pool) {
            if (n == q) {
                config_error("select: '" + n + "' is in both core and pool");
            }
        }
    }
    check_names(fit_subset, "fit.subset");
    if (j_min < 1 || j_min > j_max || j_max > pool.size()) {
        config_error("select: need 1 <= j_min <= j_max <= |pool| (" + std::to_string(pool.size()) + ")");
    }
    if (!(thresholds.kappa_max >= 0) || !(thresholds.alpha_max >= 0)) {
        config_error("select: kappa_max and alpha_max must be >= 0");
    }
    try {
        integrator.validate();
    }
    catch (const Error& e) {
        config_error(std::string("integrator: ") + e.what());
    }
    if (fit_max_iterations < 1) {
        config_error("fit.max_iterations: must be >= 1");
    }
    if (!(fit_gradient_tol >= 0) || !(fit_step_tol >= 0) || !(fit_function_tol >= 0)) {
        config_error("fit: tolerances must be >= 0");
    }
}

RunConfig parse_run_config(std::istream& is, const std::string& source)
{
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(is, tree);
    }
    catch (const pt::ini_parser_error& e) {
        config_error(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }

    RunConfig c = RunConfig::defaults();
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            config_error(source + ": key '" + section + "' outside of any section");
        }
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) {
            config_error(source + ": unknown section [" + section + "]");
        }
        if (section == "parameters") {
            continue;
        }
        for (const auto& kv : body) {
            if (!it->second.count(kv.first)) {
                config_error(source + ": unknown key '" + kv.first + "' in [" + section + "]");
            }
        }
    }

    auto get = [&](const std::string& path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) {
            return value_text(*v);
        }
        return std::nullopt;
    };

    if (auto v = get("model.name")) {
        c.model   = *v;
        c.nominal = model_nominal(c.model);
    }
    const auto model = make_model(c.model);

    if (auto section = tree.get_child_optional("parameters")) {
        std::set<std::string> seen;
        for (const auto& [key, value] : *section) {
            const auto idx = model->index_of(key);
            if (!idx) {
                config_error(source + ": unknown parameter '" + key + "' in [parameters]");
            }
            c.nominal[static_cast<Eigen::Index>(*idx)] = parse_scalar(value_text(value.data()), "parameters." + key);
            seen.insert(key);
        }
        for (const auto& name : model->parameter_names()) {
            if (!seen.count(name)) {
                config_error(source + ": [parameters] is missing '" + name + "'");
            }
        }
    }

    if (auto v = get("grid.t0")) {
        c.grid.t0 = parse_scalar(*v, "grid.t0");
    }
    if (auto v = get("grid.span")) {
        c.grid.span = parse_scalar(*v, "grid.span");
    }
    if (auto v = get("grid.cadence")) {
        c.grid.cadence = parse_scalar(*v, "grid.cadence");
    }
    if (auto v = get("noise.sigma0_sq")) {
        c.sigma0_sq = parse_scalar(*v, "noise.sigma0_sq");
    }
    if (auto v = get("noise.seed")) {
        c.seed = parse_unsigned(*v, "noise.seed");
    }
    if (auto v = get("select.j_min")) {
        c.j_min = parse_unsigned(*v, "select.j_min");
    }
    if (auto v = get("select.j_max")) {
        c.j_max = parse_unsigned(*v, "select.j_max");
    }
    if (auto v = get("select.core")) {
        c.core = split_names(*v);
    }
    if (auto v = get("select.pool")) {
        c.pool = split_names(*v);
    }
    if (auto v = get("select.kappa_max")) {
        c.thresholds.kappa_max = parse_scalar(*v, "select.kappa_max");
    }
    if (auto v = get("select.alpha_max")) {
        c.thresholds.alpha_max = parse_scalar(*v, "select.alpha_max");
    }
    if (auto v = get("select.threads")) {
        c.threads = static_cast<unsigned>(parse_unsigned(*v, "select.threads"));
    }
    if (auto v = get("integrator.rel_tol")) {
        c.integrator.rel_tol = parse_scalar(*v, "integrator.rel_tol");
    }
    if (auto v = get("integrator.abs_tol")) {
        c.integrator.abs_tol = parse_scalar(*v, "integrator.abs_tol");
    }
    if (auto v = get("integrator.max_steps")) {
        c.integrator.max_steps = static_cast<long>(parse_unsigned(*v, "integrator.max_steps"));
    }
    if (auto v = get("integrator.max_step")) {
        c.integrator.max_step =
            (*v == "inf") ? std::numeric_limits<double>::infinity() : parse_scalar(*v, "integrator.max_step");
    }
    if (auto v = get("fit.subset")) {
        c.fit_subset = split_names(*v);
    }
    if (auto v = get("fit.max_iterations")) {
        c.fit_max_iterations = static_cast<int>(parse_unsigned(*v, "fit.max_iterations"));
    }
    if (auto v = get("fit.gradient_tol")) {
        c.fit_gradient_tol = parse_scalar(*v, "fit.gradient_tol");
    }
    if (auto v = get("fit.step_tol")) {
        c.fit_step_tol = parse_scalar(*v, "fit.step_tol");
    }
    if (auto v = get("fit.function_tol")) {
        c.fit_function_tol = parse_scalar(*v, "fit.function_tol");
    }
    if (auto v = get("output.dir")) {
        c.output_dir = *v;
    }

    try {
        c.validate(*model);
    }
    catch (const Error& e) {
        config_error(source + ": " + e.what());
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) {
        config_error("cannot open config file " + path.string());
    }
    return parse_run_config(is, path.string());
}

std::string describe_defaults()
{
    const RunConfig c = RunConfig::defaults();
    const auto model  = make_model(c.model);
    auto join         = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) {
            s += (s.empty() ? "" : ",") + x;
        }
        return s;
    };
    std::ostringstream os;
    os << "Config file (INI) keys and defaults:\n"
       << "  [model]       name=" << c.model << "\n"
       << "  [parameters]  all-or-nothing; defaults:";
    const auto names = model->parameter_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        os << (i % 4 == 0 ? "\n                  " : " ") << names[i] << '='
           << io::format_number(c.nominal[static_cast<Eigen::Index>(i)]);
    }
    os << "\n"
       << "  [grid]        t0=0 span=5 cadence=1/52   (years; n = span/cadence = " << c.grid.count() << ")\n"
       << "  [noise]       sigma0_sq=" << io::format_number(c.sigma0_sq) << " seed=" << c.seed << "\n"
       << "  [select]      j_min=" << c.j_min << " j_max=" << c.j_max << " core=" << join(c.core)
       << "\n                pool=" << join(c.pool) << "\n                kappa_max="
       << io::format_number(c.thresholds.kappa_max) << " alpha_max=" << io::format_number(c.thresholds.alpha_max)
       << " threads=0 (all cores)\n"
       << "  [integrator]  rel_tol=" << io::format_number(c.integrator.rel_tol)
       << " abs_tol=" << io::format_number(c.integrator.abs_tol) << " max_steps=" << c.integrator.max_steps
       << " max_step=inf\n"
       << "  [fit]         subset=" << join(c.fit_subset) << " max_iterations=" << c.fit_max_iterations
       << "\n                gradient_tol=" << io::format_number(c.fit_gradient_tol)
       << " step_tol=" << io::format_number(c.fit_step_tol)
       << " function_tol=" << io::format_number(c.fit_function_tol) << "\n"
       << "  [output]      dir=" << c.output_dir.string() << "\n";
    return os.str();
}

} // namespace identikit
