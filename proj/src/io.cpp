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
#include "identikit/io.hpp"
#include "identikit/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace identikit::io
{

namespace
{

std::ofstream open_out(const std::filesystem::path& path)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    }
    return os;
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

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep)) {
        out.push_back(trim(field));
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

} // namespace

std::string format_number(double value)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    if (ec != std::errc{}) {
        throw Error(ErrorKind::InvalidArgument, "cannot format number");
    }
    return std::string(buf, end);
}

double parse_number(const std::string& field)
{
    const std::string f = trim(field);
    double value        = 0.0;
    const char* first   = f.data();
    const char* last    = f.data() + f.size();
    if (!f.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (f.empty() || ec != std::errc{} || ptr != last) {
        throw Error(ErrorKind::DataParseError, "'" + field + "' is not a number");
    }
    return value;
}

void write_dataset_csv(const std::filesystem::path& path, const DataSet& data)
{
    data.validate();
    auto os = open_out(path);
    os << "t,y\n";
    for (std::size_t j = 0; j < data.grid.size(); ++j) {
        os << format_number(data.grid.points()[j]) << ',' << format_number(data.values[static_cast<Eigen::Index>(j)])
           << '\n';
    }
}

DataSet read_dataset_csv(const std::filesystem::path& path, double t0)
{
    std::ifstream is(path);
    if (!is) {
        throw Error(ErrorKind::DataParseError, "cannot open " + path.string());
    }
    std::string line;
    std::size_t lineno = 0;
    bool header        = false;
    std::vector<double> times, values;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split(line, ',');
        if (!header) {
            if (fields.size() != 2 || fields[0] != "t" || fields[1] != "y") {
                throw Error(ErrorKind::DataParseError, path.string() + ":" + std::to_string(lineno) +
                                                           ": expected header 't,y'");
            }
            header = true;
            continue;
        }
        if (fields.size() != 2) {
            throw Error(ErrorKind::DataParseError,
                        path.string() + ":" + std::to_string(lineno) + ": expected 2 fields, got " +
                            std::to_string(fields.size()));
        }
        try {
            times.push_back(parse_number(fields[0]));
            values.push_back(parse_number(fields[1]));
        }
        catch (const Error& e) {
            throw Error(ErrorKind::DataParseError, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!header || times.empty()) {
        throw Error(ErrorKind::DataParseError, path.string() + ": no observations");
    }
    try {
        DataSet data{TimeGrid(t0, std::move(times)), Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())),
                     "file " + path.string()};
        data.validate();
        return data;
    }
    catch (const Error& e) {
        throw Error(ErrorKind::DataParseError, path.string() + ": " + e.what());
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory,
                          const std::vector<std::string>& state_names)
{
    auto os = open_out(path);
    os << 't';
    for (const auto& n : state_names) {
        os << ',' << n;
    }
    os << '\n';
    for (std::size_t j = 0; j < trajectory.times.size(); ++j) {
        os << format_number(trajectory.times[j]);
        for (std::size_t k = 0; k < state_names.size(); ++k) {
            os << ',' << format_number(trajectory.states[j][static_cast<Eigen::Index>(k)]);
        }
        os << '\n';
    }
}

void write_series_csv(const std::filesystem::path& path, const std::vector<double>& times,
                      const Eigen::VectorXd& values, const std::string& column)
{
    auto os = open_out(path);
    os << "t," << column << '\n';
    for (std::size_t j = 0; j < times.size(); ++j) {
        os << format_number(times[j]) << ',' << format_number(values[static_cast<Eigen::Index>(j)]) << '\n';
    }
}

void write_subset_reports_csv(const std::filesystem::path& path, const std::vector<SubsetReport>& reports)
{
    std::size_t width = 0;
    for (const auto& r : reports) {
        width = std::max(width, r.p);
    }
    auto os = open_out(path);
    os << "subset,p,rank_ok,kappa,alpha";
    for (std::size_t k = 1; k <= width; ++k) {
        os << ",cv_" << k;
    }
    os << ",status\n";
    for (const auto& r : reports) {
        os << r.subset.label() << ',' << r.p << ',' << (r.rank_ok ? "true" : "false") << ','
           << (r.kappa ? format_number(*r.kappa) : "") << ',' << (r.score ? format_number(*r.score) : "");
        for (std::size_t k = 0; k < width; ++k) {
            os << ',';
            if (r.cv && k < static_cast<std::size_t>(r.cv->size())) {
                os << format_number((*r.cv)[static_cast<Eigen::Index>(k)]);
            }
        }
        std::string status = r.status;
        for (auto& c : status) {
            if (c == ',' || c == '\n') {
                c = ';';
            }
        }
        os << ',' << status << '\n';
    }
}

void write_scatter_csv(const std::filesystem::path& path, const std::vector<SubsetReport>& reports)
{
    auto os = open_out(path);
    os << "kappa,alpha\n";
    for (const auto& r : reports) {
        if (r.rank_ok) {
            os << format_number(*r.kappa) << ',' << format_number(*r.score) << '\n';
        }
    }
}

void write_residuals_csv(const std::filesystem::path& path, const DataSet& data, const FitResult& result)
{
    auto os = open_out(path);
    os << "t,y,z,r\n";
    for (std::size_t j = 0; j < data.grid.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        os << format_number(data.grid.points()[j]) << ',' << format_number(data.values[i]) << ','
           << format_number(result.fitted[i]) << ',' << format_number(result.residuals[i]) << '\n';
    }
}

std::string fit_report_json(const FitResult& result, const ResidualSummary& diagnostics, const DataSet& data)
{
    using json = nlohmann::ordered_json;
    json doc;
    doc["data"]       = data.provenance;
    doc["n"]          = data.grid.size();
    doc["p"]          = result.names.size();
    doc["converged"]  = result.converged;
    doc["termination"] = result.termination;
    doc["iterations"] = result.iterations;
    doc["evaluations"] = result.evaluations;
    doc["objective"]  = result.objective;
    doc["sigma_hat_sq"] = result.sigma_hat_sq;
    doc["gradient_cosine"] = result.gradient_cosine;
    doc["kappa"] = result.kappa ? json(*result.kappa) : json(nullptr);
    doc["rank_deficient_at_solution"] = result.rank_deficient_at_solution;

    json params = json::array();
    for (std::size_t k = 0; k < result.names.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        json entry;
        entry["name"]     = result.names[k];
        entry["estimate"] = result.estimate[i];
        entry["se"]       = result.se.size() > i ? json(result.se[i]) : json(nullptr);
        entry["cv"]       = result.cv.size() > i ? json(result.cv[i]) : json(nullptr);
        params.push_back(entry);
    }
    doc["parameters"] = params;

    if (result.covariance) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < result.covariance->rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < result.covariance->cols(); ++c) {
                row.push_back((*result.covariance)(r, c));
            }
            rows.push_back(row);
        }
        doc["covariance"] = rows;
    } else {
        doc["covariance"] = nullptr;
    }

    doc["residual_diagnostics"] = {
        {"mean", diagnostics.mean},
        {"lag1_autocorrelation", diagnostics.lag1_autocorrelation},
        {"runs", diagnostics.runs},
        {"expected_runs", diagnostics.expected_runs},
        {"runs_z", diagnostics.runs_z},
    };
    doc["warnings"] = result.warnings;
    return doc.dump(2) + "\n";
}

void print_fit_table(std::ostream& os, const FitResult& result)
{
    const auto flags = os.flags();
    const auto prec  = os.precision();
    os << std::left << std::setw(8) << "" << std::right;
    for (const auto& n : result.names) {
        os << std::setw(12) << n;
    }
    os << '\n' << std::scientific << std::setprecision(2);
    auto row = [&](const char* label, const Eigen::VectorXd& v) {
        os << std::left << std::setw(8) << label << std::right;
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(result.names.size()); ++i) {
            if (i < v.size()) {
                os << std::setw(12) << v[i];
            } else {
                os << std::setw(12) << "-";
            }
        }
        os << '\n';
    };
    row("Est.", result.estimate);
    row("S.E.", result.se);
    row("C.V.", result.cv);
    os.flags(flags);
    os.precision(prec);
}

} // namespace identikit::io
