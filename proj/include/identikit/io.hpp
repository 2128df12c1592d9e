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
#ifndef IDENTIKIT_IO_HPP
#define IDENTIKIT_IO_HPP

#include "identikit/model.hpp"
#include "identikit/ode.hpp"
#include "identikit/ols.hpp"
#include "identikit/subset_search.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace identikit::io
{

/// 17 significant digits; parses back to the identical double.
std::string format_number(double value);

/// Strict parse of a whole field; throws Error{DataParseError}.
double parse_number(const std::string& field);

/// `t,y` header, one observation per line.
void write_dataset_csv(const std::filesystem::path& path, const DataSet& data);
/// Times must be strictly increasing and after t0.
DataSet read_dataset_csv(const std::filesystem::path& path, double t0);

/// `t,<state names>` rows at t0 and every grid point.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory,
                          const std::vector<std::string>& state_names);
/// `t,z` rows.
void write_series_csv(const std::filesystem::path& path, const std::vector<double>& times,
                      const Eigen::VectorXd& values, const std::string& column = "z");

/// subset,p,rank_ok,kappa,alpha,cv_1..cv_p,status
void write_subset_reports_csv(const std::filesystem::path& path, const std::vector<SubsetReport>& reports);
/// kappa,alpha for every full-rank report.
void write_scatter_csv(const std::filesystem::path& path, const std::vector<SubsetReport>& reports);

/// t,y,z,r
void write_residuals_csv(const std::filesystem::path& path, const DataSet& data, const FitResult& result);
/// Key/value JSON document with the estimate table and diagnostics.
std::string fit_report_json(const FitResult& result, const ResidualSummary& diagnostics, const DataSet& data);

/// Fixed-width estimate / S.E. / C.V. table.
void print_fit_table(std::ostream& os, const FitResult& result);

} // namespace identikit::io

#endif // IDENTIKIT_IO_HPP
