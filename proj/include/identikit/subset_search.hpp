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
#ifndef IDENTIKIT_SUBSET_SEARCH_HPP
#define IDENTIKIT_SUBSET_SEARCH_HPP

#include "identikit/model.hpp"
#include "identikit/ode.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace identikit
{

struct SubsetReport {
    SubsetSpec subset;
    std::size_t p    = 0;
    bool rank_ok     = false;
    std::size_t rank = 0;
    std::optional<double> kappa;
    std::optional<double> score;
    std::optional<Eigen::VectorXd> cv;
    std::string status; // "ok", "rank_deficient", or the failure message
};

/// Everything a sweep needs besides the subsets themselves.
struct SelectionContext {
    const ModelSystem* model = nullptr;
    Eigen::VectorXd nominal; // full parameter vector
    TimeGrid grid;
    IntegratorConfig integrator;
    double sigma0_sq = 500.0;
    std::optional<double> rank_tolerance; // absolute; default s_1 max(n,p) eps
    unsigned threads = 0;                 // 0 = hardware concurrency
};

/// All C(|pool|, j) choices of j pool names, each followed by `core`.
/// Names inside a subset follow pool order; the list is in lexicographic
/// order of pool positions. Throws Error{InvalidSubsetSize}.
std::vector<SubsetSpec> enumerate_subsets(std::size_t j, const std::vector<std::string>& core,
                                          const std::vector<std::string>& pool, const ModelSystem& model,
                                          const Eigen::VectorXd& nominal);

struct RankFilterResult {
    std::vector<SubsetSpec> retained;
    std::vector<SubsetReport> rejected; // rank deficient or failed, with reason
};

RankFilterResult full_rank_filter(const std::vector<SubsetSpec>& subsets, const SelectionContext& ctx);

/// Reports for subsets that passed the rank filter, sorted ascending by
/// alpha, then kappa, then subset label.
std::vector<SubsetReport> score_subsets(const std::vector<SubsetSpec>& retained, const SelectionContext& ctx);

/// Rank test and scoring in one pass per subset. Full-rank reports come
/// first in score order, followed by the rejected ones in input order.
std::vector<SubsetReport> evaluate_subsets(const std::vector<SubsetSpec>& subsets, const SelectionContext& ctx);

/// Single-subset evaluation used by the sweeps.
SubsetReport evaluate_subset(const SubsetSpec& subset, const SelectionContext& ctx);

void sort_reports(std::vector<SubsetReport>& reports);

struct FeasibilityThresholds {
    double kappa_max = 1e11;
    double alpha_max = 1.0;
};

/// Full-rank reports with kappa <= kappa_max and alpha <= alpha_max.
std::vector<SubsetReport> feasibility_cut(const std::vector<SubsetReport>& reports,
                                          const FeasibilityThresholds& thresholds);

} // namespace identikit

#endif // IDENTIKIT_SUBSET_SEARCH_HPP
