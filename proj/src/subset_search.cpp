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
#include "identikit/subset_search.hpp"
#include "identikit/error.hpp"
#include "identikit/linalg.hpp"
#include "identikit/sensitivity.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <numeric>

namespace identikit
{

std::vector<SubsetSpec> enumerate_subsets(std::size_t j, const std::vector<std::string>& core,
                                          const std::vector<std::string>& pool, const ModelSystem& model,
                                          const Eigen::VectorXd& nominal)
{
    if (j < 1 || j > pool.size()) {
        throw Error(ErrorKind::InvalidSubsetSize,
                    "subset size j=" + std::to_string(j) + " outside 1.." + std::to_string(pool.size()));
    }
    // Lexicographic walk over index combinations i_0 < i_1 < ... < i_{j-1}.
    std::vector<std::size_t> pick(j);
    std::iota(pick.begin(), pick.end(), 0);
    std::vector<SubsetSpec> out;
    for (;;) {
        std::vector<std::string> active;
        for (auto i : pick) {
            active.push_back(pool[i]);
        }
        active.insert(active.end(), core.begin(), core.end());
        out.push_back(SubsetSpec::from_active(model, std::move(active), nominal));

        std::size_t k = j;
        while (k > 0 && pick[k - 1] == pool.size() - j + (k - 1)) {
            --k;
        }
        if (k == 0) {
            break;
        }
        ++pick[k - 1];
        for (std::size_t m = k; m < j; ++m) {
            pick[m] = pick[m - 1] + 1;
        }
    }
    return out;
}

SubsetReport evaluate_subset(const SubsetSpec& subset, const SelectionContext& ctx)
{
    const ModelSystem& model = *ctx.model;
    SubsetReport rep;
    rep.subset = subset;
    rep.p      = subset.active.size();
    try {
        const Eigen::VectorXd active = subset.active_values(model, ctx.nominal);
        const Eigen::VectorXd full   = subset.assemble(model, active);
        const auto chi               = output_sensitivities(model, full, subset.active, ctx.grid, ctx.integrator);
        const auto n                 = static_cast<std::size_t>(chi.rows());
        const SvdResult dec          = svd(chi.values);
        rep.rank    = numerical_rank(dec.singular_values, n, rep.p, ctx.rank_tolerance);
        rep.rank_ok = rep.rank == rep.p;
        if (!rep.rank_ok) {
            rep.status = "rank_deficient";
            return rep;
        }
        const auto cov   = covariance(ctx.sigma0_sq, dec, n, ctx.rank_tolerance);
        const auto score = uncertainty_score(active, cov);
        rep.kappa        = condition_number(dec.singular_values, n, ctx.rank_tolerance);
        rep.score        = score.score;
        rep.cv           = score.cv;
        rep.status       = "ok";
    }
    catch (const Error& e) {
        rep.rank_ok = false;
        rep.kappa.reset();
        rep.score.reset();
        rep.cv.reset();
        rep.status = e.what();
    }
    return rep;
}

namespace
{

std::vector<SubsetReport> evaluate_all(const std::vector<SubsetSpec>& subsets, const SelectionContext& ctx)
{
    if (ctx.model == nullptr) {
        throw Error(ErrorKind::InvalidArgument, "selection context has no model");
    }
    std::vector<SubsetReport> out(subsets.size());
    detail::parallel_for(subsets.size(), ctx.threads,
                         [&](std::size_t i) { out[i] = evaluate_subset(subsets[i], ctx); });
    return out;
}

bool report_less(const SubsetReport& a, const SubsetReport& b)
{
    if (a.rank_ok != b.rank_ok) {
        return a.rank_ok;
    }
    if (!a.rank_ok) {
        return false;
    }
    if (*a.score != *b.score) {
        return *a.score < *b.score;
    }
    if (*a.kappa != *b.kappa) {
        return *a.kappa < *b.kappa;
    }
    return a.subset.label() < b.subset.label();
}

} // namespace

void sort_reports(std::vector<SubsetReport>& reports)
{
    std::stable_sort(reports.begin(), reports.end(), report_less);
}

RankFilterResult full_rank_filter(const std::vector<SubsetSpec>& subsets, const SelectionContext& ctx)
{
    RankFilterResult out;
    for (auto& rep : evaluate_all(subsets, ctx)) {
        if (rep.rank_ok) {
            out.retained.push_back(rep.subset);
        } else {
            out.rejected.push_back(std::move(rep));
        }
    }
    return out;
}

std::vector<SubsetReport> score_subsets(const std::vector<SubsetSpec>& retained, const SelectionContext& ctx)
{
    auto reports = evaluate_all(retained, ctx);
    sort_reports(reports);
    return reports;
}

std::vector<SubsetReport> evaluate_subsets(const std::vector<SubsetSpec>& subsets, const SelectionContext& ctx)
{
    auto reports = evaluate_all(subsets, ctx);
    sort_reports(reports);
    return reports;
}

std::vector<SubsetReport> feasibility_cut(const std::vector<SubsetReport>& reports,
                                          const FeasibilityThresholds& thresholds)
{
    if (!(thresholds.kappa_max >= 0) || !(thresholds.alpha_max >= 0)) {
        throw Error(ErrorKind::InvalidArgument, "feasibility thresholds must be non-negative");
    }
    std::vector<SubsetReport> out;
    for (const auto& r : reports) {
        if (r.rank_ok && *r.kappa <= thresholds.kappa_max && *r.score <= thresholds.alpha_max) {
            out.push_back(r);
        }
    }
    return out;
}

} // namespace identikit
