#pragma once

#include <span>
#include <string>
#include <vector>

#include "metalp/mixed_column.hpp"

namespace metalp {

// Orthonormal score matrix for one variable: columns are polynomials of
// degree 1..m_effective in the mid-distribution rank, each centered to
// sample mean 0, scaled to sample sd 1 (n-1 denominator), and pairwise
// uncorrelated. Sign convention: positive leading coefficient, so the
// first column is increasing in x. m_effective = min(m_requested,
// distinct_count - 1); truncated is set when the cap was hit.
struct ScoreBasis {
    int m_effective = 0;
    long distinct_count = 0;
    bool truncated = false;
    std::vector<std::vector<double>> columns;  // [j][row], j = 0..m_effective-1
};

// Per-(variable, partition) mapper output. lp[j-1] is the Pearson
// correlation between the j-th score column and the response; n_eff is
// the row count remaining after missing-value removal. A degenerate
// summary (constant x or constant y after removal) carries lp = 0 and
// n_eff = 0 and is skipped by the reducer.
struct SubpopSummary {
    int partition_id = 0;
    std::string variable;
    std::vector<double> lp;
    long n_eff = 0;
    bool degenerate = false;
    bool truncated = false;
};

// Empirical mid-distribution transform u_i = (avgrank(x_i) - 0.5) / n,
// ties resolved by average rank. Throws on empty input.
std::vector<double> mid_distribution_ranks(std::span<const double> x);

ScoreBasis build_score_basis(std::span<const double> x, int m_requested);

// Standardized score for a two-valued response: y=0 -> -sqrt(p/(1-p)),
// y=1 -> sqrt((1-p)/p) where p is the fraction of the larger value.
// Throws "degenerate response" when y is constant.
std::vector<double> binary_t1(std::span<const double> y);

// Full mapper for one variable against a binary response. Rows where
// either value is missing are removed listwise for this variable only.
SubpopSummary lp_statistics(std::span<const double> x, std::span<const double> y,
                            int m_requested);
SubpopSummary lp_statistics(const MixedColumn& x, const MixedColumn& y, int m_requested);

// Pearson correlation, n-1 conventions, result clamped to [-1, 1].
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace metalp
