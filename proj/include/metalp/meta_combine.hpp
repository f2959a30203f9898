#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace metalp {

enum class CombineMethod { fixed, dl, reml };

const char* to_string(CombineMethod m);
CombineMethod combine_method_from_string(const std::string& s);

// One partition's contribution to the meta-analysis of a single
// (variable, order) pair. n_eff = 0 marks a degenerate partition; it
// gets weight zero and does not count toward k_eff.
struct PartitionEstimate {
    int partition_id = 0;
    double lp = 0.0;
    long n_eff = 0;
};

// Combined asymptotic confidence distribution N(mean, variance) plus the
// heterogeneity diagnostics that produced it.
struct CombinedCD {
    double mean = 0.0;
    double variance = 0.0;
    CombineMethod method = CombineMethod::fixed;
    double tau2 = 0.0;
    double q = 0.0;   // pre-correction Cochran Q (weights n_l, fixed-effects mean)
    long k_eff = 0;
    double i2_pre = 0.0;
    std::optional<double> i2_post;  // random-effects methods only
    bool k_warning = false;         // k_eff < 2: heterogeneity unidentifiable
};

// Inverse-variance (weights n_l) combination assuming one common LP.
// Throws "no usable partitions" when every estimate is degenerate.
CombinedCD combine_fixed(std::vector<PartitionEstimate> estimates);

// Q = sum_l w_l (lp_l - mean)^2 over non-degenerate partitions.
double cochran_q(std::span<const PartitionEstimate> estimates, double combined_mean,
                 std::span<const double> weights);

// (Q - (k-1))/Q truncated at zero, as a fraction in [0,1].
double i_squared(double q, long k_eff);

// DerSimonian-Laird moment estimator of the between-partition variance.
// Returns 0 when fewer than two usable partitions exist.
double tau2_dl(std::span<const PartitionEstimate> estimates);

// Iterative REML estimate initialized at tau2_dl; stops when successive
// values differ by at most tol, truncates the final value at zero.
// Throws "REML did not converge" after max_iter iterations.
double tau2_reml(std::span<const PartitionEstimate> estimates, double tol = 1e-10,
                 long max_iter = 100000);

// Random-effects combination with weights (tau2 + 1/n_l)^-1. i2_post is
// computed from the shrunken per-partition estimates.
CombinedCD combine_random(std::vector<PartitionEstimate> estimates, double tau2,
                          CombineMethod tag);

// Full reducer for one (variable, order): fixed combine + diagnostics,
// then the tau2-regularized combine when method is dl or reml.
CombinedCD meta_combine(std::vector<PartitionEstimate> estimates, CombineMethod method);

// Central confidence interval mean +/- z_(1+level)/2 * sqrt(variance).
std::pair<double, double> cd_interval(const CombinedCD& cd, double level);

// H(c): CD mass on (-inf, c], the one-sided p-value for H0: LP <= c.
double cd_pvalue(const CombinedCD& cd, double null_boundary);

}  // namespace metalp
