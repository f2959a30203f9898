#include "metalp/meta_combine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "metalp/dist.hpp"

namespace metalp {

namespace {

// Deterministic reduction order: ascending partition_id, degenerate
// entries dropped. Makes every combiner invariant to input permutation.
std::vector<PartitionEstimate> usable_sorted(std::vector<PartitionEstimate> estimates) {
    std::sort(estimates.begin(), estimates.end(),
              [](const PartitionEstimate& a, const PartitionEstimate& b) {
                  return a.partition_id < b.partition_id;
              });
    std::erase_if(estimates, [](const PartitionEstimate& e) { return e.n_eff <= 0; });
    return estimates;
}

}  // namespace

CombinedCD combine_fixed(std::vector<PartitionEstimate> estimates) {
    const auto use = usable_sorted(std::move(estimates));
    if (use.empty()) throw std::runtime_error("no usable partitions");

    double sum_w = 0.0, sum_wl = 0.0;
    for (const auto& e : use) {
        const double w = static_cast<double>(e.n_eff);
        sum_w += w;
        sum_wl += w * e.lp;
    }
    CombinedCD cd;
    cd.method = CombineMethod::fixed;
    cd.mean = sum_wl / sum_w;
    cd.variance = 1.0 / sum_w;
    cd.k_eff = static_cast<long>(use.size());
    cd.tau2 = 0.0;
    std::vector<double> w(use.size());
    for (std::size_t i = 0; i < use.size(); ++i) w[i] = static_cast<double>(use[i].n_eff);
    cd.q = cochran_q(use, cd.mean, w);
    cd.i2_pre = i_squared(cd.q, cd.k_eff);
    cd.k_warning = cd.k_eff < 2;
    return cd;
}

double cochran_q(std::span<const PartitionEstimate> estimates, double combined_mean,
                 std::span<const double> weights) {
    if (estimates.size() != weights.size())
        throw std::invalid_argument("cochran_q: weights misaligned");
    double q = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        if (estimates[i].n_eff <= 0) continue;
        const double d = estimates[i].lp - combined_mean;
        q += weights[i] * d * d;
    }
    return q;
}

double i_squared(double q, long k_eff) {
    if (k_eff < 1) throw std::invalid_argument("i_squared: k_eff must be >= 1");
    const double excess = q - static_cast<double>(k_eff - 1);
    if (excess <= 0.0 || q <= 0.0) return 0.0;
    return excess / q;
}

double tau2_dl(std::span<const PartitionEstimate> estimates) {
    std::vector<PartitionEstimate> use =
        usable_sorted({estimates.begin(), estimates.end()});
    const long k = static_cast<long>(use.size());
    if (k < 2) return 0.0;  // heterogeneity unidentifiable

    double sum_n = 0.0, sum_nl = 0.0, sum_n2 = 0.0;
    for (const auto& e : use) {
        const double n = static_cast<double>(e.n_eff);
        sum_n += n;
        sum_n2 += n * n;
        sum_nl += n * e.lp;
    }
    const double mean = sum_nl / sum_n;
    double q = 0.0;
    for (const auto& e : use) {
        const double d = e.lp - mean;
        q += static_cast<double>(e.n_eff) * d * d;
    }
    const double denom = sum_n - sum_n2 / sum_n;
    if (denom <= 0.0) return 0.0;
    return std::max(0.0, (q - static_cast<double>(k - 1)) / denom);
}

double tau2_reml(std::span<const PartitionEstimate> estimates, double tol, long max_iter) {
    std::vector<PartitionEstimate> use =
        usable_sorted({estimates.begin(), estimates.end()});
    const long k = static_cast<long>(use.size());
    if (k < 2) return 0.0;

    double tau2 = tau2_dl(use);
    const double ratio = static_cast<double>(k) / static_cast<double>(k - 1);
    for (long iter = 0; iter < max_iter; ++iter) {
        double sum_w = 0.0, sum_wl = 0.0;
        for (const auto& e : use) {
            const double w = 1.0 / (1.0 / static_cast<double>(e.n_eff) + tau2);
            sum_w += w;
            sum_wl += w * e.lp;
        }
        const double theta = sum_wl / sum_w;
        double num = 0.0, den = 0.0;
        for (const auto& e : use) {
            const double s2 = 1.0 / static_cast<double>(e.n_eff);
            const double w = 1.0 / (s2 + tau2);
            const double d = e.lp - theta;
            num += w * w * (ratio * d * d - s2);
            den += w * w;
        }
        const double next = num / den;
        const bool converged = std::abs(next - tau2) <= tol;
        tau2 = next;
        if (converged) return std::max(0.0, tau2);
    }
    throw std::runtime_error("REML did not converge");
}

CombinedCD combine_random(std::vector<PartitionEstimate> estimates, double tau2,
                          CombineMethod tag) {
    const auto use = usable_sorted(std::move(estimates));
    if (use.empty()) throw std::runtime_error("no usable partitions");
    if (tau2 < 0.0) throw std::invalid_argument("combine_random: tau2 must be >= 0");

    double sum_w = 0.0, sum_wl = 0.0;
    std::vector<double> w(use.size());
    for (std::size_t i = 0; i < use.size(); ++i) {
        w[i] = 1.0 / (tau2 + 1.0 / static_cast<double>(use[i].n_eff));
        sum_w += w[i];
        sum_wl += w[i] * use[i].lp;
    }
    CombinedCD cd;
    cd.method = tag;
    cd.tau2 = tau2;
    cd.mean = sum_wl / sum_w;
    cd.variance = 1.0 / sum_w;
    cd.k_eff = static_cast<long>(use.size());
    cd.k_warning = cd.k_eff < 2;

    // post-correction diagnostic: Q on the shrunken estimates
    // theta_l = lambda_l * mean + (1 - lambda_l) * lp_l
    double q_post = 0.0;
    for (std::size_t i = 0; i < use.size(); ++i) {
        const double s2 = 1.0 / static_cast<double>(use[i].n_eff);
        const double lambda = s2 / (tau2 + s2);
        const double shrunk = lambda * cd.mean + (1.0 - lambda) * use[i].lp;
        const double d = shrunk - cd.mean;
        q_post += w[i] * d * d;
    }
    cd.i2_post = i_squared(q_post, cd.k_eff);
    return cd;
}

CombinedCD meta_combine(std::vector<PartitionEstimate> estimates, CombineMethod method) {
    CombinedCD fixed = combine_fixed(estimates);
    if (method == CombineMethod::fixed) return fixed;

    const double tau2 = method == CombineMethod::dl ? tau2_dl(estimates)
                                                    : tau2_reml(estimates);
    CombinedCD cd = combine_random(std::move(estimates), tau2, method);
    cd.q = fixed.q;
    cd.i2_pre = fixed.i2_pre;
    return cd;
}

std::pair<double, double> cd_interval(const CombinedCD& cd, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("cd_interval: level must be in (0,1)");
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(cd.variance);
    return {cd.mean - half, cd.mean + half};
}

double cd_pvalue(const CombinedCD& cd, double null_boundary) {
    return normal_cdf((null_boundary - cd.mean) / std::sqrt(cd.variance));
}

const char* to_string(CombineMethod m) {
    switch (m) {
        case CombineMethod::fixed: return "fixed";
        case CombineMethod::dl: return "dl";
        case CombineMethod::reml: return "reml";
    }
    return "fixed";
}

CombineMethod combine_method_from_string(const std::string& s) {
    if (s == "fixed") return CombineMethod::fixed;
    if (s == "dl" || s == "DL") return CombineMethod::dl;
    if (s == "reml" || s == "REML") return CombineMethod::reml;
    throw std::invalid_argument("unknown combine method: " + s);
}

}  // namespace metalp
