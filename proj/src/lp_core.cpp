#include "metalp/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace metalp {

std::vector<double> mid_distribution_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("empty column");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> u(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && x[order[j]] == x[order[i]]) ++j;
        // rows i..j-1 (1-based ranks i+1..j) share the average rank
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
        const double ui = (avg_rank - 0.5) * inv_n;
        for (std::size_t r = i; r < j; ++r) u[order[r]] = ui;
        i = j;
    }
    return u;
}

namespace {

long count_distinct_sorted_runs(std::span<const double> u) {
    // u values are equal exactly when the originals are tied, so counting
    // distinct u equals counting distinct x
    std::vector<double> tmp(u.begin(), u.end());
    std::sort(tmp.begin(), tmp.end());
    long d = 0;
    for (std::size_t i = 0; i < tmp.size(); ++i)
        if (i == 0 || tmp[i] != tmp[i - 1]) ++d;
    return d;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

ScoreBasis build_score_basis(std::span<const double> x, int m_requested) {
    if (m_requested < 1) throw std::invalid_argument("m_requested must be >= 1");
    std::vector<double> u = mid_distribution_ranks(x);
    const std::size_t n = u.size();

    ScoreBasis basis;
    basis.distinct_count = count_distinct_sorted_runs(u);
    const long m_cap = basis.distinct_count - 1;
    const int m_eff = static_cast<int>(std::min<long>(m_requested, std::max<long>(m_cap, 0)));
    basis.truncated = m_eff < m_requested;
    if (m_eff == 0) return basis;  // constant input: caller handles degeneracy

    // Stieltjes three-term recurrence for the monic orthogonal polynomials
    // of the empirical measure of u. Monic construction keeps the leading
    // coefficient positive, which pins the column signs: identical score
    // shapes across partitions, never a data-dependent flip.
    const double mean_u = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(n);
    std::vector<std::vector<double>> cols;
    std::vector<double> prev(n, 1.0);           // p_0 = 1
    std::vector<double> cur(n);
    for (std::size_t i = 0; i < n; ++i) cur[i] = u[i] - mean_u;  // p_1
    double norm_prev = static_cast<double>(n);  // <p_0, p_0>
    double norm_cur = dot(cur, cur);

    cols.push_back(cur);
    for (int j = 2; j <= m_eff; ++j) {
        double a = 0.0;
        for (std::size_t i = 0; i < n; ++i) a += u[i] * cur[i] * cur[i];
        a /= norm_cur;
        const double b = norm_cur / norm_prev;
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i)
            next[i] = (u[i] - a) * cur[i] - b * prev[i];
        prev.swap(cur);
        cur.swap(next);
        norm_prev = norm_cur;
        norm_cur = dot(cur, cur);
        cols.push_back(cur);
    }

    // one re-orthogonalization sweep against the constant and earlier
    // columns, then scale to sample sd 1
    basis.columns.reserve(m_eff);
    for (int j = 0; j < m_eff; ++j) {
        std::vector<double>& c = cols[j];
        double mean_c = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(n);
        for (double& v : c) v -= mean_c;
        for (int q = 0; q < j; ++q) {
            const std::vector<double>& e = basis.columns[q];
            const double proj = dot(c, e) / dot(e, e);
            for (std::size_t i = 0; i < n; ++i) c[i] -= proj * e[i];
        }
        basis.columns.push_back(std::move(c));
    }
    for (auto& c : basis.columns) {
        const double sd = std::sqrt(dot(c, c) / static_cast<double>(n - 1));
        if (sd > 0.0) {
            const double inv = 1.0 / sd;
            for (double& v : c) v *= inv;
        }
    }
    basis.m_effective = m_eff;
    return basis;
}

std::vector<double> binary_t1(std::span<const double> y) {
    if (y.empty()) throw std::invalid_argument("empty column");
    double lo = y[0], hi = y[0];
    for (double v : y) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) throw std::invalid_argument("degenerate response");
    long n_hi = 0;
    for (double v : y) {
        if (v != lo && v != hi) throw std::invalid_argument("response is not two-valued");
        if (v == hi) ++n_hi;
    }
    const double p = static_cast<double>(n_hi) / static_cast<double>(y.size());
    const double score_lo = -std::sqrt(p / (1.0 - p));
    const double score_hi = std::sqrt((1.0 - p) / p);
    std::vector<double> t1(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) t1[i] = (y[i] == hi) ? score_hi : score_lo;
    return t1;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    if (n != b.size()) throw std::invalid_argument("pearson: length mismatch");
    if (n < 2) throw std::invalid_argument("pearson: need at least two rows");
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

SubpopSummary lp_statistics(std::span<const double> x, std::span<const double> y,
                            int m_requested) {
    if (x.size() != y.size()) throw std::invalid_argument("lp_statistics: length mismatch");
    if (m_requested < 1) throw std::invalid_argument("lp_statistics: m_requested must be >= 1");

    SubpopSummary out;
    std::vector<double> xv, yv;
    xv.reserve(x.size());
    yv.reserve(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(x[i]) || std::isnan(y[i])) continue;
        xv.push_back(x[i]);
        yv.push_back(y[i]);
    }

    auto degenerate = [&out, m_requested]() {
        out.degenerate = true;
        out.n_eff = 0;
        out.lp.assign(static_cast<std::size_t>(m_requested), 0.0);
        return out;
    };

    if (xv.size() < 2) return degenerate();
    const bool x_constant =
        std::all_of(xv.begin(), xv.end(), [&xv](double v) { return v == xv[0]; });
    if (x_constant) return degenerate();
    double ylo = yv[0], yhi = yv[0];
    for (double v : yv) {
        ylo = std::min(ylo, v);
        yhi = std::max(yhi, v);
    }
    if (ylo == yhi) return degenerate();
    // a response that is not two-valued after subsetting is untestable in
    // this partition, not an error
    for (double v : yv)
        if (v != ylo && v != yhi) return degenerate();

    ScoreBasis basis = build_score_basis(xv, m_requested);
    out.truncated = basis.truncated;
    out.n_eff = static_cast<long>(xv.size());
    out.lp.reserve(basis.m_effective);
    for (int j = 0; j < basis.m_effective; ++j)
        out.lp.push_back(pearson(yv, basis.columns[j]));
    return out;
}

SubpopSummary lp_statistics(const MixedColumn& x, const MixedColumn& y, int m_requested) {
    SubpopSummary out = lp_statistics(std::span<const double>(x.values),
                                      std::span<const double>(y.values), m_requested);
    out.variable = x.name;
    return out;
}

const char* to_string(DataType t) {
    switch (t) {
        case DataType::continuous: return "continuous";
        case DataType::discrete: return "discrete";
        case DataType::binary: return "binary";
        case DataType::categorical: return "categorical";
    }
    return "continuous";
}

DataType data_type_from_string(const std::string& s) {
    if (s == "continuous") return DataType::continuous;
    if (s == "discrete") return DataType::discrete;
    if (s == "binary") return DataType::binary;
    if (s == "categorical" || s == "categorical_ordinal") return DataType::categorical;
    throw std::invalid_argument("unknown data type: " + s);
}

}  // namespace metalp
