#include "metalp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <vector>

#include "metalp/rng.hpp"

namespace metalp {

int subpop_count(long n, double gamma) {
    if (n < 1) throw std::invalid_argument("subpop_count: n must be >= 1");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("subpop_count: gamma must be in (0,1)");
    const long k = static_cast<long>(
        std::floor(std::pow(static_cast<double>(n), gamma) + 0.5));
    return static_cast<int>(std::max<long>(k, 1));
}

PartitionPlan plan_random(std::span<const std::string> group_keys, int k, uint64_t seed) {
    if (k < 1) throw std::invalid_argument("plan_random: k must be >= 1");
    if (group_keys.empty()) throw std::invalid_argument("plan_random: no group keys");

    std::vector<std::string> keys(group_keys.begin(), group_keys.end());
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    PartitionPlan plan;
    plan.scheme = PartitionScheme::random;
    plan.k = k;
    plan.seed = seed;
    plan.generator = "xoshiro256++/splitmix64";
    Rng rng(seed);
    for (const auto& key : keys)
        plan.assignment.emplace(key, static_cast<int>(rng.bounded(static_cast<uint64_t>(k))));
    return plan;
}

std::string group_key(const MixedColumn& column, std::size_t row) {
    if (column.is_missing(row)) return "";
    const double v = column.values[row];
    if (!column.labels.empty()) {
        const auto code = static_cast<std::size_t>(v);
        if (code < column.labels.size()) return column.labels[code];
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

PartitionPlan plan_by_column(const MixedColumn& column) {
    bool has_missing = false;
    std::set<double> distinct;
    for (std::size_t i = 0; i < column.size(); ++i) {
        if (column.is_missing(i))
            has_missing = true;
        else
            distinct.insert(column.values[i]);
    }
    if (distinct.empty())
        throw std::invalid_argument("plan_by_column: column '" + column.name +
                                    "' has no non-missing values");

    PartitionPlan plan;
    plan.scheme = PartitionScheme::by_column;
    plan.k = static_cast<int>(distinct.size()) + (has_missing ? 1 : 0);
    int id = 0;
    MixedColumn probe = column;  // reuse label lookup from group_key
    for (double v : distinct) {
        probe.values.assign(1, v);
        plan.assignment.emplace(group_key(probe, 0), id++);
    }
    if (has_missing) plan.assignment.emplace("", id);
    return plan;
}

nlohmann::ordered_json PartitionPlan::to_json() const {
    nlohmann::ordered_json j;
    j["scheme"] = scheme == PartitionScheme::random ? "random" : "by_column";
    j["k"] = k;
    if (scheme == PartitionScheme::random) {
        j["seed"] = seed;
        j["generator"] = generator;
    }
    nlohmann::ordered_json a = nlohmann::ordered_json::object();
    for (const auto& [key, id] : assignment) a[key] = id;
    j["assignment"] = std::move(a);
    return j;
}

PartitionPlan PartitionPlan::from_json(const nlohmann::json& j) {
    PartitionPlan plan;
    const std::string scheme = j.at("scheme").get<std::string>();
    if (scheme == "random")
        plan.scheme = PartitionScheme::random;
    else if (scheme == "by_column")
        plan.scheme = PartitionScheme::by_column;
    else
        throw std::invalid_argument("unknown partition scheme: " + scheme);
    plan.k = j.at("k").get<int>();
    if (plan.k < 1) throw std::invalid_argument("partition plan: k must be >= 1");
    plan.seed = j.value("seed", uint64_t{0});
    plan.generator = j.value("generator", std::string{});
    for (const auto& [key, id] : j.at("assignment").items()) {
        const int pid = id.get<int>();
        if (pid < 0 || pid >= plan.k)
            throw std::invalid_argument("partition plan: id out of range for key " + key);
        plan.assignment.emplace(key, pid);
    }
    return plan;
}

}  // namespace metalp
