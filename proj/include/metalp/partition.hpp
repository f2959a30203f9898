#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include <json.hpp>

#include "metalp/mixed_column.hpp"

namespace metalp {

enum class PartitionScheme { random, by_column };

// Assignment of group keys to subpopulations. A group key is a search
// session id, a grouping-column level, or a plain row index; rows sharing
// a key always land in the same partition. Plans serialize to JSON for
// audit and replay.
struct PartitionPlan {
    PartitionScheme scheme = PartitionScheme::random;
    int k = 1;
    uint64_t seed = 0;                      // random scheme only
    std::string generator;                  // PRNG identity, random scheme only
    std::map<std::string, int> assignment;  // group key -> partition id

    nlohmann::ordered_json to_json() const;
    static PartitionPlan from_json(const nlohmann::json& j);
};

// k = floor(n^gamma + 0.5), never below 1.
int subpop_count(long n, double gamma);

// Uniform seeded assignment of each distinct key to one of k partitions.
// Keys are processed in sorted order so the plan depends only on the key
// set, not on row order.
PartitionPlan plan_random(std::span<const std::string> group_keys, int k, uint64_t seed);

// One partition per distinct value of the column; missing values form
// their own partition (key ""), listed last.
PartitionPlan plan_by_column(const MixedColumn& column);

// Canonical group key for a cell: categorical label when present,
// shortest round-trip numeric form otherwise, "" for missing.
std::string group_key(const MixedColumn& column, std::size_t row);

}  // namespace metalp
