#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metalp/mixed_column.hpp"

namespace metalp {

// Schema entry for one CSV column. Every header column must be either
// described or explicitly ignored; exactly one column is the target and
// it must be binary.
struct ColumnSpec {
    std::string name;
    DataType type = DataType::continuous;
    std::optional<int> m;  // per-variable order override
    bool ignore = false;
};

struct Schema {
    std::string target;
    std::vector<ColumnSpec> columns;

    static Schema from_json(const nlohmann::json& j);
    static Schema from_file(const std::string& path);
    nlohmann::ordered_json to_json() const;
    void save(const std::string& path) const;

    const ColumnSpec* find(const std::string& name) const;
};

struct Dataset {
    std::vector<MixedColumn> columns;
    long n_rows = 0;

    const MixedColumn* find(const std::string& name) const;
    const MixedColumn& column(const std::string& name) const;  // throws if absent
};

// CSV dialect: comma separator, header row required, empty field =
// missing, RFC-4180 quoting (quoted fields, doubled quotes), UTF-8.
// Numeric parsing is strict for non-categorical columns; categorical
// columns accumulate string levels in first-appearance order.
Dataset read_csv(const std::string& path, const Schema& schema);

// Writes columns with %.17g numeric formatting so a rewrite of the same
// dataset is byte-identical and values round-trip exactly.
void write_csv(const std::string& path, const Dataset& dataset);

}  // namespace metalp
