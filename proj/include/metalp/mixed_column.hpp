#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace metalp {

enum class DataType { continuous, discrete, binary, categorical };

const char* to_string(DataType t);
DataType data_type_from_string(const std::string& s);

// One column of a mixed-type dataset. Values are stored as doubles with
// NaN marking missing entries; categorical columns carry the original
// string levels (values are the level codes in first-appearance order).
struct MixedColumn {
    std::string name;
    DataType type = DataType::continuous;
    std::vector<double> values;
    std::optional<int> m_override;
    std::vector<std::string> labels;  // categorical level names, index = code

    std::size_t size() const { return values.size(); }
    bool is_missing(std::size_t i) const { return std::isnan(values[i]); }
};

}  // namespace metalp
