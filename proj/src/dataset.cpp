#include "metalp/dataset.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace metalp {

Schema Schema::from_json(const nlohmann::json& j) {
    Schema s;
    s.target = j.at("target").get<std::string>();
    for (const auto& c : j.at("columns")) {
        ColumnSpec spec;
        spec.name = c.at("name").get<std::string>();
        spec.ignore = c.value("ignore", false);
        if (!spec.ignore) spec.type = data_type_from_string(c.value("type", "continuous"));
        if (c.contains("m")) {
            spec.m = c.at("m").get<int>();
            if (*spec.m < 1) throw std::invalid_argument("schema: m must be >= 1 for column " + spec.name);
        }
        s.columns.push_back(std::move(spec));
    }
    const ColumnSpec* t = s.find(s.target);
    if (t == nullptr || t->ignore)
        throw std::invalid_argument("schema: target column '" + s.target + "' is not described");
    if (t->type != DataType::binary)
        throw std::invalid_argument("schema: target column '" + s.target + "' must be binary");
    return s;
}

Schema Schema::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schema file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

nlohmann::ordered_json Schema::to_json() const {
    nlohmann::ordered_json j;
    j["target"] = target;
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    for (const auto& c : columns) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        if (c.ignore) {
            e["ignore"] = true;
        } else {
            e["type"] = to_string(c.type);
            if (c.m) e["m"] = *c.m;
        }
        cols.push_back(std::move(e));
    }
    j["columns"] = std::move(cols);
    return j;
}

void Schema::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write schema file: " + path);
    out << to_json().dump(2) << '\n';
}

const ColumnSpec* Schema::find(const std::string& name) const {
    for (const auto& c : columns)
        if (c.name == name) return &c;
    return nullptr;
}

const MixedColumn* Dataset::find(const std::string& name) const {
    for (const auto& c : columns)
        if (c.name == name) return &c;
    return nullptr;
}

const MixedColumn& Dataset::column(const std::string& name) const {
    const MixedColumn* c = find(name);
    if (c == nullptr) throw std::runtime_error("no such column: " + name);
    return *c;
}

namespace {

// Splits one CSV record. Handles quoted fields and doubled quotes.
std::vector<std::string> split_record(const std::string& line, long line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"' && field.empty()) {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += ch;
        }
    }
    if (quoted)
        throw std::runtime_error("csv: unterminated quote on line " + std::to_string(line_no));
    fields.push_back(std::move(field));
    return fields;
}

double parse_number(const std::string& field, const std::string& column, long line_no) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0' || errno == ERANGE)
        throw std::runtime_error("csv: non-numeric value '" + field + "' in column " +
                                 column + " on line " + std::to_string(line_no));
    return v;
}

}  // namespace

Dataset read_csv(const std::string& path, const Schema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_record(line, 1);

    struct Slot {
        const ColumnSpec* spec;
        int column_index;  // into dataset.columns, -1 when ignored
    };
    std::vector<Slot> slots;
    Dataset ds;
    for (const auto& name : header) {
        const ColumnSpec* spec = schema.find(name);
        if (spec == nullptr)
            throw std::runtime_error("csv column '" + name +
                                     "' is not described by the schema (add it or mark it ignored)");
        if (spec->ignore) {
            slots.push_back({spec, -1});
            continue;
        }
        MixedColumn col;
        col.name = name;
        col.type = spec->type;
        col.m_override = spec->m;
        slots.push_back({spec, static_cast<int>(ds.columns.size())});
        ds.columns.push_back(std::move(col));
    }
    for (const auto& c : schema.columns) {
        if (c.ignore) continue;
        if (ds.find(c.name) == nullptr)
            throw std::runtime_error("schema column '" + c.name + "' is missing from the csv header");
    }

    std::vector<std::unordered_map<std::string, double>> level_codes(ds.columns.size());
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        const std::vector<std::string> fields = split_record(line, line_no);
        if (fields.size() != header.size())
            throw std::runtime_error("csv: line " + std::to_string(line_no) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(header.size()));
        for (std::size_t f = 0; f < fields.size(); ++f) {
            const Slot& slot = slots[f];
            if (slot.column_index < 0) continue;
            MixedColumn& col = ds.columns[slot.column_index];
            const std::string& field = fields[f];
            if (field.empty()) {
                col.values.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            if (col.type == DataType::categorical) {
                auto& codes = level_codes[slot.column_index];
                auto it = codes.find(field);
                if (it == codes.end()) {
                    const double code = static_cast<double>(col.labels.size());
                    col.labels.push_back(field);
                    it = codes.emplace(field, code).first;
                }
                col.values.push_back(it->second);
            } else {
                col.values.push_back(parse_number(field, col.name, line_no));
            }
        }
        ++ds.n_rows;
    }
    if (ds.n_rows == 0) throw std::runtime_error("csv: no data rows in " + path);
    return ds;
}

void write_csv(const std::string& path, const Dataset& dataset) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    for (std::size_t c = 0; c < dataset.columns.size(); ++c) {
        if (c) out << ',';
        out << dataset.columns[c].name;
    }
    out << '\n';
    char buf[40];
    for (long r = 0; r < dataset.n_rows; ++r) {
        for (std::size_t c = 0; c < dataset.columns.size(); ++c) {
            if (c) out << ',';
            const MixedColumn& col = dataset.columns[c];
            if (col.is_missing(r)) continue;  // empty field
            if (!col.labels.empty()) {
                out << col.labels[static_cast<std::size_t>(col.values[r])];
            } else {
                std::snprintf(buf, sizeof(buf), "%.17g", col.values[r]);
                out << buf;
            }
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace metalp
