#include "conebook/result_table.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "conebook/errors.hpp"

#include "json.hpp"

namespace conebook {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string cell_to_string(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    return std::get<std::string>(c);
}

}  // namespace

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
        throw ConfigError("ResultTable: row width does not match the header");
    }
    rows_.push_back(std::move(row));
}

std::string ResultTable::to_csv() const {
    std::ostringstream out;
    for (const auto& [k, v] : meta_) out << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        out << (i ? "," : "") << columns_[i];
    }
    out << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << cell_to_string(row[i]);
        }
        out << "\n";
    }
    return out.str();
}

std::string ResultTable::to_json() const {
    nlohmann::ordered_json j;
    j["metadata"] = meta_;
    j["columns"] = columns_;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const auto& c : row) {
            if (std::holds_alternative<double>(c)) {
                r.push_back(std::get<double>(c));
            } else if (std::holds_alternative<long long>(c)) {
                r.push_back(std::get<long long>(c));
            } else {
                r.push_back(std::get<std::string>(c));
            }
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("cannot open for writing: " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace conebook
