#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace conebook {

using Cell = std::variant<double, long long, std::string>;

// Tabular experiment output with a mandatory metadata block. CSV dialect:
// comma separators, '.' decimal point, LF line endings, UTF-8, header row
// mandatory; metadata emitted as leading '# key=value' comment lines.
// Numbers are serialized with 17 significant digits so reruns are
// byte-comparable.
class ResultTable {
public:
    explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void set_meta(const std::string& key, const std::string& value) { meta_[key] = value; }
    void add_row(std::vector<Cell> row);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    const std::map<std::string, std::string>& meta() const { return meta_; }

    std::string to_csv() const;
    std::string to_json() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::map<std::string, std::string> meta_;
};

std::string format_double(double v);

// Write-temp-then-rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace conebook
