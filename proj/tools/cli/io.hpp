#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace lecho::cli {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

/// Round-trip decimal: 17 significant digits.
[[nodiscard]] std::string format_double(double x);

/// '#' comment, header row, one line per row; LF line endings.
[[nodiscard]] std::string render_csv(const Table& table, const std::string& comment);
/// {"comment": ..., "columns": [...], "rows": [[...], ...]}
[[nodiscard]] nlohmann::json render_json(const Table& table, const nlohmann::json& comment);

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace lecho::cli
