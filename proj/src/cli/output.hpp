#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fermirdm::cli {

using Cell = std::variant<double, long long, std::string>;

/// Column table with a metadata header and optional structured blocks.
struct Table {
    std::vector<std::pair<std::string, nlohmann::ordered_json>> metadata;
    std::vector<std::pair<std::string, nlohmann::ordered_json>> blocks;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// '#'-prefixed "key: value" lines, blocks as compact JSON, then a CSV body.
void write_csv(const Table& table, std::ostream& os);

/// {"metadata": {...}, "columns": [...], "rows": [[...]], <blocks>...}
void write_json(const Table& table, std::ostream& os);

std::string format_number(double v);

}  // namespace fermirdm::cli
