#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace frlab {

enum class OutputFormat { csv, json };

/// %.17g rendering used for every emitted number; identical configs must
/// produce byte-identical files.
std::string format_g17(double v);

using Cell = std::variant<double, std::string>;

/// A plot-ready result table. CSV output starts with a comment header echoing
/// the resolved config plus any notes; JSON mirrors the same content.
struct Table {
    std::string name;  // file stem
    nlohmann::json config;
    std::vector<std::string> notes;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Writes <dir>/<name>.<ext> and returns the full path.
std::string write_table(const Table& table, const std::string& dir, OutputFormat format);

}  // namespace frlab
