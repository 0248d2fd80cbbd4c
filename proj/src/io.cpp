#include "frlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace frlab {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string cell_text(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_g17(std::get<double>(c));
    return std::get<std::string>(c);
}

}  // namespace

std::string write_table(const Table& table, const std::string& dir, OutputFormat format) {
    const std::string path =
        dir + "/" + table.name + (format == OutputFormat::csv ? ".csv" : ".json");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);

    if (format == OutputFormat::csv) {
        out << "# config: " << table.config.dump() << "\n";
        for (const auto& note : table.notes) out << "# " << note << "\n";
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "\n");
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << cell_text(row[i]) << (i + 1 < row.size() ? "," : "\n");
        }
    } else {
        nlohmann::json j;
        j["config"] = table.config;
        j["notes"] = table.notes;
        j["columns"] = table.columns;
        auto& rows = j["rows"] = nlohmann::json::array();
        for (const auto& row : table.rows) {
            nlohmann::json jr = nlohmann::json::array();
            for (const auto& c : row) {
                if (std::holds_alternative<double>(c))
                    jr.push_back(std::get<double>(c));
                else
                    jr.push_back(std::get<std::string>(c));
            }
            rows.push_back(std::move(jr));
        }
        out << j.dump(2) << "\n";
    }
    if (!out) throw std::runtime_error("failed writing " + path);
    return path;
}

}  // namespace frlab
