#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"

namespace vrpcs {

// Plain comma-separated rows without quoting; writers strip commas out of free text.
inline std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
            field.pop_back();
        }
        std::size_t lead = 0;
        while (lead < field.size() && field[lead] == ' ') {
            ++lead;
        }
        out.push_back(field.substr(lead));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string &name) const {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k] == name) {
                return k;
            }
        }
        throw InputError("CSV has no column '" + name + "'");
    }
};

inline CsvTable parse_csv(const std::string &text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        auto fields = split_csv_line(line);
        if (first) {
            table.header = std::move(fields);
            first = false;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw InputError("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                             std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (first) {
        throw InputError("CSV document is empty");
    }
    return table;
}

inline std::string csv_safe(std::string text) {
    for (auto &ch : text) {
        if (ch == ',' || ch == '\n' || ch == '\r') {
            ch = ';';
        }
    }
    return text;
}

} // namespace vrpcs
