#pragma once

#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "format.hpp"
#include "milp.hpp"

namespace vrpcs {

namespace detail {

inline char sense_code(Sense s) {
    switch (s) {
    case Sense::Equal: return 'E';
    case Sense::LessEqual: return 'L';
    case Sense::GreaterEqual: return 'G';
    }
    return 'E';
}

inline std::vector<std::string> split_fields(const std::string &line) {
    std::istringstream in(line);
    std::vector<std::string> fields;
    std::string f;
    while (in >> f) {
        fields.push_back(f);
    }
    return fields;
}

inline bool starts_with(const std::string &s, const std::string &prefix) {
    return s.compare(0, prefix.size(), prefix) == 0;
}

inline double parse_number(const std::string &text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw InputError("bad numeric literal '" + text + "'");
        }
        return v;
    } catch (const std::logic_error &) {
        throw InputError("bad numeric literal '" + text + "'");
    }
}

inline constexpr const char *kObjectiveRow = "obj";
inline constexpr const char *kOffsetComment = "* objective offset: ";
inline constexpr const char *kCustomersComment = "* customers: ";
inline constexpr const char *kEligibleComment = "* eligible:";

} // namespace detail

// Free-format MPS. Columns follow the model order with integer markers around the binary block;
// every number is printed with 12 significant digits. MPS has no objective constant, so the
// offset travels in a comment (and in the sidecar metadata).
inline std::string export_text(const MilpModel &model) {
    std::vector<std::vector<std::pair<int, double>>> column_entries(model.variables.size());
    for (std::size_t r = 0; r < model.constraints.size(); ++r) {
        for (const auto &t : model.constraints[r].terms) {
            column_entries[static_cast<std::size_t>(t.var)].push_back({static_cast<int>(r), t.coef});
        }
    }

    std::string out;
    out += "* VRPCS single-commodity flow model\n";
    out += detail::kCustomersComment + std::to_string(model.customers) + "\n";
    out += detail::kEligibleComment;
    for (int i : model.eligible) {
        out += " " + std::to_string(i);
    }
    out += "\n";
    out += detail::kOffsetComment + format_number(model.objective_offset) + "\n";
    out += "NAME " + model.name + "\n";
    out += "ROWS\n";
    out += " N  " + std::string(detail::kObjectiveRow) + "\n";
    for (const auto &row : model.constraints) {
        out += " ";
        out += detail::sense_code(row.sense);
        out += "  " + row.name + "\n";
    }
    out += "COLUMNS\n";
    bool in_integer_block = false;
    for (std::size_t k = 0; k < model.variables.size(); ++k) {
        const auto &var = model.variables[k];
        const bool integer = var.type == VarType::Binary;
        if (integer != in_integer_block) {
            out += integer ? "    MARKER  'MARKER'  'INTORG'\n" : "    MARKER  'MARKER'  'INTEND'\n";
            in_integer_block = integer;
        }
        if (var.objective != 0.0) {
            out += "    " + var.name + "  " + detail::kObjectiveRow + "  " + format_number(var.objective) + "\n";
        }
        for (const auto &[row, coef] : column_entries[k]) {
            out += "    " + var.name + "  " + model.constraints[static_cast<std::size_t>(row)].name + "  " +
                   format_number(coef) + "\n";
        }
    }
    if (in_integer_block) {
        out += "    MARKER  'MARKER'  'INTEND'\n";
    }
    out += "RHS\n";
    for (const auto &row : model.constraints) {
        if (row.rhs != 0.0) {
            out += "    RHS  " + row.name + "  " + format_number(row.rhs) + "\n";
        }
    }
    out += "BOUNDS\n";
    for (const auto &var : model.variables) {
        if (var.type == VarType::Binary) {
            out += " BV BND  " + var.name + "\n";
        }
    }
    out += "ENDATA\n";
    return out;
}

// Inverse of export_text. Sections must come in the order NAME, ROWS, COLUMNS, RHS, BOUNDS,
// ENDATA (RHS and BOUNDS may be absent).
inline MilpModel parse_back(const std::string &text) {
    enum Section { None, Name, Rows, Columns, Rhs, Bounds, End };
    MilpModel model;
    model.name.clear();
    Section section = None;
    std::unordered_map<std::string, int> row_index;
    std::unordered_map<std::string, int> column_index;
    std::vector<bool> marked_integer;
    std::vector<bool> binary_bound;
    bool integer_block = false;
    std::string current_column;
    bool saw_objective_row = false;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    const auto fail = [&line_no](const std::string &what) {
        throw InputError("MPS line " + std::to_string(line_no) + ": " + what);
    };
    const auto enter = [&](Section next) {
        if (next <= section) {
            fail("section out of order");
        }
        section = next;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '*') {
            if (detail::starts_with(line, detail::kOffsetComment)) {
                model.objective_offset = detail::parse_number(line.substr(std::string(detail::kOffsetComment).size()));
            } else if (detail::starts_with(line, detail::kCustomersComment)) {
                model.customers = static_cast<int>(
                    detail::parse_number(line.substr(std::string(detail::kCustomersComment).size())));
            } else if (detail::starts_with(line, detail::kEligibleComment)) {
                for (const auto &f : detail::split_fields(line.substr(std::string(detail::kEligibleComment).size()))) {
                    model.eligible.push_back(static_cast<int>(detail::parse_number(f)));
                }
            }
            continue;
        }
        const auto fields = detail::split_fields(line);
        if (line[0] != ' ' && line[0] != '\t') {
            const auto &head = fields[0];
            if (head == "NAME") {
                enter(Name);
                model.name = fields.size() > 1 ? fields[1] : "";
            } else if (head == "ROWS") {
                enter(Rows);
            } else if (head == "COLUMNS") {
                enter(Columns);
            } else if (head == "RHS") {
                enter(Rhs);
            } else if (head == "BOUNDS") {
                enter(Bounds);
            } else if (head == "ENDATA") {
                enter(End);
            } else {
                fail("unknown section '" + head + "'");
            }
            continue;
        }
        switch (section) {
        case Rows: {
            if (fields.size() != 2) {
                fail("ROWS entry needs a type and a name");
            }
            const auto &type = fields[0];
            if (type == "N") {
                if (saw_objective_row) {
                    fail("more than one objective row");
                }
                saw_objective_row = true;
                row_index[fields[1]] = -1;
                break;
            }
            Sense sense;
            if (type == "E") {
                sense = Sense::Equal;
            } else if (type == "L") {
                sense = Sense::LessEqual;
            } else if (type == "G") {
                sense = Sense::GreaterEqual;
            } else {
                fail("unknown row type '" + type + "'");
            }
            if (row_index.count(fields[1])) {
                fail("duplicate row '" + fields[1] + "'");
            }
            row_index[fields[1]] = static_cast<int>(model.constraints.size());
            model.constraints.push_back(Constraint{fields[1], sense, {}, 0.0});
            break;
        }
        case Columns: {
            if (fields.size() == 3 && fields[1] == "'MARKER'") {
                if (fields[2] == "'INTORG'") {
                    integer_block = true;
                } else if (fields[2] == "'INTEND'") {
                    integer_block = false;
                } else {
                    fail("unknown marker " + fields[2]);
                }
                break;
            }
            if (fields.size() < 3 || fields.size() % 2 == 0) {
                fail("COLUMNS entry needs a column and row/value pairs");
            }
            const auto &col = fields[0];
            if (col != current_column) {
                if (column_index.count(col)) {
                    fail("column '" + col + "' is not contiguous");
                }
                column_index[col] = static_cast<int>(model.variables.size());
                model.variables.push_back(Variable{col, VarType::Continuous, 0.0});
                marked_integer.push_back(integer_block);
                binary_bound.push_back(false);
                current_column = col;
            }
            const int var = column_index[col];
            for (std::size_t f = 1; f + 1 < fields.size(); f += 2) {
                const auto it = row_index.find(fields[f]);
                if (it == row_index.end()) {
                    fail("unknown row '" + fields[f] + "'");
                }
                const double value = detail::parse_number(fields[f + 1]);
                if (it->second < 0) {
                    model.variables[static_cast<std::size_t>(var)].objective = value;
                } else {
                    model.constraints[static_cast<std::size_t>(it->second)].terms.push_back({var, value});
                }
            }
            break;
        }
        case Rhs: {
            if (fields.size() < 3 || fields.size() % 2 == 0) {
                fail("RHS entry needs a set name and row/value pairs");
            }
            for (std::size_t f = 1; f + 1 < fields.size(); f += 2) {
                const auto it = row_index.find(fields[f]);
                if (it == row_index.end()) {
                    fail("unknown row '" + fields[f] + "'");
                }
                const double value = detail::parse_number(fields[f + 1]);
                if (it->second < 0) {
                    fail("objective constants are carried in the offset comment");
                }
                model.constraints[static_cast<std::size_t>(it->second)].rhs = value;
            }
            break;
        }
        case Bounds: {
            if (fields.size() < 3) {
                fail("BOUNDS entry needs a type, a set name and a column");
            }
            if (fields[0] != "BV") {
                fail("unsupported bound type '" + fields[0] + "'");
            }
            const auto it = column_index.find(fields[2]);
            if (it == column_index.end()) {
                fail("unknown variable '" + fields[2] + "'");
            }
            binary_bound[static_cast<std::size_t>(it->second)] = true;
            break;
        }
        default:
            fail("data line outside of a section");
        }
    }
    if (section != End) {
        throw InputError("MPS document does not end with ENDATA");
    }
    if (!saw_objective_row) {
        throw InputError("MPS document has no objective row");
    }
    for (std::size_t k = 0; k < model.variables.size(); ++k) {
        if (marked_integer[k] != binary_bound[k]) {
            throw InputError("variable '" + model.variables[k].name +
                             "' must be both inside the integer markers and BV-bounded, or neither");
        }
        if (binary_bound[k]) {
            model.variables[k].type = VarType::Binary;
        }
    }
    return model;
}

// Structural equality with numbers compared at the exported precision.
inline bool equivalent(const MilpModel &a, const MilpModel &b) {
    const auto same = [](double u, double v) { return format_number(u) == format_number(v); };
    if (a.name != b.name || a.customers != b.customers || a.eligible != b.eligible ||
        !same(a.objective_offset, b.objective_offset) || a.variables.size() != b.variables.size() ||
        a.constraints.size() != b.constraints.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.variables.size(); ++k) {
        const auto &u = a.variables[k];
        const auto &v = b.variables[k];
        if (u.name != v.name || u.type != v.type || !same(u.objective, v.objective)) {
            return false;
        }
    }
    for (std::size_t r = 0; r < a.constraints.size(); ++r) {
        const auto &u = a.constraints[r];
        const auto &v = b.constraints[r];
        if (u.name != v.name || u.sense != v.sense || !same(u.rhs, v.rhs) || u.terms.size() != v.terms.size()) {
            return false;
        }
        for (std::size_t t = 0; t < u.terms.size(); ++t) {
            if (u.terms[t].var != v.terms[t].var || !same(u.terms[t].coef, v.terms[t].coef)) {
                return false;
            }
        }
    }
    return true;
}

// Sidecar written next to an exported model.
inline nlohmann::json model_meta(const MilpModel &model) {
    return {{"objectiveOffset", model.objective_offset}, {"n", model.customers}, {"S", model.eligible}};
}

} // namespace vrpcs
