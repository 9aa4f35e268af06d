#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dge/dataset.hpp"
#include "dge/error.hpp"
#include "dge/schema.hpp"

namespace dge {

namespace detail {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

inline std::optional<double> parse_finite(std::string_view s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::string quote_csv(const std::string& field) {
    const bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// One RFC 4180 record; handles quoted fields spanning lines. Returns false at EOF.
inline bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int ch;
    while ((ch = in.get()) != EOF) {
        any = true;
        const char c = static_cast<char>(ch);
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get();
            fields.push_back(std::move(field));
            return true;
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            return true;
        } else {
            field += c;
        }
    }
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

}  // namespace detail

// Writes header (feature names then label name) and rows. Numeric cells use
// round-trip formatting so read_csv reconstructs them bit-exactly.
inline void write_csv(const TabularDataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    const Schema& s = data.schema();
    for (std::size_t c = 0; c < s.n_features(); ++c) {
        out << detail::quote_csv(s.feature(c).name) << ',';
    }
    out << detail::quote_csv(s.label_name()) << '\n';
    for (std::size_t r = 0; r < data.n_rows(); ++r) {
        for (std::size_t c = 0; c < s.n_features(); ++c) {
            const double v = data.cell(r, c);
            if (s.feature(c).kind == ColumnKind::Numeric) {
                out << detail::format_double(v);
            } else {
                out << detail::quote_csv(s.feature(c).levels[static_cast<std::size_t>(v)]);
            }
            out << ',';
        }
        out << detail::quote_csv(s.label_level_for(data.label(r))) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

namespace detail {

// Without a hint: a column is Numeric iff every cell parses as a finite
// number; otherwise Categorical with levels in order of first appearance.
// The label column is the last one; its positive level is the
// lexicographically larger of the two (callers with a convention of their
// own pass a schema hint or a label config instead).
inline Schema infer_schema(const std::vector<std::string>& header,
                           const std::vector<std::vector<std::string>>& rows,
                           const std::optional<std::string>& label_name,
                           const std::optional<std::string>& positive_label) {
    std::size_t label_col = header.size() - 1;
    if (label_name) {
        bool found = false;
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == *label_name) {
                label_col = c;
                found = true;
                break;
            }
        }
        if (!found) throw MissingLabel("label column not found: " + *label_name);
    }

    std::vector<Column> features;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == label_col) continue;
        bool numeric = true;
        for (const auto& row : rows) {
            if (!parse_finite(row[c])) {
                numeric = false;
                break;
            }
        }
        Column col{header[c], numeric ? ColumnKind::Numeric : ColumnKind::Categorical, {}};
        if (!numeric) {
            for (const auto& row : rows) {
                if (std::find(col.levels.begin(), col.levels.end(), row[c]) == col.levels.end())
                    col.levels.push_back(row[c]);
            }
        }
        features.push_back(std::move(col));
    }

    std::vector<std::string> label_levels;
    for (const auto& row : rows) {
        if (std::find(label_levels.begin(), label_levels.end(), row[label_col]) ==
            label_levels.end())
            label_levels.push_back(row[label_col]);
    }
    if (label_levels.size() != 2)
        throw MissingLabel("label column must have exactly 2 distinct values, got " +
                           std::to_string(label_levels.size()));
    std::string positive;
    if (positive_label) {
        if (*positive_label != label_levels[0] && *positive_label != label_levels[1])
            throw MissingLabel("positive label '" + *positive_label + "' never occurs");
        positive = *positive_label;
    } else {
        positive = std::max(label_levels[0], label_levels[1]);
    }
    return Schema(std::move(features), header[label_col], std::move(label_levels),
                  std::move(positive));
}

}  // namespace detail

struct CsvOptions {
    std::optional<Schema> schema_hint;
    std::optional<std::string> label_name;      // used when inferring
    std::optional<std::string> positive_label;  // used when inferring
};

inline TabularDataset read_csv(const std::filesystem::path& path, const CsvOptions& opts = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());

    std::vector<std::string> header;
    if (!detail::read_record(in, header) || header.empty())
        throw ParseError("missing header row in " + path.string());

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> rec;
    while (detail::read_record(in, rec)) {
        if (rec.size() == 1 && rec[0].empty()) continue;  // blank line
        if (rec.size() != header.size())
            throw ParseError("row " + std::to_string(rows.size() + 1) + " has " +
                             std::to_string(rec.size()) + " fields, expected " +
                             std::to_string(header.size()));
        rows.push_back(rec);
    }
    if (rows.empty()) throw ParseError("no data rows in " + path.string());

    Schema schema;
    std::size_t label_col = header.size() - 1;
    if (opts.schema_hint) {
        schema = *opts.schema_hint;
        if (header.size() != schema.n_features() + 1)
            throw SchemaMismatch("column count does not match schema hint");
        bool found = false;
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == schema.label_name()) {
                label_col = c;
                found = true;
            }
        }
        if (!found) throw MissingLabel("label column not found: " + schema.label_name());
        std::size_t fi = 0;
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == label_col) continue;
            if (header[c] != schema.feature(fi).name)
                throw SchemaMismatch("header column '" + header[c] + "' does not match schema '" +
                                     schema.feature(fi).name + "'");
            ++fi;
        }
    } else {
        schema = detail::infer_schema(header, rows, opts.label_name, opts.positive_label);
        if (opts.label_name) {
            for (std::size_t c = 0; c < header.size(); ++c)
                if (header[c] == *opts.label_name) label_col = c;
        }
    }

    const std::size_t d = schema.n_features();
    std::vector<double> features;
    features.reserve(rows.size() * d);
    std::vector<int> labels;
    labels.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::size_t fi = 0;
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == label_col) continue;
            const Column& col = schema.feature(fi);
            const std::string& cell = rows[r][c];
            if (col.kind == ColumnKind::Numeric) {
                auto v = detail::parse_finite(cell);
                if (!v)
                    throw ParseError("row " + std::to_string(r + 1) + ", column '" + col.name +
                                     "': '" + cell + "' is not a finite number");
                features.push_back(*v);
            } else {
                auto idx = schema.level_index(fi, cell);
                if (!idx)
                    throw ParseError("row " + std::to_string(r + 1) + ", column '" + col.name +
                                     "': unknown level '" + cell + "'");
                features.push_back(static_cast<double>(*idx));
            }
            ++fi;
        }
        const std::string& lab = rows[r][label_col];
        if (lab == schema.positive_label()) {
            labels.push_back(1);
        } else if (lab == schema.label_levels()[0] || lab == schema.label_levels()[1]) {
            labels.push_back(0);
        } else {
            throw ParseError("row " + std::to_string(r + 1) + ": unknown label '" + lab + "'");
        }
    }
    return TabularDataset(std::move(schema), std::move(features), std::move(labels));
}

}  // namespace dge
