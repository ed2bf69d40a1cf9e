#include "ovcyst/csv.hpp"

#include "ovcyst/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace ovcyst {
namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    return text;
}

std::string format_number(double value) {
    char buffer[32];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

std::string quote(std::string_view text) {
    if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

}  // namespace

std::vector<std::string> split_csv_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current += ch;
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (ch != '\r') {
            current += ch;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

LabeledDataset read_csv(std::istream& in, const Schema& schema) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "", "empty input, expected a header row");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto header = split_csv_record(line);
    auto find = [&header](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == name) return i;
        }
        return std::nullopt;
    };

    std::vector<std::size_t> feature_pos(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
        auto pos = find(schema[c].name);
        if (!pos) throw MissingColumn(schema[c].name);
        feature_pos[c] = *pos;
    }
    const auto target_pos = find(kTargetColumn);
    if (!target_pos) throw MissingColumn(std::string(kTargetColumn));

    std::vector<double> cells;
    std::vector<ClassLabel> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_record(line);
        if (fields.size() != header.size()) {
            throw ParseError(line_no, "", "expected " + std::to_string(header.size()) +
                                              " fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < schema.size(); ++c) {
            const std::string_view token = trim(fields[feature_pos[c]]);
            if (token.empty() || token == "NA") {
                if (!schema[c].allowed_missing) {
                    throw ParseError(line_no, schema[c].name, "missing value not allowed");
                }
                cells.push_back(kMissing);
                continue;
            }
            double value = 0.0;
            const char* first = token.data();
            const char* last = token.data() + token.size();
            if (*first == '+') ++first;
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
                throw ParseError(line_no, schema[c].name,
                                 "cannot parse '" + std::string(token) + "' as a number");
            }
            cells.push_back(value);
        }
        try {
            labels.push_back(label_from_display(trim(fields[*target_pos])));
        } catch (const UnknownLabel& e) {
            throw UnknownLabel("line " + std::to_string(line_no) + ": " + e.what());
        }
    }

    const auto rows = static_cast<Index>(labels.size());
    Matrix values(rows, static_cast<Index>(schema.size()));
    if (!cells.empty()) {
        values = Eigen::Map<const Matrix>(cells.data(), rows, static_cast<Index>(schema.size()));
    }
    return LabeledDataset(FeatureMatrix(schema, std::move(values)), std::move(labels));
}

LabeledDataset load_csv(const std::filesystem::path& path, const Schema& schema) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    return read_csv(in, schema);
}

void write_csv(std::ostream& out, const LabeledDataset& data) {
    const auto& schema = data.features.schema();
    for (std::size_t c = 0; c < schema.size(); ++c) out << schema[c].name << ',';
    out << kTargetColumn << '\n';
    const auto& raw = data.features.raw();
    for (Index r = 0; r < raw.rows(); ++r) {
        for (Index c = 0; c < raw.cols(); ++c) {
            if (!data.features.is_missing(r, c)) out << format_number(raw(r, c));
            out << ',';
        }
        out << quote(display_name(data.labels[static_cast<std::size_t>(r)])) << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const LabeledDataset& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    write_csv(out, data);
    if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace ovcyst
