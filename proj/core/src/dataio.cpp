#include "gbtwin/dataio.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

namespace gbtwin {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    s = s.substr(first, last - first + 1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> out;
    if (delimiter == ' ') {
        std::size_t at = 0;
        while (at < line.size()) {
            const auto start = line.find_first_not_of(" \t\r", at);
            if (start == std::string_view::npos) {
                break;
            }
            auto end = line.find_first_of(" \t\r", start);
            if (end == std::string_view::npos) {
                end = line.size();
            }
            out.push_back(line.substr(start, end - start));
            at = end;
        }
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto end = line.find(delimiter, start);
        if (end == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, end - start)));
        start = end + 1;
    }
}

bool blank(std::string_view line) { return line.find_first_not_of(" \t\r") == std::string_view::npos; }

std::size_t resolve_label_index(const DatasetSpec& spec, const std::vector<std::string_view>& header,
                                std::size_t columns) {
    if (const auto* name = std::get_if<std::string>(&spec.label_column)) {
        if (!spec.has_header) {
            throw MissingLabelColumn("label column '" + *name + "' named but the file has no header");
        }
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (header[j] == *name) {
                return j;
            }
        }
        throw MissingLabelColumn("no column named '" + *name + "'");
    }
    const long index = std::get<long>(spec.label_column);
    const long resolved = index < 0 ? static_cast<long>(columns) + index : index;
    if (resolved < 0 || resolved >= static_cast<long>(columns)) {
        throw MissingLabelColumn("label column index " + std::to_string(index) + " is outside " +
                                 std::to_string(columns) + " columns");
    }
    return static_cast<std::size_t>(resolved);
}

double parse_number(std::string_view cell, std::size_t row, std::size_t column) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw ParseError("cannot parse '" + std::string(cell) + "' as a finite number", row, column);
    }
    return v;
}

}  // namespace

LabeledDataset parse_csv(const std::string& text, const DatasetSpec& spec) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    std::vector<std::string_view> header;
    std::string header_line;
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;
    std::vector<std::string> names;
    std::map<std::string, Label, std::less<>> ids;

    std::size_t columns = 0;
    std::size_t label_index = 0;
    bool have_shape = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        if (spec.has_header && !have_shape && header.empty()) {
            header_line = line;
            header = split(header_line, spec.delimiter);
            columns = header.size();
            if (columns < 2) {
                throw ParseError("header needs a label column and at least one feature", line_no, 1);
            }
            label_index = resolve_label_index(spec, header, columns);
            have_shape = true;
            continue;
        }
        const auto fields = split(line, spec.delimiter);
        if (!have_shape) {
            columns = fields.size();
            if (columns < 2) {
                throw ParseError("row needs a label column and at least one feature", line_no, 1);
            }
            label_index = resolve_label_index(spec, header, columns);
            have_shape = true;
        }
        if (fields.size() != columns) {
            throw ParseError("expected " + std::to_string(columns) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no, std::min(fields.size(), columns) + 1);
        }
        std::vector<double> row;
        row.reserve(columns - 1);
        for (std::size_t j = 0; j < columns; ++j) {
            if (j == label_index) {
                continue;
            }
            row.push_back(parse_number(fields[j], line_no, j + 1));
        }
        const std::string_view label_text = fields[label_index];
        if (label_text.empty()) {
            throw ParseError("empty label", line_no, label_index + 1);
        }
        auto it = ids.find(label_text);
        if (it == ids.end()) {
            it = ids.emplace(std::string(label_text), static_cast<Label>(names.size())).first;
            names.emplace_back(label_text);
        }
        labels.push_back(it->second);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw EmptyInput("no data rows");
    }

    LabeledDataset out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns - 1));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            out.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    out.labels = std::move(labels);
    out.label_names = std::move(names);
    return out;
}

NumericTable parse_numeric_csv(const std::string& text, bool has_header, char delimiter) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    NumericTable out;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        const auto fields = split(line, delimiter);
        if (out.columns.empty()) {
            for (std::size_t j = 0; j < fields.size(); ++j) {
                out.columns.push_back(has_header ? std::string(fields[j]) : std::to_string(j + 1));
            }
            if (has_header) {
                continue;
            }
        }
        if (fields.size() != out.columns.size()) {
            throw ParseError("expected " + std::to_string(out.columns.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no, std::min(fields.size(), out.columns.size()) + 1);
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j) {
            row.push_back(parse_number(fields[j], line_no, j + 1));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw EmptyInput("no data rows");
    }
    out.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(out.columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

LabeledDataset load_csv(const DatasetSpec& spec) { return parse_csv(read_file(spec.path), spec); }

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InvalidArgument("cannot write '" + tmp.string() + "'");
        }
        out << contents;
        out.flush();
        if (!out) {
            throw InvalidArgument("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw InvalidArgument("cannot move output into place at '" + path.string() + "'");
    }
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t fallback) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("GBTWIN_SEED")) {
        const std::string_view s(env);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
            throw InvalidArgument("GBTWIN_SEED must be an unsigned 64-bit integer, got '" + std::string(s) + "'");
        }
        return v;
    }
    return fallback;
}

}  // namespace gbtwin
