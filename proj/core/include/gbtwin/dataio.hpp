#pragma once

#include "gbtwin/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gbtwin {

struct DatasetSpec {
    std::filesystem::path path;
    /// Column name (requires a header) or 0-based index; negative counts from the end.
    std::variant<std::string, long> label_column = -1L;
    bool has_header = true;
    /// Field separator; ' ' splits on any run of spaces or tabs.
    char delimiter = ',';
};

/// Parses CSV text; rows and columns in errors are 1-based.
[[nodiscard]] LabeledDataset parse_csv(const std::string& text, const DatasetSpec& spec);

/// All-numeric CSV without a label column.
struct NumericTable {
    std::vector<std::string> columns;  ///< header names, or "1", "2", ... without a header
    Matrix values;
};

[[nodiscard]] NumericTable parse_numeric_csv(const std::string& text, bool has_header = true, char delimiter = ',');

/// Reads and parses the file named by `spec.path`.
[[nodiscard]] LabeledDataset load_csv(const DatasetSpec& spec);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);

/// Flag value if given, else GBTWIN_SEED from the environment, else `fallback`.
[[nodiscard]] std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t fallback = 0);

}  // namespace gbtwin
