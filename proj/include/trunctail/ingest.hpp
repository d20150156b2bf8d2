#pragma once

#include <optional>
#include <string>
#include <vector>

namespace trunctail {

struct IngestOptions {
    /// CSV column name; when absent every non-blank line holds one number.
    std::optional<std::string> column;
};

/// Reads a numeric series from a plain or gzip-compressed file. Lines starting
/// with '#' and blank lines are skipped. Non-finite or unparsable entries raise
/// DataError naming the line.
std::vector<double> ingest(const std::string& path, const IngestOptions& options = {});

/// Same parser over in-memory text; `origin` prefixes error messages.
std::vector<double> parse_series(const std::string& text, const IngestOptions& options,
                                 const std::string& origin = "<input>");

}  // namespace trunctail
