#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "sentidrift/comment.hpp"

namespace sentidrift {

enum class InputFormat { Csv, Jsonl };

/// Picks the format from a file extension (.csv, .jsonl, .ndjson, .json).
/// Throws ConfigError for anything else.
InputFormat infer_format(const std::filesystem::path& path);
InputFormat parse_format(std::string_view name);

struct RawRecord {
    std::optional<std::string> id;
    std::string timestamp_raw;
    std::string text;
    std::optional<std::string> label_raw;
    std::optional<std::string> topic_raw;
    std::size_t line = 0; ///< 1-based physical line where the record starts
};

/// A record that was rejected, at any stage of ingest.
struct RowError {
    std::size_t line = 0;
    std::string reason;
};

struct ParseResult {
    std::vector<RawRecord> records;
    std::vector<RowError> errors;
};

/// Pulls one record at a time. For CSV the header is read on construction;
/// an empty stream yields nothing, while a non-empty one without `timestamp`
/// and `text` columns throws ParseError.
class RecordReader {
public:
    RecordReader(std::istream& in, InputFormat format);

    /// nullopt at end of input.
    std::optional<std::variant<RawRecord, RowError>> next();

private:
    bool read_csv_row(std::vector<std::string>& fields, std::size_t& start_line, std::string& error);
    std::optional<std::variant<RawRecord, RowError>> next_csv();
    std::optional<std::variant<RawRecord, RowError>> next_jsonl();

    std::istream& in_;
    InputFormat format_;
    std::size_t line_ = 0;
    std::vector<int> columns_; ///< field index for id, timestamp, text, label, topic (-1 = absent)
    std::size_t header_width_ = 0;
    std::string buffer_;
};

/// Reads every record from `in`. CSV input requires a header naming at least
/// `timestamp` and `text`; `id`, `label` and `topic` are optional columns and
/// empty cells count as absent. Malformed rows are reported by line, never
/// dropped silently. Throws IoError when the stream is unreadable.
ParseResult parse_records(std::istream& in, InputFormat format);

/// Trims text, normalizes line endings, parses the timestamp and label, and
/// maps a missing topic to UNLABELED. Throws ParseError on invalid input.
/// `ordinal` seeds the synthesized id when the record has none.
Comment validate_and_build(const RawRecord& raw, std::size_t ordinal);

/// Keeps the first occurrence of each key (explicit id, else text+timestamp),
/// preserving order. `removed`, when given, receives the number dropped.
std::vector<Comment> deduplicate(std::vector<Comment> comments, std::size_t* removed = nullptr);

/// Incremental duplicate filter shared by batch dedup and the streaming path.
class DuplicateFilter {
public:
    /// True the first time a key is seen.
    bool admit(const Comment& c);

private:
    struct KeyHash {
        std::size_t operator()(const std::pair<std::string, EpochMillis>& k) const noexcept;
    };
    std::unordered_set<std::string> ids_;
    std::unordered_set<std::pair<std::string, EpochMillis>, KeyHash> text_keys_;
};

struct IngestSummary {
    std::size_t parsed = 0;
    std::size_t accepted = 0;
    std::size_t skipped = 0;
    std::size_t duplicates = 0;
};

struct IngestResult {
    std::vector<Comment> comments;
    std::vector<RowError> errors;
    IngestSummary summary;
};

/// parse -> validate -> deduplicate. `parsed == accepted + skipped + duplicates`.
IngestResult ingest(std::istream& in, InputFormat format);
IngestResult ingest_file(const std::filesystem::path& path, std::optional<InputFormat> format = std::nullopt);

std::string to_json(const IngestSummary& summary);

} // namespace sentidrift
