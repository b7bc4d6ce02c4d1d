#include "sentidrift/ingest.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <istream>

#include <json.hpp>

#include "sentidrift/error.hpp"

namespace sentidrift {
namespace {

using json = nlohmann::json;

enum Column { kId = 0, kTimestamp, kText, kLabel, kTopic, kColumnCount };
constexpr std::array<std::string_view, kColumnCount> kColumnNames{"id", "timestamp", "text", "label", "topic"};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::optional<std::string> non_empty(std::string value) {
    if (trim(value).empty()) return std::nullopt;
    return value;
}

// \r\n and lone \r become \n.
std::string normalize_newlines(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

std::optional<std::string> json_scalar_string(const json& v) {
    if (v.is_null()) return std::nullopt;
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    return std::nullopt;
}

} // namespace

InputFormat parse_format(std::string_view name) {
    const std::string n = lower_ascii(name);
    if (n == "csv") return InputFormat::Csv;
    if (n == "jsonl" || n == "ndjson") return InputFormat::Jsonl;
    throw ConfigError("unknown input format '" + std::string(name) + "' (use csv or jsonl)");
}

InputFormat infer_format(const std::filesystem::path& path) {
    const std::string ext = lower_ascii(path.extension().string());
    if (ext == ".csv") return InputFormat::Csv;
    if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") return InputFormat::Jsonl;
    throw ConfigError("cannot infer input format from '" + path.string() + "'; pass --format csv|jsonl");
}

// ---------------------------------------------------------------------------
// RecordReader

RecordReader::RecordReader(std::istream& in, InputFormat format) : in_(in), format_(format) {
    if (!in_.good() && !in_.eof()) throw IoError("input stream is not readable");
    if (format_ != InputFormat::Csv) return;

    std::vector<std::string> header;
    std::size_t start = 0;
    std::string error;
    if (!read_csv_row(header, start, error)) return; // empty input
    if (!error.empty()) throw ParseError("line " + std::to_string(start) + ": malformed CSV header: " + error);
    columns_.assign(kColumnCount, -1);
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = lower_ascii(trim(header[i]));
        for (std::size_t c = 0; c < kColumnNames.size(); ++c) {
            if (name == kColumnNames[c] && columns_[c] < 0) columns_[c] = static_cast<int>(i);
        }
    }
    header_width_ = header.size();
    if (columns_[kTimestamp] < 0 || columns_[kText] < 0)
        throw ParseError("CSV header must name 'timestamp' and 'text' columns (schema: id,timestamp,text,label,topic)");
}

bool RecordReader::read_csv_row(std::vector<std::string>& fields, std::size_t& start_line, std::string& error) {
    fields.clear();
    error.clear();
    // Skip blank lines.
    do {
        if (!std::getline(in_, buffer_)) {
            if (in_.bad()) throw IoError("read error on input stream");
            return false;
        }
        ++line_;
        if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
    } while (trim(buffer_).empty());
    start_line = line_;

    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    std::size_t i = 0;
    for (;;) {
        if (i >= buffer_.size()) {
            if (quoted) {
                // Quoted field spans a line break.
                if (!std::getline(in_, buffer_)) {
                    if (in_.bad()) throw IoError("read error on input stream");
                    error = "unterminated quoted field";
                    return true;
                }
                ++line_;
                if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
                field.push_back('\n');
                i = 0;
                continue;
            }
            fields.push_back(std::move(field));
            return true;
        }
        const char c = buffer_[i++];
        if (quoted) {
            if (c == '"') {
                if (i < buffer_.size() && buffer_[i] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            field_was_quoted = false;
        } else if (c == '"') {
            if (!field.empty() || field_was_quoted) {
                error = "unexpected quote in unquoted field " + std::to_string(fields.size() + 1);
                // The remainder of the physical line is discarded.
                return true;
            }
            quoted = true;
            field_was_quoted = true;
        } else {
            if (field_was_quoted) {
                error = "characters after closing quote in field " + std::to_string(fields.size() + 1);
                return true;
            }
            field.push_back(c);
        }
    }
}

std::optional<std::variant<RawRecord, RowError>> RecordReader::next() {
    return format_ == InputFormat::Csv ? next_csv() : next_jsonl();
}

std::optional<std::variant<RawRecord, RowError>> RecordReader::next_csv() {
    if (columns_.empty()) return std::nullopt;
    std::vector<std::string> fields;
    std::size_t start = 0;
    std::string error;
    if (!read_csv_row(fields, start, error)) return std::nullopt;
    if (!error.empty()) return RowError{start, error};
    if (fields.size() != header_width_)
        return RowError{start, "expected " + std::to_string(header_width_) + " fields, found " +
                                   std::to_string(fields.size())};

    auto take = [&](Column c) -> std::string {
        return columns_[c] < 0 ? std::string{} : std::move(fields[static_cast<std::size_t>(columns_[c])]);
    };
    RawRecord rec;
    rec.line = start;
    rec.id = non_empty(take(kId));
    rec.timestamp_raw = take(kTimestamp);
    rec.text = take(kText);
    rec.label_raw = non_empty(take(kLabel));
    rec.topic_raw = non_empty(take(kTopic));
    if (trim(rec.timestamp_raw).empty()) return RowError{start, "missing timestamp"};
    return rec;
}

std::optional<std::variant<RawRecord, RowError>> RecordReader::next_jsonl() {
    for (;;) {
        if (!std::getline(in_, buffer_)) {
            if (in_.bad()) throw IoError("read error on input stream");
            return std::nullopt;
        }
        ++line_;
        if (!trim(buffer_).empty()) break;
    }
    json obj = json::parse(buffer_, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) return RowError{line_, "invalid JSON"};
    if (!obj.is_object()) return RowError{line_, "expected a JSON object"};

    RawRecord rec;
    rec.line = line_;
    const auto text = obj.find("text");
    if (text == obj.end() || text->is_null()) return RowError{line_, "missing text"};
    if (!text->is_string()) return RowError{line_, "text must be a string"};
    rec.text = text->get<std::string>();

    const auto ts = obj.find("timestamp");
    if (ts == obj.end() || ts->is_null()) return RowError{line_, "missing timestamp"};
    auto ts_str = json_scalar_string(*ts);
    if (!ts_str) return RowError{line_, "timestamp must be a string or integer"};
    rec.timestamp_raw = std::move(*ts_str);

    auto optional_field = [&](const char* key, std::optional<std::string>& out) -> bool {
        const auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) return true;
        auto v = json_scalar_string(*it);
        if (!v) return false;
        out = non_empty(std::move(*v));
        return true;
    };
    if (!optional_field("id", rec.id)) return RowError{line_, "id must be a string or integer"};
    if (!optional_field("label", rec.label_raw)) return RowError{line_, "label must be a string"};
    if (!optional_field("topic", rec.topic_raw)) return RowError{line_, "topic must be a string"};
    return rec;
}

ParseResult parse_records(std::istream& in, InputFormat format) {
    ParseResult result;
    RecordReader reader(in, format);
    while (auto item = reader.next()) {
        if (auto* rec = std::get_if<RawRecord>(&*item)) result.records.push_back(std::move(*rec));
        else result.errors.push_back(std::get<RowError>(std::move(*item)));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Validation and deduplication

Comment validate_and_build(const RawRecord& raw, std::size_t ordinal) {
    Comment c;
    c.text = normalize_newlines(trim(raw.text));
    if (c.text.empty()) throw ParseError("empty text");
    c.timestamp = normalize_timestamp(raw.timestamp_raw);
    if (raw.id) {
        c.id = std::string(trim(*raw.id));
    } else {
        c.id = "#" + std::to_string(ordinal);
        c.id_synthesized = true;
    }
    if (raw.label_raw) c.label = parse_label(*raw.label_raw);
    if (raw.topic_raw) {
        const auto topic = trim(*raw.topic_raw);
        if (!topic.empty()) c.topic = std::string(topic);
    }
    return c;
}

std::size_t DuplicateFilter::KeyHash::operator()(const std::pair<std::string, EpochMillis>& k) const noexcept {
    const std::size_t h = std::hash<std::string>{}(k.first);
    return h ^ (std::hash<EpochMillis>{}(k.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

bool DuplicateFilter::admit(const Comment& c) {
    if (!c.id_synthesized) return ids_.insert(c.id).second;
    return text_keys_.emplace(c.text, c.timestamp).second;
}

std::vector<Comment> deduplicate(std::vector<Comment> comments, std::size_t* removed) {
    DuplicateFilter filter;
    std::vector<Comment> out;
    out.reserve(comments.size());
    for (auto& c : comments) {
        if (filter.admit(c)) out.push_back(std::move(c));
    }
    if (removed) *removed = comments.size() - out.size();
    return out;
}

IngestResult ingest(std::istream& in, InputFormat format) {
    IngestResult result;
    RecordReader reader(in, format);
    std::vector<Comment> valid;
    std::size_t ordinal = 0;
    while (auto item = reader.next()) {
        ++result.summary.parsed;
        if (auto* err = std::get_if<RowError>(&*item)) {
            result.errors.push_back(std::move(*err));
            continue;
        }
        const auto& rec = std::get<RawRecord>(*item);
        try {
            valid.push_back(validate_and_build(rec, rec.line ? rec.line : ordinal));
        } catch (const ParseError& e) {
            result.errors.push_back({rec.line, e.what()});
        }
        ++ordinal;
    }
    result.summary.skipped = result.errors.size();
    result.comments = deduplicate(std::move(valid), &result.summary.duplicates);
    result.summary.accepted = result.comments.size();
    return result;
}

IngestResult ingest_file(const std::filesystem::path& path, std::optional<InputFormat> format) {
    const InputFormat fmt = format ? *format : infer_format(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input file '" + path.string() + "'");
    return ingest(in, fmt);
}

std::string to_json(const IngestSummary& summary) {
    nlohmann::ordered_json j;
    j["parsed"] = summary.parsed;
    j["accepted"] = summary.accepted;
    j["skipped"] = summary.skipped;
    j["duplicates"] = summary.duplicates;
    return j.dump();
}

} // namespace sentidrift
