#include "sentidrift/exports.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <system_error>

#include <json.hpp>

#include "sentidrift/error.hpp"

namespace sentidrift {
namespace {

using ojson = nlohmann::ordered_json;

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    if (std::string_view(buf) == "-0.00") return "0.00";
    return buf;
}

std::vector<std::string> split_simple_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

} // namespace

std::string format_real(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
}

std::string window_scores_csv(std::span<const WindowScore> scores) {
    std::string out = "window,count,score,gap_before\n";
    for (const auto& s : scores) {
        out += std::to_string(s.index) + ',' + std::to_string(s.count) + ',' + format_real(s.score) + ',' +
               (s.gap_before ? "true" : "false") + '\n';
    }
    return out;
}

std::string topic_scores_csv(std::span<const WindowScore> scores) {
    std::string out = "window,topic,count,score\n";
    for (const auto& s : scores) {
        for (const auto& [topic, ts] : s.topic_scores) {
            out += std::to_string(s.index) + ',' + csv_field(topic) + ',' + std::to_string(ts.counts.n) + ',' +
                   format_real(ts.score) + '\n';
        }
    }
    return out;
}

std::string before_after_csv(const AnomalyReport& report) {
    std::string out = "window,previous_score,current_score,delta\n";
    for (const auto& a : report.anomalies) {
        out += std::to_string(a.window_index) + ',' + format_real(a.previous_score) + ',' +
               format_real(a.current_score) + ',' + format_real(a.delta) + '\n';
    }
    return out;
}

std::string before_after_table(const AnomalyReport& report) {
    std::string out;
    char line[160];
    if (report.insufficient_data) return "insufficient data: fewer than two windows\n";
    std::snprintf(line, sizeof line, "tau = %.4f  (alpha = %.2f%s)\n", report.tau.value_or(0.0), report.alpha,
                  report.override_tau ? ", override" : "");
    out += line;
    if (report.anomalies.empty()) return out + "no anomalous windows\n";
    std::snprintf(line, sizeof line, "%8s  %14s  %13s  %8s\n", "Window", "Previous Score", "Current Score",
                  "Delta");
    out += line;
    for (const auto& a : report.anomalies) {
        std::snprintf(line, sizeof line, "%8zu  %14s  %13s  %8s%s\n", a.window_index,
                      fixed2(a.previous_score).c_str(), fixed2(a.current_score).c_str(), fixed2(a.delta).c_str(),
                      a.gap_before ? "  (gap)" : "");
        out += line;
    }
    return out;
}

std::string anomaly_report_json(const AnomalyReport& report) {
    ojson j;
    j["tau"] = optional_number(report.tau);
    j["mu_delta"] = optional_number(report.mu_delta);
    j["sigma_delta"] = optional_number(report.sigma_delta);
    j["alpha"] = report.alpha;
    j["insufficient_data"] = report.insufficient_data;
    if (report.override_tau) j["threshold_override"] = *report.override_tau;
    if (report.history) j["history"] = *report.history;
    j["windows"] = report.window_count;
    ojson rows = ojson::array();
    for (const auto& a : report.anomalies) {
        ojson row;
        row["window"] = a.window_index;
        row["previous_score"] = a.previous_score;
        row["current_score"] = a.current_score;
        row["delta"] = a.delta;
        row["gap_before"] = a.gap_before;
        if (report.history) row["tau"] = a.tau;
        rows.push_back(std::move(row));
    }
    j["anomalies"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string reason_distribution_csv(const ReasonDistribution& dist) {
    std::string out = "topic,anomalous_proportion,normal_proportion,anomalous_count,normal_count\n";
    for (const auto& t : dist.topics) {
        out += csv_field(t.topic) + ',' + (t.anomalous_proportion ? format_real(*t.anomalous_proportion) : "") + ',' +
               (t.normal_proportion ? format_real(*t.normal_proportion) : "") + ',' +
               std::to_string(t.anomalous_count) + ',' + std::to_string(t.normal_count) + '\n';
    }
    return out;
}

std::string heatmap_csv(const HeatmapMatrix& matrix) {
    std::string out = "topic";
    for (const auto c : matrix.columns) out += ',' + std::to_string(c);
    out += '\n';
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        out += csv_field(matrix.rows[r]);
        for (std::size_t c = 0; c < matrix.columns.size(); ++c) {
            out += ',';
            if (const auto& cell = matrix.at(r, c)) out += format_real(*cell);
        }
        out += '\n';
    }
    return out;
}

std::string trajectories_csv(const TrajectorySet& set) {
    std::string out = "topic,window,score\n";
    for (const auto& s : set.series) {
        for (const auto& p : s.points)
            out += csv_field(s.topic) + ',' + std::to_string(p.window_index) + ',' + format_real(p.score) + '\n';
    }
    return out;
}

std::string row_errors_csv(std::span<const RowError> errors) {
    std::string out = "line,reason\n";
    for (const auto& e : errors) out += std::to_string(e.line) + ',' + csv_field(e.reason) + '\n';
    return out;
}

std::string scored_comments_csv(std::span<const ScoredComment> comments) {
    std::string out = "id,timestamp,label,score,topic,text\n";
    for (const auto& c : comments) {
        out += csv_field(c.comment.id) + ',' + format_rfc3339(c.comment.timestamp) + ',' +
               std::string(label_name(c.label)) + ',' + std::to_string(c.score) + ',' + csv_field(c.comment.topic) +
               ',' + csv_field(c.comment.text) + '\n';
    }
    return out;
}

std::vector<WindowScore> read_window_scores(std::istream& in) {
    std::vector<WindowScore> out;
    std::string line;
    std::size_t lineno = 0;
    int col_window = -1;
    int col_count = -1;
    int col_score = -1;
    int col_gap = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = split_simple_csv(line);
        if (col_score < 0) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == "window") col_window = static_cast<int>(i);
                else if (fields[i] == "count") col_count = static_cast<int>(i);
                else if (fields[i] == "score") col_score = static_cast<int>(i);
                else if (fields[i] == "gap_before") col_gap = static_cast<int>(i);
            }
            if (col_score < 0) throw ParseError("window-score file needs a header with a 'score' column");
            continue;
        }
        auto field = [&](int col) -> const std::string& {
            if (col < 0 || static_cast<std::size_t>(col) >= fields.size())
                throw ParseError("line " + std::to_string(lineno) + ": missing field");
            return fields[static_cast<std::size_t>(col)];
        };
        try {
            std::size_t index = out.size();
            if (col_window >= 0) index = std::stoull(field(col_window));
            std::size_t count = 0;
            if (col_count >= 0) count = std::stoull(field(col_count));
            const std::string& score_text = field(col_score);
            double value = 0.0;
            const auto res = std::from_chars(score_text.data(), score_text.data() + score_text.size(), value);
            if (res.ec != std::errc{} || res.ptr != score_text.data() + score_text.size() || !std::isfinite(value))
                throw ParseError("invalid score '" + score_text + "'");
            if (value < -1.0 || value > 1.0) throw ParseError("score outside [-1, 1]");
            Fraction exact;
            const auto from_counts = count > 0 ? fraction_for(value, static_cast<std::int64_t>(count)) : Fraction{};
            if (count > 0 && from_counts.to_double() == value && from_counts.den() <= static_cast<std::int64_t>(count) &&
                static_cast<std::int64_t>(count) % from_counts.den() == 0)
                exact = from_counts;
            else
                exact = parse_decimal(score_text);
            const bool gap = col_gap >= 0 && (field(col_gap) == "true" || field(col_gap) == "1");
            auto ws = make_window_score(index, count, exact, gap);
            if (!out.empty() && ws.index <= out.back().index)
                throw ParseError("window indices must be strictly increasing");
            out.push_back(std::move(ws));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const std::logic_error&) {
            throw ParseError("line " + std::to_string(lineno) + ": malformed window-score row");
        }
    }
    return out;
}

std::vector<WindowScore> read_window_scores_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open window-score file '" + path.string() + "'");
    return read_window_scores(in);
}

} // namespace sentidrift
