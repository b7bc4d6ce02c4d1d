#include "sentidrift/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "sentidrift/error.hpp"

namespace sentidrift {
namespace {

struct GroupCounts {
    std::size_t anomalous = 0;
    std::size_t normal = 0;
};

} // namespace

ReasonDistribution reason_distribution(std::span<const Window> windows, const AnomalyReport& report,
                                       LabelFilter filter) {
    std::map<std::string, GroupCounts, std::less<>> by_topic;
    ReasonDistribution dist;
    for (const auto& w : windows) {
        const bool flagged = report.is_flagged(w.index);
        for (const auto& m : w.members) {
            if (filter == LabelFilter::NegativeOnly && m.label != SentimentLabel::Negative) continue;
            auto& g = by_topic[m.comment.topic];
            if (flagged) {
                ++g.anomalous;
                ++dist.anomalous_comment_count;
            } else {
                ++g.normal;
                ++dist.normal_comment_count;
            }
        }
    }
    for (const auto& [topic, g] : by_topic) {
        TopicShare share;
        share.topic = topic;
        share.anomalous_count = g.anomalous;
        share.normal_count = g.normal;
        if (dist.anomalous_comment_count > 0)
            share.anomalous_proportion =
                static_cast<double>(g.anomalous) / static_cast<double>(dist.anomalous_comment_count);
        if (dist.normal_comment_count > 0)
            share.normal_proportion = static_cast<double>(g.normal) / static_cast<double>(dist.normal_comment_count);
        dist.topics.push_back(std::move(share));
    }
    std::stable_sort(dist.topics.begin(), dist.topics.end(), [](const TopicShare& a, const TopicShare& b) {
        return a.anomalous_count + a.normal_count > b.anomalous_count + b.normal_count;
    });
    return dist;
}

std::vector<std::string> topics_by_volume(std::span<const WindowScore> scores, bool include_unlabeled) {
    std::map<std::string, std::int64_t, std::less<>> volume;
    for (const auto& ws : scores) {
        for (const auto& [topic, ts] : ws.topic_scores) volume[topic] += ts.counts.n;
    }
    std::vector<std::pair<std::string, std::int64_t>> ordered(volume.begin(), volume.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> out;
    for (auto& [topic, n] : ordered) {
        if (!include_unlabeled && topic == kUnlabeledTopic) continue;
        out.push_back(std::move(topic));
    }
    return out;
}

TrajectorySet topic_trajectories(std::span<const WindowScore> scores, std::span<const std::string> requested,
                                 std::optional<std::vector<std::string>> known_topics) {
    const std::vector<std::string> known = known_topics ? std::move(*known_topics) : topics_by_volume(scores, true);
    std::vector<std::string> wanted(requested.begin(), requested.end());
    if (wanted.empty()) {
        for (const auto& t : known)
            if (t != kUnlabeledTopic) wanted.push_back(t);
    }

    TrajectorySet set;
    for (const auto& topic : wanted) {
        if (std::find(known.begin(), known.end(), topic) == known.end()) {
            std::string msg = "unknown topic '" + topic + "'; known topics:";
            for (std::size_t i = 0; i < known.size(); ++i) msg += (i ? ", " : " ") + known[i];
            if (known.empty()) msg += " (none)";
            throw ConfigError(msg);
        }
        TopicTrajectory series;
        series.topic = topic;
        for (const auto& ws : scores) {
            const auto it = ws.topic_scores.find(topic);
            if (it != ws.topic_scores.end()) series.points.push_back({ws.index, it->second.score});
        }
        if (series.points.empty()) set.warnings.push_back("topic '" + topic + "' does not occur in any window");
        set.series.push_back(std::move(series));
    }
    return set;
}

HeatmapMatrix heatmap_matrix(std::span<const WindowScore> scores, bool include_unlabeled) {
    HeatmapMatrix m;
    m.rows = topics_by_volume(scores, include_unlabeled);
    m.columns.reserve(scores.size());
    for (const auto& ws : scores) m.columns.push_back(ws.index);
    m.cells.resize(m.rows.size() * m.columns.size());
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        for (std::size_t c = 0; c < scores.size(); ++c) {
            const auto it = scores[c].topic_scores.find(m.rows[r]);
            if (it != scores[c].topic_scores.end()) m.cells[r * m.columns.size() + c] = it->second.score;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// SVG

double ChartFrame::x_px(double x) const {
    return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
}

double ChartFrame::y_px(double y) const {
    return kTop + (y_max - y) / (y_max - y_min) * (kHeight - kTop - kBottom);
}

double ChartFrame::y_value(double px) const {
    return y_max - (px - kTop) / (kHeight - kTop - kBottom) * (y_max - y_min);
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    // Avoid "-0.00".
    if (std::string_view(buf) == "-0.00") return "0.00";
    return buf;
}

std::string tick_label(double v, double step) {
    char buf[32];
    const int decimals = step >= 1.0 ? 0 : (step >= 0.1 ? 1 : 2);
    std::snprintf(buf, sizeof buf, "%.*f", decimals, std::fabs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

double nice_step(double span, int max_ticks, std::initializer_list<double> mantissas) {
    for (double scale = 1e-3; scale < 1e12; scale *= 10.0) {
        for (double m : mantissas) {
            const double step = m * scale;
            if (span / step <= max_ticks) return step;
        }
    }
    return span;
}

ChartFrame frame_for(double x_lo, double x_hi, double y_lo, double y_hi) {
    ChartFrame f;
    if (x_hi <= x_lo) {
        x_lo -= 1.0;
        x_hi += 1.0;
    }
    f.x_min = x_lo;
    f.x_max = x_hi;
    y_lo = std::min(y_lo, 0.0);
    y_hi = std::max(y_hi, 0.0);
    const double pad = std::max(0.05, 0.05 * (y_hi - y_lo));
    f.y_min = std::floor((y_lo - pad) * 10.0) / 10.0;
    f.y_max = std::ceil((y_hi + pad) * 10.0) / 10.0;
    return f;
}

void open_document(std::string& out, const ChartFrame& f, std::string_view title, std::string_view y_label) {
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"480\" viewBox=\"0 0 960 480\" "
           "font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"960\" height=\"480\" fill=\"#ffffff\"/>\n";
    out += "<text class=\"title\" x=\"480\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">";
    out += title;
    out += "</text>\n";
    out += "<g class=\"plot\" data-x-min=\"" + num(f.x_min) + "\" data-x-max=\"" + num(f.x_max) + "\" data-y-min=\"" +
           num(f.y_min) + "\" data-y-max=\"" + num(f.y_max) + "\" data-left=\"" + num(ChartFrame::kLeft) +
           "\" data-top=\"" + num(ChartFrame::kTop) + "\" data-bottom=\"" + num(ChartFrame::kBottom) + "\">\n";

    const double left = ChartFrame::kLeft;
    const double right = ChartFrame::kWidth - ChartFrame::kRight;
    const double top = ChartFrame::kTop;
    const double bottom = ChartFrame::kHeight - ChartFrame::kBottom;

    const double y_step = nice_step(f.y_max - f.y_min, 10, {0.1, 0.2, 0.25, 0.5});
    for (double v = std::ceil(f.y_min / y_step - 1e-9) * y_step; v <= f.y_max + 1e-9; v += y_step) {
        const std::string y = num(f.y_px(v));
        out += "<line class=\"grid\" x1=\"" + num(left) + "\" y1=\"" + y + "\" x2=\"" + num(right) + "\" y2=\"" + y +
               "\" stroke=\"#e5e5e5\"/>\n";
        out += "<text class=\"tick\" x=\"" + num(left - 6) + "\" y=\"" + y + "\" text-anchor=\"end\" dy=\"4\">" +
               tick_label(v, y_step) + "</text>\n";
    }
    const double x_step = nice_step(f.x_max - f.x_min, 12, {1, 2, 5});
    for (double v = std::ceil(f.x_min / x_step - 1e-9) * x_step; v <= f.x_max + 1e-9; v += x_step) {
        const std::string x = num(f.x_px(v));
        out += "<text class=\"tick\" x=\"" + x + "\" y=\"" + num(bottom + 18) + "\" text-anchor=\"middle\">" +
               tick_label(v, std::max(1.0, x_step)) + "</text>\n";
    }
    out += "<rect class=\"axes\" x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(right - left) +
           "\" height=\"" + num(bottom - top) + "\" fill=\"none\" stroke=\"#333333\"/>\n";
    out += "<text class=\"axis-label\" x=\"480\" y=\"" + num(ChartFrame::kHeight - 10) +
           "\" text-anchor=\"middle\">window index</text>\n";
    out += "<text class=\"axis-label\" x=\"16\" y=\"240\" text-anchor=\"middle\" transform=\"rotate(-90 16 240)\">";
    out += y_label;
    out += "</text>\n";
}

void horizontal_line(std::string& out, const ChartFrame& f, double value, std::string_view cls,
                     std::string_view style) {
    const std::string y = num(f.y_px(value));
    out += "<line class=\"";
    out += cls;
    out += "\" x1=\"" + num(ChartFrame::kLeft) + "\" y1=\"" + y + "\" x2=\"" +
           num(ChartFrame::kWidth - ChartFrame::kRight) + "\" y2=\"" + y + "\" ";
    out += style;
    out += "/>\n";
}

void close_document(std::string& out) { out += "</g>\n</svg>\n"; }

} // namespace

std::string render_trajectory_svg(std::span<const WindowScore> scores, const AnomalyReport& report) {
    if (scores.empty()) throw std::invalid_argument("render_trajectory_svg: no window scores");
    double lo = scores.front().score;
    double hi = lo;
    for (const auto& s : scores) {
        lo = std::min(lo, s.score);
        hi = std::max(hi, s.score);
    }
    const ChartFrame f = frame_for(static_cast<double>(scores.front().index),
                                   static_cast<double>(scores.back().index), lo, hi);
    std::string out;
    out.reserve(256 * scores.size() + 4096);
    open_document(out, f, "Aggregated sentiment per window", "mean sentiment S");
    horizontal_line(out, f, 0.0, "zero-line", "stroke=\"#888888\" stroke-width=\"1\"");

    out += "<polyline class=\"series\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i) out += ' ';
        out += num(f.x_px(static_cast<double>(scores[i].index))) + "," + num(f.y_px(scores[i].score));
    }
    out += "\"/>\n";

    for (const auto& s : scores) {
        if (!report.is_flagged(s.index)) continue;
        out += "<circle class=\"anomaly\" data-window=\"" + std::to_string(s.index) + "\" cx=\"" +
               num(f.x_px(static_cast<double>(s.index))) + "\" cy=\"" + num(f.y_px(s.score)) +
               "\" r=\"4\" fill=\"#d62728\"/>\n";
    }
    close_document(out);
    return out;
}

std::string render_delta_svg(const DeltaSeries& deltas, double tau) {
    if (deltas.deltas.empty()) throw std::invalid_argument("render_delta_svg: no deltas");
    double lo = tau;
    double hi = tau;
    for (const auto& p : deltas.deltas) {
        lo = std::min(lo, p.delta);
        hi = std::max(hi, p.delta);
    }
    const ChartFrame f = frame_for(static_cast<double>(deltas.deltas.front().window_index),
                                   static_cast<double>(deltas.deltas.back().window_index), lo, hi);
    std::string out;
    out.reserve(256 * deltas.deltas.size() + 4096);
    open_document(out, f, "Window-to-window sentiment change", "delta S");
    horizontal_line(out, f, 0.0, "zero-line", "stroke=\"#888888\" stroke-width=\"1\"");

    const std::string y0 = num(f.y_px(0.0));
    for (const auto& p : deltas.deltas) {
        const std::string x = num(f.x_px(static_cast<double>(p.window_index)));
        const bool below = p.delta < tau;
        out += "<line class=\"delta\" data-window=\"" + std::to_string(p.window_index) + "\" x1=\"" + x + "\" y1=\"" +
               y0 + "\" x2=\"" + x + "\" y2=\"" + num(f.y_px(p.delta)) + "\" stroke=\"" +
               (below ? "#d62728" : "#1f77b4") + "\" stroke-width=\"1.5\"/>\n";
        if (below) {
            out += "<circle class=\"crossing\" data-window=\"" + std::to_string(p.window_index) + "\" cx=\"" + x +
                   "\" cy=\"" + num(f.y_px(p.delta)) + "\" r=\"3.5\" fill=\"#d62728\"/>\n";
        }
    }
    horizontal_line(out, f, tau, "threshold", "stroke=\"#d62728\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"");
    char label[64];
    std::snprintf(label, sizeof label, "tau = %.4f", tau);
    out += "<text class=\"threshold-label\" x=\"" + num(ChartFrame::kWidth - ChartFrame::kRight - 4) + "\" y=\"" +
           num(f.y_px(tau) - 5) + "\" text-anchor=\"end\" fill=\"#d62728\">" + label + "</text>\n";
    close_document(out);
    return out;
}

} // namespace sentidrift
