#include "sentidrift/detection.hpp"

#include <algorithm>

#include "sentidrift/error.hpp"

namespace sentidrift {
namespace {

Threshold threshold_from(const RunningStats& stats, const ThresholdConfig& config) {
    Threshold t;
    if (stats.count() > 0) {
        t.mu = stats.mean();
        t.sigma = stats.population_stddev();
    }
    if (config.override_tau) t.tau = *config.override_tau;
    else t.tau = *t.mu - config.alpha * *t.sigma;
    return t;
}

std::span<const double> trailing(std::span<const double> values, std::size_t end, std::optional<std::size_t> history) {
    const std::size_t begin = history && end > *history ? end - *history : 0;
    return values.subspan(begin, end - begin);
}

AnomalyRow make_row(const DeltaPoint& p, double tau) {
    return AnomalyRow{p.window_index, p.previous_score, p.current_score, p.delta, p.gap_before, tau};
}

} // namespace

DeltaSeries delta_series(std::span<const WindowScore> scores) {
    DeltaSeries out;
    out.source_series_length = scores.size();
    if (scores.size() < 2) return out;
    out.deltas.reserve(scores.size() - 1);
    for (std::size_t i = 1; i < scores.size(); ++i) {
        const auto& prev = scores[i - 1];
        const auto& cur = scores[i];
        out.deltas.push_back(
            DeltaPoint{cur.index, prev.score, cur.score, (cur.exact - prev.exact).to_double(), cur.gap_before});
    }
    return out;
}

void validate(const ThresholdConfig& config) {
    if (!std::isfinite(config.alpha) || config.alpha <= 0.0) throw ConfigError("alpha must be a positive number");
    if (config.override_tau && !std::isfinite(*config.override_tau))
        throw ConfigError("threshold override must be finite");
    if (config.history && *config.history == 0) throw ConfigError("history must be at least 1");
}

std::optional<Threshold> compute_threshold(std::span<const double> deltas, const ThresholdConfig& config) {
    if (deltas.empty() && !config.override_tau) return std::nullopt;
    RunningStats stats;
    for (double d : deltas) stats.push(d);
    return threshold_from(stats, config);
}

std::optional<Threshold> compute_threshold(const DeltaSeries& deltas, const ThresholdConfig& config) {
    std::vector<double> values;
    values.reserve(deltas.deltas.size());
    for (const auto& p : deltas.deltas) values.push_back(p.delta);
    return compute_threshold(values, config);
}

std::vector<AnomalyRow> detect(const DeltaSeries& deltas, double tau) {
    std::vector<AnomalyRow> rows;
    for (const auto& p : deltas.deltas) {
        if (p.delta < tau) rows.push_back(make_row(p, tau));
    }
    return rows;
}

std::vector<std::size_t> AnomalyReport::flagged_windows() const {
    std::vector<std::size_t> out;
    out.reserve(anomalies.size());
    for (const auto& a : anomalies) out.push_back(a.window_index);
    return out;
}

bool AnomalyReport::is_flagged(std::size_t window_index) const {
    return std::ranges::binary_search(anomalies, window_index, {}, &AnomalyRow::window_index);
}

AnomalyReport analyze(std::span<const WindowScore> scores, const ThresholdConfig& config) {
    validate(config);
    AnomalyReport report;
    report.alpha = config.alpha;
    report.override_tau = config.override_tau;
    report.history = config.history;
    report.window_count = scores.size();
    if (scores.size() < 2) {
        report.insufficient_data = true;
        report.tau = config.override_tau;
        return report;
    }
    report.insufficient_data = false;

    const DeltaSeries deltas = delta_series(scores);
    std::vector<double> values;
    values.reserve(deltas.deltas.size());
    for (const auto& p : deltas.deltas) values.push_back(p.delta);

    if (!config.history) {
        const Threshold t = *compute_threshold(values, config);
        report.tau = t.tau;
        report.mu_delta = t.mu;
        report.sigma_delta = t.sigma;
        report.anomalies = detect(deltas, t.tau);
        return report;
    }

    // Each window is judged against the trailing history ending at itself.
    Threshold last;
    for (std::size_t j = 0; j < values.size(); ++j) {
        last = *compute_threshold(trailing(values, j + 1, config.history), config);
        if (values[j] < last.tau) report.anomalies.push_back(make_row(deltas.deltas[j], last.tau));
    }
    report.tau = last.tau;
    report.mu_delta = last.mu;
    report.sigma_delta = last.sigma;
    return report;
}

// ---------------------------------------------------------------------------
// OnlineDetector

OnlineDetector::OnlineDetector(ThresholdConfig config) : config_(config) { validate(config_); }

std::optional<Threshold> OnlineDetector::current_threshold() const {
    if (config_.history) return compute_threshold(trailing(values_, values_.size(), config_.history), config_);
    if (stats_.count() == 0 && !config_.override_tau) return std::nullopt;
    return threshold_from(stats_, config_);
}

std::optional<Decision> OnlineDetector::update(const WindowScore& score) {
    ++windows_;
    if (!last_) {
        last_ = score;
        return std::nullopt;
    }
    const DeltaPoint point{score.index, last_->score, score.score, (score.exact - last_->exact).to_double(),
                           score.gap_before};
    seen_.deltas.push_back(point);
    seen_.source_series_length = windows_;
    values_.push_back(point.delta);
    stats_.push(point.delta);

    const Threshold t = *current_threshold();
    taus_.push_back(t.tau);
    last_threshold_ = t;
    last_ = score;
    return Decision{point.window_index, point.delta, t, point.delta < t.tau, point.gap_before};
}

AnomalyReport OnlineDetector::report() const {
    AnomalyReport report;
    report.alpha = config_.alpha;
    report.override_tau = config_.override_tau;
    report.history = config_.history;
    report.window_count = windows_;
    if (windows_ < 2) {
        report.insufficient_data = true;
        report.tau = config_.override_tau;
        return report;
    }
    report.insufficient_data = false;
    if (!config_.history) {
        const Threshold t = threshold_from(stats_, config_);
        report.tau = t.tau;
        report.mu_delta = t.mu;
        report.sigma_delta = t.sigma;
        report.anomalies = detect(seen_, t.tau);
        return report;
    }
    for (std::size_t j = 0; j < seen_.deltas.size(); ++j) {
        if (seen_.deltas[j].delta < taus_[j]) report.anomalies.push_back(make_row(seen_.deltas[j], taus_[j]));
    }
    report.tau = last_threshold_.tau;
    report.mu_delta = last_threshold_.mu;
    report.sigma_delta = last_threshold_.sigma;
    return report;
}

} // namespace sentidrift
