#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sentidrift/aggregation.hpp"

namespace sentidrift {

/// Welford accumulator: count, running mean and sum of squared deviations.
/// Batch and online thresholds both go through this type so that the two
/// paths produce bit-identical statistics.
class RunningStats {
public:
    void push(double x) noexcept {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    [[nodiscard]] std::size_t count() const noexcept { return n_; }
    [[nodiscard]] double mean() const noexcept { return mean_; }
    /// Divides by n, not n - 1.
    [[nodiscard]] double population_variance() const noexcept {
        return n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0;
    }
    [[nodiscard]] double population_stddev() const noexcept { return std::sqrt(population_variance()); }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct DeltaPoint {
    std::size_t window_index = 0; ///< index of the later window
    double previous_score = 0.0;
    double current_score = 0.0;
    double delta = 0.0;
    bool gap_before = false;
};

struct DeltaSeries {
    std::vector<DeltaPoint> deltas;
    std::size_t source_series_length = 0;
};

/// S(T_k) - S(T_{k-1}) for each consecutive pair, formed exactly from the
/// window fractions and rounded once.
DeltaSeries delta_series(std::span<const WindowScore> scores);

struct ThresholdConfig {
    double alpha = 1.5;
    std::optional<double> override_tau;
    /// When set, each window's threshold uses only the trailing `history`
    /// deltas ending at that window.
    std::optional<std::size_t> history;
};

/// Throws ConfigError for alpha <= 0, non-finite values or history == 0.
void validate(const ThresholdConfig& config);

struct Threshold {
    double tau = 0.0;
    std::optional<double> mu;
    std::optional<double> sigma;
};

/// tau = mu - alpha * sigma with population sigma over `deltas`, or the
/// override when set. nullopt when there are no deltas and no override.
std::optional<Threshold> compute_threshold(std::span<const double> deltas, const ThresholdConfig& config);
std::optional<Threshold> compute_threshold(const DeltaSeries& deltas, const ThresholdConfig& config);

struct AnomalyRow {
    std::size_t window_index = 0;
    double previous_score = 0.0;
    double current_score = 0.0;
    double delta = 0.0;
    bool gap_before = false;
    double tau = 0.0; ///< threshold the row was judged against
};

struct AnomalyReport {
    std::optional<double> tau;
    std::optional<double> mu_delta;
    std::optional<double> sigma_delta;
    double alpha = 1.5;
    std::optional<double> override_tau;
    std::optional<std::size_t> history;
    bool insufficient_data = true;
    std::size_t window_count = 0;
    std::vector<AnomalyRow> anomalies;

    [[nodiscard]] std::vector<std::size_t> flagged_windows() const;
    [[nodiscard]] bool is_flagged(std::size_t window_index) const;
};

/// Rows with delta < tau (strict), ascending by window index.
std::vector<AnomalyRow> detect(const DeltaSeries& deltas, double tau);

/// Full batch path: deltas, threshold(s) and flags for a score series.
AnomalyReport analyze(std::span<const WindowScore> scores, const ThresholdConfig& config);

struct Decision {
    std::size_t window_index = 0;
    double delta = 0.0;
    Threshold threshold;
    bool flagged = false;
    bool gap_before = false;
};

/// Incremental detector. The decision for each new window equals the batch
/// verdict on the prefix ending at that window; report() equals analyze()
/// on everything seen so far.
class OnlineDetector {
public:
    explicit OnlineDetector(ThresholdConfig config = {});

    /// nullopt for the first window, which has no predecessor.
    std::optional<Decision> update(const WindowScore& score);

    [[nodiscard]] AnomalyReport report() const;
    [[nodiscard]] std::size_t windows_seen() const noexcept { return windows_; }

private:
    [[nodiscard]] std::optional<Threshold> current_threshold() const;

    ThresholdConfig config_;
    std::size_t windows_ = 0;
    std::optional<WindowScore> last_;
    RunningStats stats_;
    DeltaSeries seen_;
    std::vector<double> values_;
    std::vector<double> taus_;
    Threshold last_threshold_;
};

} // namespace sentidrift
