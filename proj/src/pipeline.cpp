#include "sentidrift/pipeline.hpp"

#include <fstream>
#include <istream>

#include <json.hpp>

#include "sentidrift/error.hpp"
#include "sentidrift/exports.hpp"

namespace sentidrift {
namespace {

using ojson = nlohmann::ordered_json;

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    const std::int64_t q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(name) + ": " + e.what());
    }
}

} // namespace

void validate(const PipelineConfig& config) {
    validate(config.window);
    validate(config.threshold);
    if (config.out_of_order_tolerance_ms < 0) throw ConfigError("out-of-order tolerance must be non-negative");
}

void ensure_writable_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    const auto probe = dir / ".sentidrift-write-probe";
    {
        std::ofstream out(probe);
        if (!out) throw IoError("output directory '" + dir.string() + "' is not writable");
    }
    std::filesystem::remove(probe, ec);
}

Analysis analyze_comments(std::vector<Comment> comments, const ScorerMode& scorer, const WindowSpec& window,
                          const ThresholdConfig& threshold) {
    validate(window);
    validate(threshold);
    Analysis a;
    a.scored.reserve(comments.size());
    for (auto& c : comments) {
        try {
            a.scored.push_back(score_comment(std::move(c), scorer));
        } catch (const ParseError& e) {
            a.scoring_errors.push_back({0, e.what()});
        }
    }
    sort_by_time(a.scored);
    a.windows = segment(a.scored, window);
    a.scores = score_series(a.windows);
    a.deltas = delta_series(a.scores);
    a.report = analyze(a.scores, threshold);
    return a;
}

std::string config_echo_json(const PipelineConfig& config) {
    ojson j;
    j["input"] = config.input.generic_string();
    j["format"] = config.format ? (*config.format == InputFormat::Csv ? "csv" : "jsonl") : "auto";
    j["scorer"] = std::string(scorer_name(config.scorer));
    if (const auto* lex = std::get_if<LexiconMode>(&config.scorer))
        j["lexicon_terms"] = lex->lexicon ? lex->lexicon->size() : Lexicon::builtin().size();
    if (const auto* c = std::get_if<CountBased>(&config.window.mode)) {
        j["window_mode"] = "count";
        j["window_size"] = c->size;
        j["partial"] = config.window.partial == PartialPolicy::Drop ? "drop" : "keep";
    } else {
        const auto& t = std::get<TimeBased>(config.window.mode);
        j["window_mode"] = "time";
        j["window_duration_ms"] = t.duration_ms;
        j["window_origin_ms"] = t.origin ? ojson(*t.origin) : ojson(nullptr);
    }
    j["alpha"] = config.threshold.alpha;
    j["threshold_override"] = optional_number(config.threshold.override_tau);
    j["history"] = config.threshold.history ? ojson(*config.threshold.history) : ojson(nullptr);
    j["reason_labels"] = config.reason_filter == LabelFilter::NegativeOnly ? "negative" : "all";
    j["include_unlabeled"] = config.include_unlabeled;
    return j.dump();
}

std::string to_json(const RunSummary& s) {
    ojson j;
    j["parsed"] = s.ingest.parsed;
    j["accepted"] = s.ingest.accepted;
    j["skipped"] = s.ingest.skipped;
    j["duplicates"] = s.ingest.duplicates;
    j["unscored"] = s.unscored;
    j["windows"] = s.windows;
    j["anomalies"] = s.report.anomalies.size();
    j["insufficient_data"] = s.report.insufficient_data;
    j["tau"] = optional_number(s.report.tau);
    j["mu_delta"] = optional_number(s.report.mu_delta);
    j["sigma_delta"] = optional_number(s.report.sigma_delta);
    j["config_echo"] = ojson::parse(s.config_echo);
    return j.dump(2) + "\n";
}

RunSummary run_batch(const PipelineConfig& config) {
    validate(config);
    stage("output", [&] { ensure_writable_directory(config.out_dir); });

    IngestResult ingested = stage("ingest", [&] { return ingest_file(config.input, config.format); });
    RunSummary summary;
    summary.ingest = ingested.summary;
    summary.config_echo = config_echo_json(config);

    Analysis a = stage("analyze", [&] {
        return analyze_comments(std::move(ingested.comments), config.scorer, config.window, config.threshold);
    });
    summary.unscored = a.scoring_errors.size();
    summary.windows = a.scores.size();
    summary.report = a.report;

    const ReportSelection& sel = config.reports;
    std::vector<std::pair<std::string, std::string>> artifacts;
    if (sel.ingest_errors) {
        std::vector<RowError> rejected = ingested.errors;
        rejected.insert(rejected.end(), a.scoring_errors.begin(), a.scoring_errors.end());
        artifacts.emplace_back("rejected.csv", row_errors_csv(rejected));
    }
    if (sel.window_scores) artifacts.emplace_back("window_scores.csv", window_scores_csv(a.scores));
    if (sel.topic_scores) artifacts.emplace_back("topic_scores.csv", topic_scores_csv(a.scores));
    if (sel.anomalies) artifacts.emplace_back("anomalies.json", anomaly_report_json(a.report));
    if (sel.before_after) artifacts.emplace_back("before_after.csv", before_after_csv(a.report));
    if (sel.reasons)
        artifacts.emplace_back("reasons.csv",
                               reason_distribution_csv(reason_distribution(a.windows, a.report, config.reason_filter)));
    if (sel.heatmap)
        artifacts.emplace_back("heatmap.csv", heatmap_csv(heatmap_matrix(a.scores, config.include_unlabeled)));
    if (sel.trajectories) {
        auto known = topics_by_volume(a.scores, true);
        artifacts.emplace_back("topic_trajectories.csv",
                               trajectories_csv(topic_trajectories(a.scores, config.trajectory_topics, known)));
    }
    if (sel.svg && !a.scores.empty()) {
        artifacts.emplace_back("trajectory.svg", render_trajectory_svg(a.scores, a.report));
        if (!a.deltas.deltas.empty() && a.report.tau)
            artifacts.emplace_back("delta.svg", render_delta_svg(a.deltas, *a.report.tau));
    }
    artifacts.emplace_back("summary.json", to_json(summary));

    stage("write", [&] {
        for (const auto& [name, body] : artifacts) {
            const auto path = config.out_dir / name;
            write_atomic(path, body);
            summary.artifacts.push_back(path);
        }
    });
    return summary;
}

// ---------------------------------------------------------------------------
// Streaming

std::string to_json(const StreamEvent& e) {
    ojson j;
    j["window"] = e.window_index;
    j["count"] = e.count;
    j["score"] = e.score;
    j["gap_before"] = e.gap_before;
    j["partial"] = e.partial;
    if (e.decision) {
        j["delta"] = e.decision->delta;
        j["tau"] = e.decision->threshold.tau;
        j["mu_delta"] = optional_number(e.decision->threshold.mu);
        j["sigma_delta"] = optional_number(e.decision->threshold.sigma);
        j["flagged"] = e.decision->flagged;
    } else {
        j["delta"] = nullptr;
        j["flagged"] = false;
    }
    return j.dump();
}

StreamRunner::StreamRunner(const PipelineConfig& config)
    : scorer_(config.scorer),
      window_(config.window),
      tolerance_ms_(config.out_of_order_tolerance_ms),
      detector_(config.threshold) {
    validate(config);
}

std::optional<StreamEvent> StreamRunner::close_window(bool partial) {
    Window w;
    w.index = next_index_++;
    w.members = open_;
    w.partial = partial;
    w.gap_before = pending_gap_;
    if (std::holds_alternative<TimeBased>(window_.mode)) {
        const auto& t = std::get<TimeBased>(window_.mode);
        const EpochMillis start = *origin_ + *open_bucket_ * t.duration_ms;
        w.bounds = TimeBounds{start, start + t.duration_ms};
    } else {
        w.bounds = OrdinalBounds{0, open_.size() - 1};
    }
    const WindowScore ws = aggregate_window(w);
    StreamEvent ev{ws.index, ws.count, ws.score, ws.gap_before, ws.partial, detector_.update(ws)};
    open_.clear();
    pending_gap_ = false;
    return ev;
}

std::optional<StreamEvent> StreamRunner::push(Comment comment) {
    if (!dedup_.admit(comment)) {
        ++duplicates_;
        return std::nullopt;
    }
    ScoredComment scored;
    try {
        scored = score_comment(std::move(comment), scorer_);
    } catch (const ParseError& e) {
        ++unscored_;
        warnings_.emplace_back(e.what());
        return std::nullopt;
    }
    const EpochMillis ts = scored.comment.timestamp;
    if (newest_ && ts < *newest_ - tolerance_ms_) {
        warnings_.push_back("comment " + scored.comment.id + " arrived " + std::to_string(*newest_ - ts) +
                            " ms out of order");
    }
    if (!newest_ || ts > *newest_) newest_ = ts;

    if (const auto* c = std::get_if<CountBased>(&window_.mode)) {
        open_.push_back(std::move(scored));
        if (open_.size() == c->size) return close_window(false);
        return std::nullopt;
    }

    const auto& t = std::get<TimeBased>(window_.mode);
    if (!origin_) origin_ = t.origin ? *t.origin : utc_midnight_floor(ts);
    const std::int64_t bucket = floor_div(ts - *origin_, t.duration_ms);
    std::optional<StreamEvent> ev;
    if (!open_bucket_) {
        open_bucket_ = bucket;
    } else if (bucket > *open_bucket_) {
        // Watermark: a later bucket closes the open one.
        ev = close_window(false);
        pending_gap_ = bucket > *open_bucket_ + 1;
        open_bucket_ = bucket;
    }
    open_.push_back(std::move(scored));
    return ev;
}

std::optional<StreamEvent> StreamRunner::finish() {
    if (open_.empty()) return std::nullopt;
    if (std::holds_alternative<CountBased>(window_.mode)) {
        if (window_.partial == PartialPolicy::Drop) {
            open_.clear();
            return std::nullopt;
        }
        return close_window(true);
    }
    return close_window(false);
}

StreamResult run_stream(const PipelineConfig& config, std::istream& in, InputFormat format) {
    StreamResult result;
    StreamRunner runner(config);
    RecordReader reader(in, format);
    std::size_t ordinal = 0;
    while (auto item = reader.next()) {
        ++result.ingest.parsed;
        if (auto* err = std::get_if<RowError>(&*item)) {
            result.errors.push_back(std::move(*err));
            continue;
        }
        const auto& rec = std::get<RawRecord>(*item);
        Comment c;
        try {
            c = validate_and_build(rec, rec.line ? rec.line : ordinal);
        } catch (const ParseError& e) {
            result.errors.push_back({rec.line, e.what()});
            continue;
        }
        ++ordinal;
        if (auto ev = runner.push(std::move(c))) result.events.push_back(std::move(*ev));
    }
    if (auto ev = runner.finish()) result.events.push_back(std::move(*ev));
    result.ingest.skipped = result.errors.size();
    result.ingest.duplicates = runner.duplicates();
    result.ingest.accepted = result.ingest.parsed - result.ingest.skipped - result.ingest.duplicates;
    result.unscored = runner.unscored();
    result.report = runner.report();
    result.warnings = runner.warnings();
    return result;
}

} // namespace sentidrift
