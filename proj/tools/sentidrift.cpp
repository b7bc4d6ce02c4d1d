// sentidrift: windowed sentiment aggregation and drop detection for feedback streams.
//
// Exit codes: 0 success (including "no anomalies" and "insufficient data"),
// 1 fatal runtime error, 2 usage error, 3 `detect --fail-on-anomaly` found anomalies.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sentidrift/error.hpp"
#include "sentidrift/exports.hpp"
#include "sentidrift/pipeline.hpp"
#include "sentidrift/synth.hpp"

namespace fs = std::filesystem;
using namespace sentidrift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAnomaly = 3;

struct CommonOptions {
    std::string input;
    std::string format;
    std::string out;
    bool quiet = false;
};

struct ScorerOptions {
    std::string scorer = "passthrough";
    std::string lexicon;
};

struct WindowOptions {
    std::string mode = "count";
    std::size_t size = 100;
    std::string duration = "1d";
    std::string origin;
    std::string partial = "drop";
};

struct ThresholdOptions {
    double alpha = 1.5;
    std::optional<double> override_tau;
    std::optional<std::size_t> history;
};

struct ReportOptions {
    bool all_labels = false;
    std::vector<std::string> topics;
    bool include_unlabeled = false;
};

void add_common(CLI::App* app, CommonOptions& o, bool input_required) {
    auto* in = app->add_option("--input,-i", o.input, "Comment file (CSV or JSONL)");
    if (input_required) in->required();
    app->add_option("--format", o.format, "Input format; inferred from the extension when omitted")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    app->add_option("--out,-o", o.out, "Output directory for artifacts");
    app->add_flag("--quiet,-q", o.quiet, "Suppress progress and tables on standard output");
}

void add_scorer(CLI::App* app, ScorerOptions& o) {
    app->add_option("--scorer", o.scorer, "passthrough uses the label column; lexicon scores the text")
        ->check(CLI::IsMember({"passthrough", "lexicon"}));
    app->add_option("--lexicon", o.lexicon, "Lexicon file for --scorer lexicon (fallback: $SENTIDRIFT_LEXICON, then built-in)");
}

void add_window(CLI::App* app, WindowOptions& o) {
    app->add_option("--window-mode", o.mode, "count: every N comments; time: fixed elapsed-time buckets")
        ->check(CLI::IsMember({"count", "time"}));
    app->add_option("--window-size", o.size, "Comments per window in count mode")->check(CLI::PositiveNumber);
    app->add_option("--window-duration", o.duration, "Bucket length in time mode (e.g. 1d, 6h, 30m)");
    app->add_option("--window-origin", o.origin, "Bucket origin timestamp in time mode (default: UTC midnight of the first comment)");
    app->add_option("--partial", o.partial, "Trailing partial count window: drop or keep")
        ->check(CLI::IsMember({"keep", "drop"}));
}

void add_threshold(CLI::App* app, ThresholdOptions& o) {
    app->add_option("--alpha", o.alpha, "Sensitivity: tau = mean - alpha * stddev of the deltas")
        ->check(CLI::PositiveNumber);
    app->add_option("--threshold-override", o.override_tau, "Use this fixed tau instead of the computed one");
    app->add_option("--history", o.history, "Compute tau over the trailing N deltas only")->check(CLI::PositiveNumber);
}

void add_report(CLI::App* app, ReportOptions& o) {
    app->add_flag("--all-labels", o.all_labels, "Reason distribution over all comments, not only negative ones");
    app->add_option("--topics", o.topics, "Topics for trajectory output (default: all but UNLABELED)")->delimiter(',');
    app->add_flag("--include-unlabeled", o.include_unlabeled, "Include UNLABELED as a heatmap row");
}

ScorerMode make_scorer(const ScorerOptions& o) {
    if (o.scorer == "passthrough") return PassthroughMode{};
    std::string path = o.lexicon;
    if (path.empty()) {
        if (const char* env = std::getenv("SENTIDRIFT_LEXICON"); env && *env) path = env;
    }
    if (path.empty()) return LexiconMode{nullptr};
    return LexiconMode{std::make_shared<const Lexicon>(Lexicon::load(path))};
}

WindowSpec make_window(const WindowOptions& o) {
    WindowSpec spec;
    spec.partial = o.partial == "keep" ? PartialPolicy::Keep : PartialPolicy::Drop;
    if (o.mode == "count") {
        spec.mode = CountBased{o.size};
    } else {
        TimeBased t;
        t.duration_ms = parse_duration(o.duration);
        if (!o.origin.empty()) {
            try {
                t.origin = normalize_timestamp(o.origin);
            } catch (const ParseError& e) {
                throw ConfigError(std::string("--window-origin: ") + e.what());
            }
        }
        spec.mode = t;
    }
    validate(spec);
    return spec;
}

ThresholdConfig make_threshold(const ThresholdOptions& o) {
    ThresholdConfig c{o.alpha, o.override_tau, o.history};
    validate(c);
    return c;
}

std::optional<InputFormat> make_format(const std::string& f) {
    if (f.empty()) return std::nullopt;
    return parse_format(f);
}

void write_or_print(const CommonOptions& common, const std::string& name, const std::string& body) {
    if (common.out.empty()) {
        std::cout << body;
        return;
    }
    write_atomic(fs::path(common.out) / name, body);
}

void report_rejections(const CommonOptions& common, std::span<const RowError> errors) {
    if (common.quiet) return;
    constexpr std::size_t kShown = 5;
    for (std::size_t i = 0; i < errors.size() && i < kShown; ++i)
        std::cerr << "skipped line " << errors[i].line << ": " << errors[i].reason << "\n";
    if (errors.size() > kShown) std::cerr << "... and " << errors.size() - kShown << " more rejected records\n";
}

Analysis load_analysis(const CommonOptions& common, const ScorerOptions& scorer, const WindowOptions& window,
                       const ThresholdOptions& threshold) {
    const ScorerMode mode = make_scorer(scorer);
    const WindowSpec spec = make_window(window);
    const ThresholdConfig tc = make_threshold(threshold);
    IngestResult ingested = ingest_file(common.input, make_format(common.format));
    report_rejections(common, ingested.errors);
    Analysis a = analyze_comments(std::move(ingested.comments), mode, spec, tc);
    report_rejections(common, a.scoring_errors);
    return a;
}

std::vector<WindowScore> load_scores(const std::string& scores_path, const CommonOptions& common,
                                     const ScorerOptions& scorer, const WindowOptions& window,
                                     const ThresholdOptions& threshold) {
    if (!scores_path.empty()) return read_window_scores_file(scores_path);
    return load_analysis(common, scorer, window, threshold).scores;
}

PipelineConfig make_pipeline(const CommonOptions& common, const ScorerOptions& scorer, const WindowOptions& window,
                             const ThresholdOptions& threshold, const ReportOptions& report) {
    PipelineConfig c;
    c.input = common.input;
    c.format = make_format(common.format);
    c.scorer = make_scorer(scorer);
    c.window = make_window(window);
    c.threshold = make_threshold(threshold);
    c.reason_filter = report.all_labels ? LabelFilter::All : LabelFilter::NegativeOnly;
    c.trajectory_topics = report.topics;
    c.include_unlabeled = report.include_unlabeled;
    c.out_dir = common.out;
    return c;
}

void require_out(const CommonOptions& common, std::string_view sub) {
    if (common.out.empty()) throw ConfigError(std::string(sub) + " requires --out <dir>");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Windowed sentiment aggregation and drop detection for user-feedback streams", "sentidrift"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.set_version_flag("--version", "sentidrift 0.1.0");

    CommonOptions common;
    ScorerOptions scorer;
    WindowOptions window;
    ThresholdOptions threshold;
    ReportOptions report;

    auto* run = app.add_subcommand("run", "Full pipeline: ingest, score, window, aggregate, detect, report");
    add_common(run, common, true);
    add_scorer(run, scorer);
    add_window(run, window);
    add_threshold(run, threshold);
    add_report(run, report);
    bool stream = false;
    std::string tolerance = "0";
    run->add_flag("--stream", stream, "Process comments in arrival order with the online detector; writes events.jsonl");
    run->add_option("--out-of-order-tolerance", tolerance, "Streaming: warn when a comment is older than the newest by more than this");

    auto* score = app.add_subcommand("score", "Ingest and score comments; writes scored.csv");
    add_common(score, common, true);
    add_scorer(score, scorer);

    auto* windows = app.add_subcommand("windows", "Window and aggregate; writes window_scores.csv and topic_scores.csv");
    add_common(windows, common, true);
    add_scorer(windows, scorer);
    add_window(windows, window);

    auto* detect_cmd = app.add_subcommand("detect", "Flag windows whose sentiment change falls below tau");
    add_common(detect_cmd, common, false);
    add_scorer(detect_cmd, scorer);
    add_window(detect_cmd, window);
    add_threshold(detect_cmd, threshold);
    std::string scores_path;
    bool fail_on_anomaly = false;
    bool print_json = false;
    detect_cmd->add_option("--scores", scores_path, "Window-score CSV (window,count,score,gap_before) instead of --input");
    detect_cmd->add_flag("--fail-on-anomaly", fail_on_anomaly, "Exit with status 3 when any window is flagged");
    detect_cmd->add_flag("--json", print_json, "Print the anomaly report as JSON instead of a table");

    auto* report_cmd = app.add_subcommand("report", "Reason distribution, topic trajectories and heatmap CSVs");
    add_common(report_cmd, common, true);
    add_scorer(report_cmd, scorer);
    add_window(report_cmd, window);
    add_threshold(report_cmd, threshold);
    add_report(report_cmd, report);

    auto* render = app.add_subcommand("render", "SVG charts of the score trajectory and the delta series");
    add_common(render, common, false);
    add_scorer(render, scorer);
    add_window(render, window);
    add_threshold(render, threshold);
    render->add_option("--scores", scores_path, "Window-score CSV instead of --input");

    auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic corpus");
    synth->group("");
    SynthConfig synth_config;
    std::string synth_output;
    std::string synth_format = "csv";
    bool synth_unlabeled = false;
    synth->add_option("--count", synth_config.count, "Number of comments");
    synth->add_option("--seed", synth_config.seed, "Random seed");
    synth->add_option("--output", synth_output, "Output file (default: standard output)");
    synth->add_option("--format", synth_format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    synth->add_flag("--unlabeled", synth_unlabeled, "Omit labels (for the lexicon scorer)");
    synth->add_option("--burst-every", synth_config.burst_every, "A complaint burst starts every N comments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        const auto subs = app.get_subcommands();
        std::cerr << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    try {
        if (*run) {
            PipelineConfig config = make_pipeline(common, scorer, window, threshold, report);
            config.out_of_order_tolerance_ms = tolerance == "0" ? 0 : parse_duration(tolerance);
            if (stream) {
                require_out(common, "run");
                ensure_writable_directory(config.out_dir);
                const InputFormat fmt = config.format ? *config.format : infer_format(config.input);
                std::ifstream in(config.input, std::ios::binary);
                if (!in) throw IoError("cannot open input file '" + config.input.string() + "'");
                StreamResult r = run_stream(config, in, fmt);
                std::string events;
                for (const auto& ev : r.events) {
                    events += to_json(ev);
                    events += '\n';
                    if (!common.quiet && ev.decision && ev.decision->flagged)
                        std::cout << "window " << ev.window_index << " flagged: delta " << ev.decision->delta
                                  << " < tau " << ev.decision->threshold.tau << "\n";
                }
                write_atomic(config.out_dir / "events.jsonl", events);
                write_atomic(config.out_dir / "anomalies.json", anomaly_report_json(r.report));
                RunSummary summary;
                summary.ingest = r.ingest;
                summary.unscored = r.unscored;
                summary.windows = r.events.size();
                summary.report = r.report;
                summary.config_echo = config_echo_json(config);
                write_atomic(config.out_dir / "summary.json", to_json(summary));
                report_rejections(common, r.errors);
                if (!common.quiet)
                    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
                return kExitOk;
            }
            require_out(common, "run");
            const RunSummary summary = run_batch(config);
            if (!common.quiet) {
                std::cout << "accepted " << summary.ingest.accepted << " of " << summary.ingest.parsed
                          << " records (" << summary.ingest.skipped << " skipped, " << summary.ingest.duplicates
                          << " duplicates), " << summary.windows << " windows\n";
                std::cout << before_after_table(summary.report);
                std::cout << "artifacts written to " << config.out_dir.string() << "\n";
            }
            return kExitOk;
        }

        if (*score) {
            IngestResult ingested = ingest_file(common.input, make_format(common.format));
            report_rejections(common, ingested.errors);
            const ScorerMode mode = make_scorer(scorer);
            std::vector<ScoredComment> scored;
            scored.reserve(ingested.comments.size());
            std::vector<RowError> unscored;
            for (auto& c : ingested.comments) {
                try {
                    scored.push_back(score_comment(std::move(c), mode));
                } catch (const ParseError& e) {
                    unscored.push_back({0, e.what()});
                }
            }
            report_rejections(common, unscored);
            if (!common.out.empty()) {
                ensure_writable_directory(common.out);
                write_atomic(fs::path(common.out) / "ingest_summary.json", to_json(ingested.summary) + "\n");
            }
            write_or_print(common, "scored.csv", scored_comments_csv(scored));
            return kExitOk;
        }

        if (*windows) {
            const Analysis a = load_analysis(common, scorer, window, ThresholdOptions{});
            if (!common.out.empty()) {
                ensure_writable_directory(common.out);
                write_atomic(fs::path(common.out) / "topic_scores.csv", topic_scores_csv(a.scores));
            }
            write_or_print(common, "window_scores.csv", window_scores_csv(a.scores));
            return kExitOk;
        }

        if (*detect_cmd) {
            if (scores_path.empty() && common.input.empty()) throw ConfigError("detect needs --input or --scores");
            const ThresholdConfig tc = make_threshold(threshold);
            const auto scores = load_scores(scores_path, common, scorer, window, threshold);
            const AnomalyReport r = analyze(scores, tc);
            if (!common.out.empty()) {
                ensure_writable_directory(common.out);
                write_atomic(fs::path(common.out) / "anomalies.json", anomaly_report_json(r));
                write_atomic(fs::path(common.out) / "before_after.csv", before_after_csv(r));
            }
            if (print_json) std::cout << anomaly_report_json(r);
            else if (!common.quiet) std::cout << before_after_table(r);
            return fail_on_anomaly && !r.anomalies.empty() ? kExitAnomaly : kExitOk;
        }

        if (*report_cmd) {
            require_out(common, "report");
            ensure_writable_directory(common.out);
            const Analysis a = load_analysis(common, scorer, window, threshold);
            const fs::path out = common.out;
            const auto filter = report.all_labels ? LabelFilter::All : LabelFilter::NegativeOnly;
            const TrajectorySet traj = topic_trajectories(a.scores, report.topics, topics_by_volume(a.scores, true));
            write_atomic(out / "reasons.csv", reason_distribution_csv(reason_distribution(a.windows, a.report, filter)));
            write_atomic(out / "heatmap.csv", heatmap_csv(heatmap_matrix(a.scores, report.include_unlabeled)));
            write_atomic(out / "topic_trajectories.csv", trajectories_csv(traj));
            if (!common.quiet)
                for (const auto& w : traj.warnings) std::cerr << "warning: " << w << "\n";
            return kExitOk;
        }

        if (*render) {
            require_out(common, "render");
            if (scores_path.empty() && common.input.empty()) throw ConfigError("render needs --input or --scores");
            ensure_writable_directory(common.out);
            const ThresholdConfig tc = make_threshold(threshold);
            const auto scores = load_scores(scores_path, common, scorer, window, threshold);
            if (scores.empty()) throw std::runtime_error("render: no windows to plot");
            const AnomalyReport r = analyze(scores, tc);
            const fs::path out = common.out;
            write_atomic(out / "trajectory.svg", render_trajectory_svg(scores, r));
            const DeltaSeries deltas = delta_series(scores);
            if (!deltas.deltas.empty() && r.tau) write_atomic(out / "delta.svg", render_delta_svg(deltas, *r.tau));
            return kExitOk;
        }

        if (*synth) {
            synth_config.labeled = !synth_unlabeled;
            const InputFormat fmt = parse_format(synth_format);
            if (synth_output.empty()) {
                write_synthetic_corpus(synth_config, std::cout, fmt);
            } else {
                std::ofstream out(synth_output, std::ios::binary);
                if (!out) throw IoError("cannot write '" + synth_output + "'");
                write_synthetic_corpus(synth_config, out, fmt);
            }
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
