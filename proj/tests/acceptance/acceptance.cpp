// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sentidrift/aggregation.hpp"
#include "sentidrift/detection.hpp"
#include "sentidrift/exports.hpp"
#include "sentidrift/windowing.hpp"
#include "table1.hpp"
#include "test_support.hpp"

using namespace sentidrift;
using sentidrift::testing::kTableOne;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("\"") + SENTIDRIFT_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

std::string two_dp(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::strcmp(buf, "-0.00") == 0 ? "0.00" : buf;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        rows.push_back(std::move(fields));
    }
    return rows;
}

// ---------------------------------------------------------------------------

Outcome table_fixture() {
    Outcome o;
    const auto dir = sentidrift::testing::scratch_dir("acceptance_table");
    const auto t0 = Clock::now();
    const int code = cli("detect --scores " + quoted(sentidrift::testing::fixture("table1_window_scores.csv")) +
                             " --threshold-override -0.1693 --quiet --out " + quoted(dir / "out"),
                         dir / "detect.log");
    const double elapsed = seconds_since(t0);
    o.require(code == 0, "detect exited " + std::to_string(code));
    const auto rows = read_csv_rows(dir / "out" / "before_after.csv");
    o.require(rows.size() == kTableOne.size(), std::to_string(rows.size()) + " windows flagged, expected 11");
    for (std::size_t i = 0; i < rows.size() && i < kTableOne.size(); ++i) {
        const auto& r = rows[i];
        const auto& t = kTableOne[i];
        o.require(r.size() == 4, "malformed before_after row");
        if (r.size() != 4) break;
        o.require(std::stoul(r[0]) == t.window, "flagged window " + r[0] + ", expected " + std::to_string(t.window));
        o.require(two_dp(std::stod(r[1])) == two_dp(t.previous), "window " + r[0] + " previous " + r[1]);
        o.require(two_dp(std::stod(r[2])) == two_dp(t.current), "window " + r[0] + " current " + r[2]);
        o.require(two_dp(std::stod(r[3])) == two_dp(t.delta), "window " + r[0] + " delta " + r[3]);
    }
    o.require(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
    if (o.pass) o.detail = "11/11 rows match to 2 dp in " + std::to_string(elapsed) + " s";
    return o;
}

Outcome threshold_formula() {
    Outcome o;
    const std::vector<double> d{-0.1, 0.1};
    const auto t = compute_threshold(d, sentidrift::testing::with_alpha(1.5));
    o.require(t && t->mu && t->sigma, "no threshold");
    if (!o.pass) return o;
    o.require(std::abs(*t->mu) <= 1e-12, "mu = " + format_real(*t->mu));
    o.require(std::abs(*t->sigma - 0.1) <= 1e-12, "sigma = " + format_real(*t->sigma));
    o.require(std::abs(t->tau + 0.15) <= 1e-12, "tau = " + format_real(t->tau));

    const std::vector<double> flat{0.0, 0.0, 0.0};
    const auto z = compute_threshold(flat, sentidrift::testing::with_alpha(1.5));
    o.require(z && z->tau == 0.0, "degenerate tau is not 0");
    std::vector<WindowScore> series;
    for (int i = 0; i < 4; ++i) series.push_back(make_window_score(series.size(), 10, Fraction(3, 10)));
    o.require(analyze(series, {}).anomalies.empty(), "constant series flagged windows");
    if (o.pass) o.detail = "mu 0, sigma 0.1, tau -0.15; flat series tau 0, no flags";
    return o;
}

Outcome alpha_monotonicity() {
    Outcome o;
    std::mt19937_64 rng(1001);
    std::size_t violations = 0;
    const std::size_t trials = 1000;
    for (std::size_t i = 0; i < trials; ++i) {
        const auto s = sentidrift::testing::random_series(rng, 3 + rng() % 200);
        const auto a10 = analyze(s, sentidrift::testing::with_alpha(1.0));
        const auto a15 = analyze(s, sentidrift::testing::with_alpha(1.5));
        const auto a20 = analyze(s, sentidrift::testing::with_alpha(2.0));
        for (auto w : a20.flagged_windows()) violations += !a15.is_flagged(w);
        for (auto w : a15.flagged_windows()) violations += !a10.is_flagged(w);
    }
    o.require(violations == 0, std::to_string(violations) + " violations");
    if (o.pass) o.detail = std::to_string(trials) + " series, 0 violations";
    return o;
}

Outcome topic_decomposition() {
    Outcome o;
    std::mt19937_64 rng(2002);
    const std::vector<std::string> topics{"Late Flight", "Lost Luggage", "Customer Service Issue", "UNLABELED"};
    double worst = 0.0;
    const std::size_t trials = 1000;
    for (std::size_t i = 0; i < trials; ++i) {
        std::vector<ScoredComment> members;
        const std::size_t n = 1 + rng() % 300;
        std::int64_t pos = 0;
        std::int64_t neg = 0;
        std::map<std::string, std::pair<std::int64_t, std::int64_t>> per_topic; // sum, count
        for (std::size_t k = 0; k < n; ++k) {
            const int s = static_cast<int>(rng() % 3) - 1;
            const auto& topic = topics[rng() % topics.size()];
            pos += s > 0;
            neg += s < 0;
            per_topic[topic].first += s;
            per_topic[topic].second += 1;
            members.push_back(sentidrift::testing::scored(static_cast<EpochMillis>(k), sentidrift::testing::label_for(s), topic));
        }
        const auto ws = aggregate_window(sentidrift::testing::window_over(members));
        o.require(ws.exact == Fraction(pos - neg, static_cast<std::int64_t>(n)), "counting form (exact) differs");
        o.require(ws.score == static_cast<double>(pos - neg) / static_cast<double>(n), "counting form (double) differs");
        double weighted = 0.0;
        for (const auto& [topic, sc] : per_topic) {
            const double s_z = static_cast<double>(sc.first) / static_cast<double>(sc.second);
            weighted += static_cast<double>(sc.second) * s_z;
            const auto it = ws.topic_scores.find(topic);
            o.require(it != ws.topic_scores.end() && it->second.score == s_z, "topic score differs for " + topic);
        }
        weighted /= static_cast<double>(n);
        worst = std::max(worst, std::abs(weighted - ws.score));
    }
    o.require(worst <= 1e-12, "max deviation " + format_real(worst));
    if (o.pass) o.detail = std::to_string(trials) + " windows, max deviation " + format_real(worst);
    return o;
}

Outcome online_batch() {
    Outcome o;
    std::mt19937_64 rng(3003);
    const auto s = sentidrift::testing::random_series(rng, 1000);
    OnlineDetector online;
    std::size_t mismatches = 0;
    std::size_t flagged = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const auto d = online.update(s[k]);
        if (k == 0) {
            mismatches += d.has_value();
            continue;
        }
        const auto batch = analyze(std::span(s).first(k + 1), {});
        if (!d || d->flagged != batch.is_flagged(k) || !same_bits(d->threshold.tau, *batch.tau)) ++mismatches;
        flagged += d && d->flagged;
    }
    const auto final_batch = analyze(s, {});
    o.require(online.report().flagged_windows() == final_batch.flagged_windows(), "final flag sets differ");
    o.require(mismatches == 0, std::to_string(mismatches) + " prefix mismatches");
    if (o.pass) o.detail = "1000 windows, 999 decisions identical (" + std::to_string(flagged) + " flagged)";
    return o;
}

Outcome translation() {
    Outcome o;
    std::vector<std::vector<WindowScore>> fixtures;
    fixtures.push_back(read_window_scores_file(sentidrift::testing::fixture("table1_window_scores.csv")));
    std::mt19937_64 rng(4004);
    for (int i = 0; i < 200; ++i) fixtures.push_back(sentidrift::testing::random_series(rng, 2 + rng() % 300, 1 + static_cast<std::int64_t>(rng() % 500)));

    const Fraction c(3, 10);
    for (const auto& base : fixtures) {
        std::vector<WindowScore> moved;
        for (const auto& w : base) moved.push_back(make_window_score(w.index, w.count, w.exact + c, w.gap_before));
        const auto d0 = delta_series(base);
        const auto d1 = delta_series(moved);
        for (std::size_t k = 0; k < d0.deltas.size(); ++k)
            o.require(same_bits(d0.deltas[k].delta, d1.deltas[k].delta), "delta bits differ");
        for (const double alpha : {1.0, 1.5, 2.0}) {
            const auto r0 = analyze(base, sentidrift::testing::with_alpha(alpha));
            const auto r1 = analyze(moved, sentidrift::testing::with_alpha(alpha));
            o.require(same_bits(*r0.tau, *r1.tau), "tau bits differ");
            o.require(r0.flagged_windows() == r1.flagged_windows(), "flag sets differ");
        }
    }
    if (o.pass) o.detail = std::to_string(fixtures.size()) + " series (Table I fixture + random), deltas/tau/flags bitwise equal";
    return o;
}

Outcome determinism() {
    Outcome o;
    const auto dir = sentidrift::testing::scratch_dir("acceptance_determinism");
    const auto data = dir / "corpus.csv";
    o.require(cli("synth --count 30000 --seed 7 --output " + quoted(data), dir / "synth.log") == 0, "synth failed");
    for (const char* run : {"a", "b"})
        o.require(cli("run --quiet --input " + quoted(data) + " --out " + quoted(dir / run), dir / (std::string(run) + ".log")) == 0,
                  "run failed");
    std::size_t compared = 0;
    std::set<std::string> kinds;
    for (const auto& e : fs::directory_iterator(dir / "a")) {
        const auto other = dir / "b" / e.path().filename();
        o.require(fs::exists(other), e.path().filename().string() + " missing from second run");
        o.require(sentidrift::testing::slurp(e.path()) == sentidrift::testing::slurp(other),
                  e.path().filename().string() + " differs");
        kinds.insert(e.path().extension().string());
        ++compared;
    }
    o.require(kinds.count(".json") && kinds.count(".csv") && kinds.count(".svg"), "missing JSON, CSV or SVG artifacts");
    if (o.pass) o.detail = std::to_string(compared) + " artifacts byte-identical";
    return o;
}

Outcome windowing_laws() {
    Outcome o;
    std::vector<ScoredComment> v;
    for (int i = 0; i < 250; ++i) v.push_back(sentidrift::testing::scored(i * 1000, SentimentLabel::Neutral));
    const auto drop = segment_count(v, 100, PartialPolicy::Drop);
    const auto keep = segment_count(v, 100, PartialPolicy::Keep);
    o.require(drop.size() == 2, "drop gave " + std::to_string(drop.size()) + " windows");
    o.require(keep.size() == 3 && keep.back().members.size() == 50, "keep gave " + std::to_string(keep.size()) + " windows");

    const EpochMillis origin = 0;
    const EpochMillis d = kMillisPerDay;
    std::vector<ScoredComment> t{sentidrift::testing::scored(origin + 5, SentimentLabel::Neutral),
                                 sentidrift::testing::scored(origin + d, SentimentLabel::Negative)};
    const auto w = segment_time(t, d, origin);
    o.require(w.size() == 2 && w[1].members.size() == 1 && w[1].members[0].comment.timestamp == origin + d,
              "boundary comment not in the later bucket");
    if (o.pass) o.detail = "drop 2, keep 3 (100/100/50), boundary comment in bucket 1";
    return o;
}

Outcome throughput() {
    Outcome o;
    const auto dir = sentidrift::testing::scratch_dir("acceptance_throughput");
    const auto data = dir / "million.csv";
    o.require(cli("synth --count 1000000 --seed 9 --output " + quoted(data), dir / "synth.log") == 0, "synth failed");
    const auto t0 = Clock::now();
    const int code = cli("run --quiet --scorer passthrough --window-mode count --window-size 100 --input " + quoted(data) +
                             " --out " + quoted(dir / "out"),
                         dir / "run.log");
    const double elapsed = seconds_since(t0);
    o.require(code == 0, "run exited " + std::to_string(code));
    std::ifstream summary(dir / "out" / "summary.json");
    std::string body((std::istreambuf_iterator<char>(summary)), std::istreambuf_iterator<char>());
    o.require(body.find("\"accepted\": 1000000") != std::string::npos, "summary does not report 1000000 accepted");
    o.require(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
    if (o.pass) o.detail = "1,000,000 comments in " + std::to_string(elapsed) + " s";
    fs::remove(data);
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"table I fixture reproduction", table_fixture},
        {"threshold formula", threshold_formula},
        {"alpha monotonicity", alpha_monotonicity},
        {"topic decomposition", topic_decomposition},
        {"online/batch equivalence", online_batch},
        {"translation invariance", translation},
        {"end-to-end determinism", determinism},
        {"windowing laws", windowing_laws},
        {"throughput", throughput},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("%s criterion %zu: %s -- %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
