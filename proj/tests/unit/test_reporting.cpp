#include <doctest.h>

#include <regex>

#include "sentidrift/error.hpp"
#include "sentidrift/exports.hpp"
#include "sentidrift/reporting.hpp"
#include "table1.hpp"
#include "test_support.hpp"

using namespace sentidrift;
using sentidrift::testing::scored;

namespace {

constexpr auto Neg = SentimentLabel::Negative;
constexpr auto Neu = SentimentLabel::Neutral;
constexpr auto Pos = SentimentLabel::Positive;

// Windows cut from `members` by explicit [first, last) ranges.
std::vector<Window> cut(const std::vector<ScoredComment>& members, std::initializer_list<std::pair<std::size_t, std::size_t>> ranges) {
    std::vector<Window> out;
    for (auto [a, b] : ranges) {
        Window w;
        w.index = out.size();
        w.members = std::span<const ScoredComment>(members).subspan(a, b - a);
        w.bounds = OrdinalBounds{a, b - 1};
        out.push_back(w);
    }
    return out;
}

AnomalyReport flagging(std::initializer_list<std::size_t> windows) {
    AnomalyReport r;
    r.insufficient_data = false;
    r.tau = -0.1;
    for (auto w : windows) r.anomalies.push_back({w, 0.0, -0.5, -0.5, false, -0.1});
    return r;
}

std::vector<std::string> attr_values(const std::string& svg, const std::string& element_class, const std::string& attr) {
    std::vector<std::string> out;
    const std::regex re("<[a-z]+ class=\"" + element_class + "\"[^>]*?\\b" + attr + "=\"([^\"]*)\"");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
        out.push_back((*it)[1]);
    return out;
}

double plot_attr(const std::string& svg, const std::string& name) {
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, std::regex("data-" + name + "=\"([^\"]*)\"")));
    return std::stod(m[1]);
}

std::vector<WindowScore> table_fixture() {
    return read_window_scores_file(sentidrift::testing::fixture("table1_window_scores.csv"));
}

} // namespace

TEST_CASE("reason shares within anomalous windows") {
    std::vector<ScoredComment> v{scored(0, Neg, "Late Flight"), scored(1, Neg, "Late Flight"),
                                 scored(2, Neg, "Late Flight"), scored(3, Neg, "Lost Luggage"),
                                 scored(4, Pos, "Lost Luggage"), scored(5, Neg, "Bad Flight"),
                                 scored(6, Neu, "Bad Flight")};
    const auto windows = cut(v, {{0, 5}, {5, 7}});
    const auto d = reason_distribution(windows, flagging({0}));
    CHECK(d.anomalous_comment_count == 4);
    CHECK(d.normal_comment_count == 1);
    for (const auto& t : d.topics) {
        if (t.topic == "Late Flight") CHECK(*t.anomalous_proportion == 0.75);
        if (t.topic == "Lost Luggage") CHECK(*t.anomalous_proportion == 0.25);
        if (t.topic == "Bad Flight") {
            CHECK(*t.anomalous_proportion == 0.0);
            CHECK(*t.normal_proportion == 1.0);
        }
    }
    CHECK(d.topics.front().topic == "Late Flight");

    const auto all = reason_distribution(windows, flagging({0}), LabelFilter::All);
    CHECK(all.anomalous_comment_count == 5);
    CHECK(all.normal_comment_count == 2);
}

TEST_CASE("single topic takes the whole anomalous share") {
    std::vector<ScoredComment> v{scored(0, Neg, "Late Flight"), scored(1, Neg, "Late Flight"), scored(2, Neg, "x")};
    const auto d = reason_distribution(cut(v, {{0, 2}, {2, 3}}), flagging({0}));
    for (const auto& t : d.topics)
        if (t.topic == "Late Flight") CHECK(*t.anomalous_proportion == 1.0);
}

TEST_CASE("no flagged windows leaves the anomalous side empty") {
    std::vector<ScoredComment> v{scored(0, Neg, "a"), scored(1, Neg, "b"), scored(2, Neg, "b"), scored(3, Neg, "c")};
    const auto d = reason_distribution(cut(v, {{0, 2}, {2, 4}}), flagging({}));
    CHECK(d.anomalous_comment_count == 0);
    double sum = 0.0;
    for (const auto& t : d.topics) {
        CHECK_FALSE(t.anomalous_proportion);
        sum += *t.normal_proportion;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trajectories follow topic presence") {
    std::vector<ScoredComment> v{scored(0, Neg, "a"), scored(1, Pos, "b"), scored(2, Neg, "b"),
                                 scored(3, Pos, "a"), scored(4, Neu, "b")};
    const auto scores = score_series(cut(v, {{0, 2}, {2, 3}, {3, 5}}));

    const std::vector<std::string> want{"a", "b"};
    const auto set = topic_trajectories(scores, want);
    REQUIRE(set.series.size() == 2);
    const auto& a = set.series[0];
    REQUIRE(a.points.size() == 2);
    CHECK(a.points[0].window_index == 0);
    CHECK(a.points[1].window_index == 2);
    CHECK(a.points[0].score == -1.0);
    CHECK(set.series[1].points.size() == 3);

    const std::vector<std::string> unknown{"zzz"};
    CHECK_THROWS_AS(topic_trajectories(scores, unknown), ConfigError);

    const std::vector<std::string> ghost{"ghost"};
    const auto empty = topic_trajectories(scores, ghost, std::vector<std::string>{"a", "b", "ghost"});
    REQUIRE(empty.series.size() == 1);
    CHECK(empty.series[0].points.empty());
    CHECK(empty.warnings.size() == 1);
}

TEST_CASE("heatmap cells") {
    std::vector<ScoredComment> v{scored(0, Neg, "a"), scored(1, Pos, "b"), scored(2, Neg, "a"),
                                 scored(3, Neg, "b"), scored(4, Pos, "a"), scored(5, Neu, "UNLABELED")};
    const auto windows = cut(v, {{0, 2}, {2, 4}, {4, 6}});
    const auto scores = score_series(windows);
    const auto m = heatmap_matrix(scores);
    CHECK(m.rows == std::vector<std::string>{"a", "b"});
    CHECK(m.columns == std::vector<std::size_t>{0, 1, 2});
    CHECK(m.cells.size() == 6);
    CHECK_FALSE(m.at(1, 2));
    for (std::size_t r = 0; r < m.rows.size(); ++r)
        for (std::size_t c = 0; c < m.columns.size(); ++c) CHECK(m.at(r, c) == aggregate_topic(windows[c], m.rows[r]));

    CHECK(heatmap_matrix(scores, true).rows.size() == 3);
}

TEST_CASE("trajectory chart markers and determinism") {
    const auto s = table_fixture();
    ThresholdConfig cfg;
    cfg.override_tau = sentidrift::testing::kPublishedTau;
    const auto report = analyze(s, cfg);
    const auto svg = render_trajectory_svg(s, report);
    CHECK(svg == render_trajectory_svg(s, analyze(s, cfg)));
    CHECK(attr_values(svg, "anomaly", "data-window").size() == 11);
    CHECK(attr_values(svg, "series", "points").size() == 1);

    const auto calm = render_trajectory_svg(s, AnomalyReport{});
    CHECK(attr_values(calm, "anomaly", "data-window").empty());
    CHECK_THROWS_AS(render_trajectory_svg({}, report), std::invalid_argument);
}

TEST_CASE("delta chart marks crossings and places the threshold line") {
    std::vector<WindowScore> s;
    for (int v : {0, 10, 20, -30, -20, -10}) s.push_back(make_window_score(s.size(), 100, Fraction(v, 100)));
    const auto d = delta_series(s);

    const auto none = render_delta_svg(d, -0.6);
    CHECK(attr_values(none, "crossing", "data-window").empty());
    CHECK(attr_values(none, "delta", "data-window").size() == 5);

    const double tau = -0.1693;
    const auto one = render_delta_svg(d, tau);
    const auto crossings = attr_values(one, "crossing", "data-window");
    REQUIRE(crossings.size() == 1);
    CHECK(crossings[0] == "3");

    ChartFrame f;
    f.x_min = plot_attr(one, "x-min");
    f.x_max = plot_attr(one, "x-max");
    f.y_min = plot_attr(one, "y-min");
    f.y_max = plot_attr(one, "y-max");
    const auto ys = attr_values(one, "threshold", "y1");
    REQUIRE(ys.size() == 1);
    // Coordinates are written to 0.01 px.
    const double per_px = (f.y_max - f.y_min) / (ChartFrame::kHeight - ChartFrame::kTop - ChartFrame::kBottom);
    CHECK(std::abs(f.y_value(std::stod(ys[0])) - tau) <= 0.005 * per_px + 1e-12);
    CHECK(f.y_value(f.y_px(tau)) == doctest::Approx(tau).epsilon(1e-12));
}
