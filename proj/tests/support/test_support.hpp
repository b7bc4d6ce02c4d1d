#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sentidrift/aggregation.hpp"
#include "sentidrift/detection.hpp"
#include "sentidrift/scorer.hpp"

namespace sentidrift::testing {

inline ScoredComment scored(EpochMillis ts, SentimentLabel label, std::string topic = std::string(kUnlabeledTopic),
                            std::string text = "x") {
    ScoredComment s;
    s.comment.id = "c" + std::to_string(ts);
    s.comment.timestamp = ts;
    s.comment.text = std::move(text);
    s.comment.label = label;
    s.comment.topic = std::move(topic);
    s.label = label;
    s.score = map_label_to_score(label);
    return s;
}

inline ThresholdConfig with_alpha(double alpha) {
    ThresholdConfig c;
    c.alpha = alpha;
    return c;
}

inline SentimentLabel label_for(int score) {
    return score < 0 ? SentimentLabel::Negative : (score > 0 ? SentimentLabel::Positive : SentimentLabel::Neutral);
}

/// Window over `members`, which must outlive it.
inline Window window_over(const std::vector<ScoredComment>& members, std::size_t index = 0) {
    Window w;
    w.index = index;
    w.members = members;
    w.bounds = OrdinalBounds{0, members.empty() ? 0 : members.size() - 1};
    return w;
}

/// Random count-derived score series: each window has `n` comments with
/// random label tallies.
inline std::vector<WindowScore> random_series(std::mt19937_64& rng, std::size_t windows, std::int64_t n = 100) {
    std::vector<WindowScore> out;
    out.reserve(windows);
    for (std::size_t k = 0; k < windows; ++k) {
        const std::int64_t pos = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n + 1));
        const std::int64_t neg = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n - pos + 1));
        out.push_back(make_window_score(k, static_cast<std::size_t>(n), Fraction(pos - neg, n)));
    }
    return out;
}

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(SENTIDRIFT_FIXTURE_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::path(SENTIDRIFT_SCRATCH_DIR) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Writes a CSV corpus whose count-100 windows reproduce `scores`
/// (each score must be a multiple of 0.01). Topics rotate over `topics`.
inline void write_corpus_for_scores(const std::filesystem::path& path, const std::vector<WindowScore>& scores,
                                    const std::vector<std::string>& topics) {
    std::ofstream out(path);
    out << "id,timestamp,text,label,topic\n";
    std::int64_t ts = 1'424'044'800'000;
    std::size_t id = 0;
    for (const auto& ws : scores) {
        const std::int64_t net = ws.exact.num() * (100 / ws.exact.den());
        const std::int64_t pos = net >= 0 ? net + 20 : 20;
        const std::int64_t neg = net >= 0 ? 20 : 20 - net;
        for (std::int64_t i = 0; i < 100; ++i) {
            const char* label = i < pos ? "positive" : (i < pos + neg ? "negative" : "neutral");
            out << "r" << id << ',' << ts << ',' << "comment " << id << ',' << label << ','
                << topics[id % topics.size()] << '\n';
            ++id;
            ts += 1000;
        }
    }
}

} // namespace sentidrift::testing
