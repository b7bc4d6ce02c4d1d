#include <doctest.h>

#include <algorithm>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "sentidrift/error.hpp"
#include "sentidrift/scorer.hpp"

using namespace sentidrift;

namespace {

Comment with_text(std::string text, std::optional<SentimentLabel> label = std::nullopt) {
    Comment c;
    c.id = "c";
    c.text = std::move(text);
    c.label = label;
    return c;
}

LexiconMode good_bad() {
    return LexiconMode{std::make_shared<const Lexicon>(std::unordered_set<std::string>{"good"},
                                                      std::unordered_set<std::string>{"bad"})};
}

} // namespace

TEST_CASE("label score mapping is a bijection onto {-1, 0, 1}") {
    CHECK(map_label_to_score(SentimentLabel::Negative) == -1);
    CHECK(map_label_to_score(SentimentLabel::Neutral) == 0);
    CHECK(map_label_to_score(SentimentLabel::Positive) == 1);
    std::set<int> images;
    for (auto l : kAllLabels) images.insert(map_label_to_score(l));
    CHECK(images == std::set<int>{-1, 0, 1});
}

TEST_CASE("passthrough keeps the given label") {
    const auto s = score_comment(with_text("whatever", SentimentLabel::Positive), PassthroughMode{});
    CHECK(s.label == SentimentLabel::Positive);
    CHECK(s.score == 1);
    CHECK_THROWS_AS(score_comment(with_text("no label"), PassthroughMode{}), ParseError);
}

TEST_CASE("lexicon takes the sign of the hit balance") {
    const auto mode = good_bad();
    CHECK(score_comment(with_text("good good bad"), mode).label == SentimentLabel::Positive);
    CHECK(score_comment(with_text("good bad"), mode).label == SentimentLabel::Neutral);
    CHECK(score_comment(with_text("bad, BAD good!"), mode).label == SentimentLabel::Negative);
    CHECK(score_comment(with_text("nothing here"), mode).label == SentimentLabel::Neutral);
    CHECK(score_comment(with_text("goodness"), mode).label == SentimentLabel::Neutral);
}

TEST_CASE("lexicon ignores a precomputed label") {
    CHECK(score_comment(with_text("bad", SentimentLabel::Positive), good_bad()).score == -1);
}

TEST_CASE("lexicon verdict is invariant to token order and whitespace") {
    const Lexicon& lex = Lexicon::builtin();
    REQUIRE(lex.size() > 0);
    const std::vector<std::string> vocab{"good", "great", "thanks", "bad", "delayed", "lost", "terrible",
                                         "the",  "flight", "crew",  "gate", "again"};
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::string> words;
        const std::size_t n = 1 + rng() % 10;
        for (std::size_t i = 0; i < n; ++i) words.push_back(vocab[rng() % vocab.size()]);
        auto join = [](const std::vector<std::string>& w, const std::string& sep) {
            std::string out;
            for (const auto& x : w) out += x + sep;
            return out;
        };
        const auto base = lex.classify(join(words, " "));
        std::shuffle(words.begin(), words.end(), rng);
        CHECK(lex.classify(join(words, "  \t\n ")) == base);
    }
}

TEST_CASE("lexicon parsing") {
    std::istringstream in("# terms\n[positive]\nnice\n\n[negative]\nawful # trailing\n");
    const auto lex = Lexicon::parse(in);
    CHECK(lex.is_positive("nice"));
    CHECK(lex.is_negative("awful"));
    CHECK(lex.size() == 2);

    std::istringstream orphan("nice\n");
    CHECK_THROWS_AS(Lexicon::parse(orphan), ParseError);

    CHECK_THROWS_AS(Lexicon({"x"}, {"x"}), ConfigError);
}

TEST_CASE("tokenizer") {
    CHECK(Lexicon::tokenize("Hi, THERE-you2!") == std::vector<std::string>{"hi", "there", "you2"});
    CHECK(Lexicon::tokenize("  ").empty());
}
