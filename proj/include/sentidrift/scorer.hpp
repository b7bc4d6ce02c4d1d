#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "sentidrift/comment.hpp"
#include "sentidrift/label.hpp"

namespace sentidrift {

struct ScoredComment {
    Comment comment;
    SentimentLabel label = SentimentLabel::Neutral;
    int score = 0; ///< always map_label_to_score(label)
};

/// Positive and negative term sets for the built-in scorer. Terms are stored
/// lowercase; the sets are disjoint.
class Lexicon {
public:
    Lexicon() = default;
    /// Throws ConfigError if a term appears in both sets.
    Lexicon(std::unordered_set<std::string> positive, std::unordered_set<std::string> negative);

    /// INI-like text: `[positive]` / `[negative]` sections, one term per line,
    /// `#` starts a comment. Throws ParseError with the offending line.
    static Lexicon parse(std::istream& in);
    static Lexicon load(const std::filesystem::path& path);
    /// The lexicon compiled into the library from data/lexicon.txt.
    static const Lexicon& builtin();

    [[nodiscard]] bool is_positive(std::string_view term) const;
    [[nodiscard]] bool is_negative(std::string_view term) const;
    [[nodiscard]] std::size_t size() const noexcept { return positive_.size() + negative_.size(); }

    /// Lowercased ASCII alphanumeric runs; everything else separates tokens.
    static std::vector<std::string> tokenize(std::string_view text);

    /// Sign of (positive hits - negative hits); ties and zero hits are Neutral.
    [[nodiscard]] SentimentLabel classify(std::string_view text) const;

private:
    std::unordered_set<std::string> positive_;
    std::unordered_set<std::string> negative_;
};

/// Uses the comment's precomputed label unchanged.
struct PassthroughMode {};

struct LexiconMode {
    std::shared_ptr<const Lexicon> lexicon;
};

using ScorerMode = std::variant<PassthroughMode, LexiconMode>;

/// Throws ParseError naming the comment id when passthrough meets an unlabeled comment.
ScoredComment score_comment(Comment comment, const ScorerMode& mode);

std::string_view scorer_name(const ScorerMode& mode);

} // namespace sentidrift
