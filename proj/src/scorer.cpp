#include "sentidrift/scorer.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "builtin_lexicon.hpp"
#include "sentidrift/error.hpp"

namespace sentidrift {
namespace {

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_alnum(char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Calls f(token) for each lowercased alphanumeric run without allocating per token.
template <typename F>
void for_each_token(std::string_view text, std::string& scratch, F&& f) {
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_alnum(text[i])) ++i;
        if (i == text.size()) break;
        scratch.clear();
        while (i < text.size() && is_alnum(text[i])) scratch.push_back(lower(text[i++]));
        f(std::string_view(scratch));
    }
}

} // namespace

SentimentLabel parse_label(std::string_view raw) {
    const std::string_view s = trim(raw);
    std::string key;
    key.reserve(s.size());
    for (char c : s) key.push_back(lower(c));
    for (const auto label : kAllLabels) {
        if (key == label_name(label)) return label;
    }
    throw ParseError("unrecognized label '" + std::string(raw) + "' (accepted: negative, neutral, positive)");
}

Lexicon::Lexicon(std::unordered_set<std::string> positive, std::unordered_set<std::string> negative)
    : positive_(std::move(positive)), negative_(std::move(negative)) {
    for (const auto& term : positive_) {
        if (negative_.count(term)) throw ConfigError("lexicon term '" + term + "' is both positive and negative");
    }
}

Lexicon Lexicon::parse(std::istream& in) {
    enum class Section { None, Positive, Negative } section = Section::None;
    std::unordered_set<std::string> pos;
    std::unordered_set<std::string> neg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s == "[positive]") section = Section::Positive;
            else if (s == "[negative]") section = Section::Negative;
            else throw ParseError("lexicon line " + std::to_string(lineno) + ": unknown section " + std::string(s));
            continue;
        }
        if (section == Section::None)
            throw ParseError("lexicon line " + std::to_string(lineno) + ": term outside [positive]/[negative]");
        std::string term;
        for (char c : s) {
            if (!is_alnum(c))
                throw ParseError("lexicon line " + std::to_string(lineno) + ": term '" + std::string(s) +
                                 "' must be a single alphanumeric token");
            term.push_back(lower(c));
        }
        (section == Section::Positive ? pos : neg).insert(std::move(term));
    }
    if (in.bad()) throw IoError("read error on lexicon");
    return Lexicon(std::move(pos), std::move(neg));
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon '" + path.string() + "'");
    return parse(in);
}

const Lexicon& Lexicon::builtin() {
    static const Lexicon lexicon = [] {
        std::istringstream in{std::string(detail::kBuiltinLexicon)};
        return parse(in);
    }();
    return lexicon;
}

bool Lexicon::is_positive(std::string_view term) const { return positive_.count(std::string(term)) > 0; }
bool Lexicon::is_negative(std::string_view term) const { return negative_.count(std::string(term)) > 0; }

std::vector<std::string> Lexicon::tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string scratch;
    for_each_token(text, scratch, [&](std::string_view t) { tokens.emplace_back(t); });
    return tokens;
}

SentimentLabel Lexicon::classify(std::string_view text) const {
    long balance = 0;
    std::string scratch;
    std::string key;
    for_each_token(text, scratch, [&](std::string_view t) {
        key.assign(t);
        if (positive_.count(key)) ++balance;
        else if (negative_.count(key)) --balance;
    });
    if (balance > 0) return SentimentLabel::Positive;
    if (balance < 0) return SentimentLabel::Negative;
    return SentimentLabel::Neutral;
}

ScoredComment score_comment(Comment comment, const ScorerMode& mode) {
    SentimentLabel label = SentimentLabel::Neutral;
    if (std::holds_alternative<PassthroughMode>(mode)) {
        if (!comment.label) throw ParseError("comment " + comment.id + " has no label (passthrough scorer)");
        label = *comment.label;
    } else {
        const auto& lex = std::get<LexiconMode>(mode).lexicon;
        label = (lex ? *lex : Lexicon::builtin()).classify(comment.text);
    }
    ScoredComment out;
    out.comment = std::move(comment);
    out.label = label;
    out.score = map_label_to_score(label);
    return out;
}

std::string_view scorer_name(const ScorerMode& mode) {
    return std::holds_alternative<PassthroughMode>(mode) ? "passthrough" : "lexicon";
}

} // namespace sentidrift
