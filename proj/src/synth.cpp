#include "sentidrift/synth.hpp"

#include <array>
#include <ostream>
#include <random>
#include <string>

#include <json.hpp>

#include "sentidrift/exports.hpp"

namespace sentidrift {
namespace {

// Airline complaint categories; the empty entry leaves the topic unset.
constexpr std::array<std::string_view, 9> kTopics{
    "Customer Service Issue", "Late Flight", "Cancelled Flight", "Lost Luggage", "Bad Flight",
    "Flight Booking Problems", "Flight Attendant Complaints", "longlines", ""};
constexpr std::array<double, 9> kTopicWeights{0.26, 0.16, 0.08, 0.10, 0.06, 0.06, 0.05, 0.03, 0.20};

constexpr std::array<std::string_view, 6> kPositive{
    "thanks for the great service today", "crew was friendly and helpful", "smooth flight, love it",
    "awesome upgrade, thank you", "quick boarding and a nice crew", "best airline experience in a while"};
constexpr std::array<std::string_view, 6> kNeutral{
    "what time does boarding start", "is the lounge open at terminal b", "changing my seat for tomorrow",
    "flying to denver next week", "any wifi on this route", "checking in now"};
constexpr std::array<std::string_view, 8> kNegative{
    "flight delayed again, terrible", "bag lost and nobody answers", "worst customer service ever",
    "cancelled with no notice, unacceptable", "stuck on the tarmac for hours", "rude agent at the gate",
    "still waiting for my luggage", "booking site broken, frustrated"};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    // mt19937_64 output is fully specified, unlike the standard distributions.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

private:
    std::mt19937_64 engine_;
};

template <std::size_t N>
std::size_t weighted(Rng& rng, const std::array<double, N>& weights) {
    double u = rng.uniform();
    for (std::size_t i = 0; i < N; ++i) {
        if (u < weights[i]) return i;
        u -= weights[i];
    }
    return N - 1;
}

} // namespace

void write_synthetic_corpus(const SynthConfig& config, std::ostream& out, InputFormat format) {
    Rng rng(config.seed);
    std::string buf;
    buf.reserve(1 << 16);
    if (format == InputFormat::Csv) buf += "id,timestamp,text,label,topic\n";

    EpochMillis ts = config.start_ms;
    for (std::size_t i = 0; i < config.count; ++i) {
        ts += static_cast<EpochMillis>(rng.below(static_cast<std::size_t>(config.max_gap_ms) + 1));
        const bool burst = config.burst_every > 0 && i >= config.burst_every &&
                           (i % config.burst_every) < config.burst_length;
        const double p_neg = burst ? 0.82 : 0.45;
        const double p_neu = burst ? 0.10 : 0.32;
        const double u = rng.uniform();
        const SentimentLabel label =
            u < p_neg ? SentimentLabel::Negative : (u < p_neg + p_neu ? SentimentLabel::Neutral : SentimentLabel::Positive);

        std::string_view topic = kTopics[weighted(rng, kTopicWeights)];
        if (burst && label == SentimentLabel::Negative && rng.uniform() < 0.6) topic = rng.uniform() < 0.5 ? "Late Flight" : "Cancelled Flight";

        std::string_view text;
        switch (label) {
        case SentimentLabel::Negative: text = kNegative[rng.below(kNegative.size())]; break;
        case SentimentLabel::Neutral: text = kNeutral[rng.below(kNeutral.size())]; break;
        case SentimentLabel::Positive: text = kPositive[rng.below(kPositive.size())]; break;
        }

        const std::string id = "s" + std::to_string(i);
        const std::string stamp = format_rfc3339(ts);
        if (format == InputFormat::Csv) {
            buf += id;
            buf += ',';
            buf += stamp;
            buf += ',';
            buf += csv_field(text);
            buf += ',';
            if (config.labeled) buf += label_name(label);
            buf += ',';
            buf += csv_field(topic);
            buf += '\n';
        } else {
            nlohmann::ordered_json j;
            j["id"] = id;
            j["timestamp"] = stamp;
            j["text"] = text;
            if (config.labeled) j["label"] = label_name(label);
            if (!topic.empty()) j["topic"] = topic;
            buf += j.dump();
            buf += '\n';
        }
        if (buf.size() > (1 << 16) - 512) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

} // namespace sentidrift
