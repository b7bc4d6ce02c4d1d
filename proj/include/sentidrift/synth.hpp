#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>

#include "sentidrift/ingest.hpp"
#include "sentidrift/timestamp.hpp"

namespace sentidrift {

/// Seeded synthetic feedback corpus with injected complaint bursts.
struct SynthConfig {
    std::size_t count = 10'000;
    std::uint64_t seed = 1;
    bool labeled = true;   ///< write a `label` column for the passthrough scorer
    EpochMillis start_ms = 1'424'044'800'000; ///< 2015-02-16T00:00:00Z
    EpochMillis max_gap_ms = 30'000;
    std::size_t burst_every = 2'500;  ///< a complaint burst starts every N comments
    std::size_t burst_length = 150;
};

/// Output depends only on the config: same seed, same bytes.
void write_synthetic_corpus(const SynthConfig& config, std::ostream& out, InputFormat format);

} // namespace sentidrift
