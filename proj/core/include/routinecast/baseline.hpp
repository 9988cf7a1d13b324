#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "routinecast/priors.hpp"

namespace routinecast {

/// Seeded RNG with a fully specified draw algorithm so the baseline can be
/// replicated elsewhere: mt19937_64, unit doubles as (x >> 11) * 2^-53,
/// categorical sampling by CDF walk in ontology index order.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// splitmix64 of (base ^ (index+1) * golden-ratio); derives independent
/// per-day / per-sweep streams from one base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Inverse-CDF draw over the vector's support; entries with zero probability
/// are never returned.
int sample_categorical(const std::vector<double>& probs, SeededRng& rng);

/// Highest-probability index, ties broken toward the lower index.
int argmax_categorical(const std::vector<double>& probs);

struct BaselinePrediction {
    int label = 0;
    double duration_minutes = 0.0;
    TransitionLevel transition_level = TransitionLevel::Overall;
    DurationLevel duration_level = DurationLevel::Global;
    std::uint64_t rng_seed = 0;
};

/// Samples the next activity from the fallback-resolved transition vector and
/// assigns that activity's median duration for the day.
BaselinePrediction predict_next_baseline(const TransitionPriors& transitions,
                                         const DurationPriors& durations, int prev_label,
                                         Weekday day, int slot, SeededRng& rng);

/// Deterministic argmax variant of the same decision rule.
BaselinePrediction predict_next_argmax(const TransitionPriors& transitions,
                                       const DurationPriors& durations, int prev_label,
                                       Weekday day, int slot);

struct RolloutStep {
    int label = 0;
    Timestamp start;
    double duration_minutes = 0.0;
};

/// Repeats predict -> advance-clock until the clock reaches end_clock. The
/// last step may overrun end_clock; timeline expansion truncates it.
/// seed_history supplies the last finished activity. A zero-length horizon
/// yields an empty rollout; a negative one is a configuration error.
std::vector<RolloutStep> rollout_baseline(const TransitionPriors& transitions,
                                          const DurationPriors& durations,
                                          const std::vector<ActivityInterval>& seed_history,
                                          Timestamp start_clock, Timestamp end_clock,
                                          SeededRng& rng);

}  // namespace routinecast
