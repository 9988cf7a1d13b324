#include "routinecast/baseline.hpp"

#include "routinecast/errors.hpp"

namespace routinecast {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base ^ ((index + 1) * 0x9e3779b97f4a7c15ull);
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

int sample_categorical(const std::vector<double>& probs, SeededRng& rng) {
    const double u = rng.next_unit();
    double cumulative = 0.0;
    int last_support = -1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        last_support = static_cast<int>(i);
        cumulative += probs[i];
        if (u < cumulative) return static_cast<int>(i);
    }
    if (last_support < 0) {
        throw DegenerateInputError("categorical sample over an all-zero vector");
    }
    // u fell into fp slack past the accumulated mass; return the top of the
    // support so the draw stays inside it.
    return last_support;
}

int argmax_categorical(const std::vector<double>& probs) {
    int best = -1;
    double best_p = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > best_p) {
            best_p = probs[i];
            best = static_cast<int>(i);
        }
    }
    if (best < 0) throw DegenerateInputError("argmax over an all-zero vector");
    return best;
}

namespace {

BaselinePrediction predict_impl(const TransitionPriors& transitions,
                                const DurationPriors& durations, int prev_label, Weekday day,
                                int slot, SeededRng* rng) {
    auto transition = transitions.lookup(prev_label, day, slot);
    BaselinePrediction prediction;
    prediction.label = rng ? sample_categorical(*transition.probs, *rng)
                           : argmax_categorical(*transition.probs);
    prediction.transition_level = transition.level;
    auto duration = durations.lookup(prediction.label, day);
    prediction.duration_minutes = duration.minutes;
    prediction.duration_level = duration.level;
    prediction.rng_seed = rng ? rng->seed() : 0;
    return prediction;
}

}  // namespace

BaselinePrediction predict_next_baseline(const TransitionPriors& transitions,
                                         const DurationPriors& durations, int prev_label,
                                         Weekday day, int slot, SeededRng& rng) {
    return predict_impl(transitions, durations, prev_label, day, slot, &rng);
}

BaselinePrediction predict_next_argmax(const TransitionPriors& transitions,
                                       const DurationPriors& durations, int prev_label,
                                       Weekday day, int slot) {
    return predict_impl(transitions, durations, prev_label, day, slot, nullptr);
}

std::vector<RolloutStep> rollout_baseline(const TransitionPriors& transitions,
                                          const DurationPriors& durations,
                                          const std::vector<ActivityInterval>& seed_history,
                                          Timestamp start_clock, Timestamp end_clock,
                                          SeededRng& rng) {
    if (seed_history.empty()) {
        throw DegenerateInputError("rollout needs a nonempty seed history");
    }
    if (end_clock < start_clock) {
        throw ConfigError("rollout horizon is negative");
    }
    std::vector<RolloutStep> steps;
    int prev_label = seed_history.back().label;
    Timestamp clock = start_clock;
    while (clock < end_clock) {
        auto prediction = predict_next_baseline(transitions, durations, prev_label,
                                                clock.weekday(), clock.slot_index(), rng);
        steps.push_back({prediction.label, clock, prediction.duration_minutes});
        clock = clock.add_minutes(prediction.duration_minutes);
        prev_label = prediction.label;
    }
    return steps;
}

}  // namespace routinecast
