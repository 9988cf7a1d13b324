#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "routinecast/clock.hpp"
#include "routinecast/ontology.hpp"

namespace routinecast {

/// Day-of-week plus 15-minute slot of day.
struct SlotKey {
    Weekday day;
    int slot;  // 0..95

    static SlotKey of(Timestamp t) { return {t.weekday(), t.slot_index()}; }
};

enum class TransitionLevel { Slot, Day, Overall };
enum class DurationLevel { ActivityDow, Global };

const char* transition_level_name(TransitionLevel level);
const char* duration_level_name(DurationLevel level);

/// Next-activity transition tables stratified by (previous label, day of
/// week, 15-minute slot), with day-level and overall fallbacks. Counts are
/// kept alongside the normalized probabilities.
class TransitionPriors {
public:
    struct Entry {
        std::vector<std::int64_t> counts;  // indexed by successor label
        std::vector<double> probs;         // counts / total, sums to 1
        std::int64_t total = 0;
    };

    struct Lookup {
        const std::vector<double>* probs;
        TransitionLevel level;
    };

    /// Slot entry if populated, else day entry, else overall.
    /// Throws NoPriorError when the previous label was never seen in training.
    Lookup lookup(int prev_label, Weekday day, int slot) const;

    const Entry* slot_entry(int prev_label, Weekday day, int slot) const;
    const Entry* day_entry(int prev_label, Weekday day) const;
    const Entry* overall_entry(int prev_label) const;

    // Dense keys, ordered, for deterministic serialization.
    const std::map<std::int64_t, Entry>& slot_level() const { return slot_level_; }
    const std::map<std::int64_t, Entry>& day_level() const { return day_level_; }
    const std::map<int, Entry>& overall() const { return overall_; }

    static std::int64_t slot_key(int prev_label, Weekday day, int slot);
    static std::int64_t day_key(int prev_label, Weekday day);

    friend TransitionPriors estimate_transitions(const Ontology&,
                                                 const std::vector<ActivityInterval>&);
    friend struct PriorsCodec;

private:
    std::map<std::int64_t, Entry> slot_level_;
    std::map<std::int64_t, Entry> day_level_;
    std::map<int, Entry> overall_;
};

/// Median activity durations by (label, day of week) with a per-label global
/// fallback.
class DurationPriors {
public:
    struct Lookup {
        double minutes;
        DurationLevel level;
    };

    /// (label, day) median if present, else the label's global median.
    /// Throws NoPriorError when the label never appeared in training.
    Lookup lookup(int label, Weekday day) const;

    struct Median {
        double minutes = 0.0;
        std::int64_t n = 0;
    };

    const std::map<std::int64_t, Median>& by_activity_dow() const { return by_activity_dow_; }
    const std::map<int, Median>& global() const { return global_; }

    static std::int64_t dow_key(int label, Weekday day);

    friend DurationPriors estimate_duration_medians(const Ontology&,
                                                    const std::vector<ActivityInterval>&);
    friend struct PriorsCodec;

private:
    std::map<std::int64_t, Median> by_activity_dow_;
    std::map<int, Median> global_;
};

/// Counts every consecutive (a_i -> a_{i+1}) pair from the training split.
/// The slot key is anchored on the successor's start time.
TransitionPriors estimate_transitions(const Ontology& ontology,
                                      const std::vector<ActivityInterval>& train);

/// Exact medians; even-sized samples use the mean of the two middle values.
DurationPriors estimate_duration_medians(const Ontology& ontology,
                                         const std::vector<ActivityInterval>& train);

struct PriorsBundle {
    Ontology ontology;
    TransitionPriors transitions;
    DurationPriors durations;
};

/// Single JSON document with ontology, all three transition levels (counts
/// retained alongside probabilities) and both duration tables.
std::string priors_to_json(const PriorsBundle& bundle);
PriorsBundle priors_from_json(const std::string& text);

}  // namespace routinecast
