#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "routinecast/clock.hpp"
#include "routinecast/ontology.hpp"

namespace routinecast {

enum class Marker { Begin, End };

/// One line of a CASAS event log. Lines without an activity annotation have
/// neither activity nor marker; lines with one have both.
struct RawEvent {
    Timestamp timestamp;
    std::string sensor_id;
    std::string sensor_value;
    std::optional<std::string> activity;  // raw label, original spelling
    std::optional<Marker> marker;

    bool annotated() const { return activity.has_value(); }
};

struct ParseStats {
    std::size_t total_lines = 0;
    std::size_t blank_lines = 0;
    std::size_t events = 0;
    std::size_t annotated_events = 0;
    std::size_t malformed_lines = 0;
    std::map<std::string, std::size_t> malformed_reasons;
};

struct EventLog {
    std::vector<RawEvent> events;
    ParseStats stats;
};

/// Streaming line parser. Malformed lines are counted per reason and skipped;
/// only a stream read failure is fatal (IoError).
EventLog parse_events(std::istream& input);

/// Counts of events/intervals dropped while pairing begin/end annotations.
struct ExclusionCounts {
    std::size_t unmatched_begin = 0;
    std::size_t unmatched_end = 0;
    std::size_t nonpositive_duration = 0;
    std::size_t overlap_dropped = 0;
    std::size_t unpaired_leave = 0;
    std::size_t unpaired_enter = 0;

    std::size_t total() const {
        return unmatched_begin + unmatched_end + nonpositive_duration + overlap_dropped +
               unpaired_leave + unpaired_enter;
    }
};

struct IntervalBuildResult {
    Ontology ontology;  // working ontology: raw labels minus leave/enter, plus being_outside
    std::vector<ActivityInterval> intervals;  // chronological, pairwise disjoint
    ExclusionCounts exclusions;
    /// Completed intervals per raw canonical label, before being_outside
    /// conversion (leave_home/enter_home still counted here).
    std::map<std::string, std::size_t> raw_interval_counts;
    std::size_t distinct_dates = 0;  // over annotated events
};

/// Matches begin/end pairs per label in one sequential pass, converts each
/// (leave_home, enter_home) block pair into one being_outside interval, and
/// drops whatever would break chronological disjointness.
IntervalBuildResult build_intervals(const std::vector<RawEvent>& events);

/// First floor(fraction * n) intervals become train, the rest eval.
SplitDataset chronological_split(const Ontology& ontology,
                                 const std::vector<ActivityInterval>& intervals,
                                 double fraction = 0.8);

/// JSON text of the skip/exclusion summary emitted next to the interval files.
std::string skip_report_json(const ParseStats& stats, const IntervalBuildResult& result);

}  // namespace routinecast
