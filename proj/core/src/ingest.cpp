#include "routinecast/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "routinecast/errors.hpp"

namespace routinecast {

namespace {

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

std::optional<Marker> parse_marker(std::string_view token) {
    std::string lower = canonical_label(token);
    if (lower == "begin") return Marker::Begin;
    if (lower == "end") return Marker::End;
    return std::nullopt;
}

}  // namespace

EventLog parse_events(std::istream& input) {
    EventLog log;
    std::string line;
    while (std::getline(input, line)) {
        ++log.stats.total_lines;
        auto tokens = split_whitespace(line);
        if (tokens.empty()) {
            ++log.stats.blank_lines;
            continue;
        }
        auto reject = [&](const char* reason) {
            ++log.stats.malformed_lines;
            ++log.stats.malformed_reasons[reason];
        };
        if (tokens.size() < 4) {
            reject("too_few_fields");
            continue;
        }
        if (tokens.size() > 6) {
            reject("too_many_fields");
            continue;
        }
        if (tokens.size() == 5) {
            // An activity label without its begin/end marker (or vice versa).
            reject("annotation_missing_marker");
            continue;
        }
        std::string stamp_text = std::string(tokens[0]) + " " + std::string(tokens[1]);
        auto stamp = Timestamp::parse(stamp_text);
        if (!stamp) {
            reject("bad_timestamp");
            continue;
        }
        RawEvent event;
        event.timestamp = *stamp;
        event.sensor_id = std::string(tokens[2]);
        event.sensor_value = std::string(tokens[3]);
        if (tokens.size() == 6) {
            auto marker = parse_marker(tokens[5]);
            if (!marker) {
                reject("bad_marker");
                continue;
            }
            event.activity = std::string(tokens[4]);
            event.marker = marker;
            ++log.stats.annotated_events;
        }
        log.events.push_back(std::move(event));
        ++log.stats.events;
    }
    if (input.bad()) {
        throw IoError("stream read failure while parsing events");
    }
    return log;
}

IntervalBuildResult build_intervals(const std::vector<RawEvent>& events) {
    IntervalBuildResult result;

    struct RawInterval {
        std::string label;  // canonical
        Timestamp start;
        Timestamp end;
    };

    // Pass 1: per-label sequential begin/end matching over annotated events.
    std::vector<RawInterval> raw;
    std::unordered_map<std::string, Timestamp> pending;
    std::set<std::int64_t> dates;
    for (const auto& event : events) {
        if (!event.annotated()) continue;
        dates.insert(event.timestamp.days_since_epoch());
        std::string label = canonical_label(*event.activity);
        if (*event.marker == Marker::Begin) {
            auto [it, inserted] = pending.try_emplace(label, event.timestamp);
            if (!inserted) {
                // An unclosed earlier begin of the same label is orphaned.
                ++result.exclusions.unmatched_begin;
                it->second = event.timestamp;
            }
        } else {
            auto it = pending.find(label);
            if (it == pending.end()) {
                ++result.exclusions.unmatched_end;
                continue;
            }
            if (event.timestamp <= it->second) {
                ++result.exclusions.nonpositive_duration;
            } else {
                raw.push_back({label, it->second, event.timestamp});
            }
            pending.erase(it);
        }
    }
    result.exclusions.unmatched_begin += pending.size();
    result.distinct_dates = dates.size();

    std::stable_sort(raw.begin(), raw.end(), [](const RawInterval& a, const RawInterval& b) {
        return a.start < b.start;
    });
    for (const auto& interval : raw) ++result.raw_interval_counts[interval.label];

    // Pass 2: fold each (leave_home ... enter_home) block pair into one
    // being_outside interval spanning leave begin -> enter end.
    std::vector<RawInterval> folded;
    std::optional<RawInterval> pending_leave;
    for (const auto& interval : raw) {
        if (interval.label == kLeaveHome) {
            if (pending_leave) ++result.exclusions.unpaired_leave;
            pending_leave = interval;
        } else if (interval.label == kEnterHome) {
            if (pending_leave) {
                folded.push_back({std::string(kBeingOutside), pending_leave->start, interval.end});
                pending_leave.reset();
            } else {
                ++result.exclusions.unpaired_enter;
            }
        } else {
            folded.push_back(interval);
        }
    }
    if (pending_leave) ++result.exclusions.unpaired_leave;

    std::stable_sort(folded.begin(), folded.end(),
                     [](const RawInterval& a, const RawInterval& b) { return a.start < b.start; });

    // Pass 3: enforce chronological disjointness. An interval starting inside
    // the previously kept one is treated as interleaved-malformed.
    std::vector<RawInterval> kept;
    Timestamp running_end = Timestamp::from_micros(std::numeric_limits<std::int64_t>::min());
    for (const auto& interval : folded) {
        if (interval.start < running_end) {
            ++result.exclusions.overlap_dropped;
            continue;
        }
        kept.push_back(interval);
        running_end = interval.end;
    }

    std::vector<std::string> names;
    names.reserve(kept.size() + 1);
    for (const auto& interval : kept) names.push_back(interval.label);
    names.emplace_back(kBeingOutside);
    result.ontology = Ontology::from_names(std::move(names));

    result.intervals.reserve(kept.size());
    for (const auto& interval : kept) {
        result.intervals.push_back(
            make_interval(result.ontology.require(interval.label), interval.start, interval.end));
    }
    return result;
}

SplitDataset chronological_split(const Ontology& ontology,
                                 const std::vector<ActivityInterval>& intervals, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw ConfigError("split fraction must lie in (0, 1)");
    }
    if (intervals.size() < 2) {
        throw DegenerateInputError("need at least 2 intervals to split");
    }
    auto n_train = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(intervals.size())));
    SplitDataset split;
    split.ontology = ontology;
    split.split_fraction = fraction;
    split.train.assign(intervals.begin(), intervals.begin() + n_train);
    split.eval.assign(intervals.begin() + n_train, intervals.end());
    return split;
}

std::string skip_report_json(const ParseStats& stats, const IntervalBuildResult& result) {
    nlohmann::json doc;
    doc["input_lines"] = stats.total_lines;
    doc["blank_lines"] = stats.blank_lines;
    doc["events"] = stats.events;
    doc["annotated_events"] = stats.annotated_events;
    doc["malformed_lines"] = stats.malformed_lines;
    doc["malformed_reasons"] = stats.malformed_reasons;
    doc["distinct_annotated_dates"] = result.distinct_dates;
    doc["raw_interval_counts"] = result.raw_interval_counts;
    doc["intervals_kept"] = result.intervals.size();
    doc["exclusions"] = {
        {"unmatched_begin", result.exclusions.unmatched_begin},
        {"unmatched_end", result.exclusions.unmatched_end},
        {"nonpositive_duration", result.exclusions.nonpositive_duration},
        {"overlap_dropped", result.exclusions.overlap_dropped},
        {"unpaired_leave", result.exclusions.unpaired_leave},
        {"unpaired_enter", result.exclusions.unpaired_enter},
    };
    doc["ontology"] = result.ontology.names();
    return doc.dump(2) + "\n";
}

}  // namespace routinecast
