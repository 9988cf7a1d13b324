#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "routinecast/clock.hpp"
#include "routinecast/ontology.hpp"

namespace routinecast {

/// One scored next-activity instance. duration_valid is false when the
/// prediction was excluded by the parse-retry policy; such pairs still count
/// as misclassifications and joint failures.
struct LabeledPair {
    int truth_label = 0;
    int pred_label = 0;
    double truth_duration = 0.0;
    double pred_duration = 0.0;
    bool duration_valid = true;
};

/// Sentinel predicted label for instances whose output never parsed. Counts
/// as wrong everywhere but is excluded from per-class macro/weighted
/// averaging (it is not a class).
inline constexpr int kUnparsedPrediction = -2;

struct ClassStats {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t support = 0;
};

struct ClassificationReport {
    double accuracy = 0.0;
    double micro_precision = 0.0, micro_recall = 0.0, micro_f1 = 0.0;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
    std::map<int, ClassStats> per_class;
    std::size_t n = 0;
};

/// Macro/weighted averages run over classes observed in truth or predictions;
/// zero-division yields 0. In this single-label setting micro precision,
/// recall, and F1 all equal accuracy.
ClassificationReport classification_report(const std::vector<LabeledPair>& pairs);

struct DurationReport {
    double mae = 0.0;
    double rmse = 0.0;
    std::size_t n_valid = 0;
};

/// MAE and RMSE over pairs with duration_valid set.
DurationReport duration_report(const std::vector<LabeledPair>& pairs);

/// Fraction of pairs with the correct label AND |pred - truth| <= tolerance
/// minutes (inclusive). Invalid-duration pairs count as failures.
double joint_success(const std::vector<LabeledPair>& pairs, double tolerance_minutes);

/// Reserved timeline label for minutes no interval covers.
inline constexpr int kGapLabel = -1;

struct DailyTimeline {
    std::string day_id;
    std::vector<int> labels;  // one per minute; kGapLabel where uncovered

    std::size_t length() const { return labels.size(); }
};

struct TimelineSegment {
    int label = 0;
    Timestamp start;
    Timestamp end;
};

/// Minute m takes the label of the segment covering the instant
/// span_start + m minutes under half-open [start, end) semantics; uncovered
/// minutes become kGapLabel. Overlapping segments are an error.
DailyTimeline expand_timeline(std::vector<TimelineSegment> segments, Timestamp span_start,
                              Timestamp span_end, std::string day_id = {});

DailyTimeline expand_timeline(const std::vector<ActivityInterval>& intervals,
                              Timestamp span_start, Timestamp span_end, std::string day_id = {});

enum class GapPolicy { Keep, Drop };

/// Keep: GAP participates in DTW cost like any label. Drop: minutes where the
/// ground truth is GAP are removed from both timelines (they must be
/// positionally aligned, i.e. equal length).
std::pair<DailyTimeline, DailyTimeline> apply_gap_policy(const DailyTimeline& truth,
                                                         const DailyTimeline& predicted,
                                                         GapPolicy policy);

struct DtwResult {
    double raw = 0.0;         // minutes of disagreement after optimal warping
    double normalized = 0.0;  // raw / T_day of the ground-truth timeline
};

/// Full dynamic program with 0/1 mismatch cost and a two-row rolling buffer.
DtwResult dtw(const DailyTimeline& truth, const DailyTimeline& predicted);

}  // namespace routinecast
