#include "routinecast/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include "routinecast/errors.hpp"

namespace routinecast {

ClassificationReport classification_report(const std::vector<LabeledPair>& pairs) {
    if (pairs.empty()) {
        throw DegenerateInputError("classification report over an empty pair set");
    }
    ClassificationReport report;
    report.n = pairs.size();

    std::set<int> classes;
    std::size_t correct = 0;
    for (const auto& pair : pairs) {
        classes.insert(pair.truth_label);
        if (pair.pred_label != kUnparsedPrediction) classes.insert(pair.pred_label);
        if (pair.pred_label == pair.truth_label) ++correct;
    }
    for (int cls : classes) report.per_class.emplace(cls, ClassStats{});
    for (const auto& pair : pairs) {
        auto& truth_stats = report.per_class[pair.truth_label];
        ++truth_stats.support;
        if (pair.pred_label == pair.truth_label) {
            ++truth_stats.tp;
        } else {
            ++truth_stats.fn;
            if (pair.pred_label != kUnparsedPrediction) {
                ++report.per_class[pair.pred_label].fp;
            }
        }
    }

    report.accuracy = static_cast<double>(correct) / static_cast<double>(report.n);
    // Single-label identity: every instance carries exactly one prediction, so
    // global TP = correct and global FP = global FN = n - correct.
    report.micro_precision = report.micro_recall = report.micro_f1 = report.accuracy;

    double sum_p = 0.0, sum_r = 0.0, sum_f1 = 0.0;
    double wsum_p = 0.0, wsum_r = 0.0, wsum_f1 = 0.0;
    for (const auto& [cls, stats] : report.per_class) {
        const double predicted = static_cast<double>(stats.tp + stats.fp);
        const double actual = static_cast<double>(stats.tp + stats.fn);
        const double precision = predicted > 0 ? static_cast<double>(stats.tp) / predicted : 0.0;
        const double recall = actual > 0 ? static_cast<double>(stats.tp) / actual : 0.0;
        const double f1 =
            (precision + recall) > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        sum_p += precision;
        sum_r += recall;
        sum_f1 += f1;
        const double weight = static_cast<double>(stats.support);
        wsum_p += weight * precision;
        wsum_r += weight * recall;
        wsum_f1 += weight * f1;
    }
    const double n_classes = static_cast<double>(report.per_class.size());
    report.macro_precision = sum_p / n_classes;
    report.macro_recall = sum_r / n_classes;
    report.macro_f1 = sum_f1 / n_classes;
    const double total_support = static_cast<double>(report.n);
    report.weighted_precision = wsum_p / total_support;
    report.weighted_recall = wsum_r / total_support;
    report.weighted_f1 = wsum_f1 / total_support;
    return report;
}

DurationReport duration_report(const std::vector<LabeledPair>& pairs) {
    DurationReport report;
    double abs_sum = 0.0, sq_sum = 0.0;
    for (const auto& pair : pairs) {
        if (!pair.duration_valid) continue;
        const double error = pair.pred_duration - pair.truth_duration;
        abs_sum += std::fabs(error);
        sq_sum += error * error;
        ++report.n_valid;
    }
    if (report.n_valid == 0) {
        throw DegenerateInputError("duration report needs at least one valid pair");
    }
    report.mae = abs_sum / static_cast<double>(report.n_valid);
    report.rmse = std::sqrt(sq_sum / static_cast<double>(report.n_valid));
    return report;
}

double joint_success(const std::vector<LabeledPair>& pairs, double tolerance_minutes) {
    if (tolerance_minutes <= 0.0) throw ConfigError("joint-success tolerance must be positive");
    if (pairs.empty()) throw DegenerateInputError("joint success over an empty pair set");
    std::size_t hits = 0;
    for (const auto& pair : pairs) {
        if (pair.pred_label != pair.truth_label || !pair.duration_valid) continue;
        if (std::fabs(pair.pred_duration - pair.truth_duration) <= tolerance_minutes) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

DailyTimeline expand_timeline(std::vector<TimelineSegment> segments, Timestamp span_start,
                              Timestamp span_end, std::string day_id) {
    if (span_end <= span_start) throw ConfigError("timeline span must have positive length");
    std::stable_sort(segments.begin(), segments.end(),
                     [](const TimelineSegment& a, const TimelineSegment& b) {
                         return a.start < b.start;
                     });
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        if (segments[i + 1].start < segments[i].end) {
            throw DataError("overlapping segments in timeline expansion");
        }
    }

    const std::int64_t minutes = (span_end.micros() - span_start.micros()) / kMicrosPerMinute;
    DailyTimeline timeline;
    timeline.day_id = std::move(day_id);
    timeline.labels.assign(static_cast<std::size_t>(minutes), kGapLabel);

    std::size_t seg = 0;
    for (std::int64_t m = 0; m < minutes; ++m) {
        const Timestamp instant = span_start.add_micros(m * kMicrosPerMinute);
        while (seg < segments.size() && segments[seg].end <= instant) ++seg;
        if (seg < segments.size() && segments[seg].start <= instant) {
            timeline.labels[static_cast<std::size_t>(m)] = segments[seg].label;
        }
    }
    return timeline;
}

DailyTimeline expand_timeline(const std::vector<ActivityInterval>& intervals,
                              Timestamp span_start, Timestamp span_end, std::string day_id) {
    std::vector<TimelineSegment> segments;
    segments.reserve(intervals.size());
    for (const auto& interval : intervals) {
        if (interval.end <= span_start || interval.start >= span_end) continue;
        segments.push_back({interval.label, interval.start, interval.end});
    }
    return expand_timeline(std::move(segments), span_start, span_end, std::move(day_id));
}

std::pair<DailyTimeline, DailyTimeline> apply_gap_policy(const DailyTimeline& truth,
                                                         const DailyTimeline& predicted,
                                                         GapPolicy policy) {
    if (policy == GapPolicy::Keep) return {truth, predicted};
    if (truth.length() != predicted.length()) {
        throw ConfigError("gap policy 'drop' needs positionally aligned timelines");
    }
    DailyTimeline truth_out{truth.day_id, {}};
    DailyTimeline pred_out{predicted.day_id, {}};
    for (std::size_t i = 0; i < truth.labels.size(); ++i) {
        if (truth.labels[i] == kGapLabel) continue;
        truth_out.labels.push_back(truth.labels[i]);
        pred_out.labels.push_back(predicted.labels[i]);
    }
    return {std::move(truth_out), std::move(pred_out)};
}

DtwResult dtw(const DailyTimeline& truth, const DailyTimeline& predicted) {
    const auto& a = truth.labels;
    const auto& b = predicted.labels;
    if (a.empty() || b.empty()) throw DegenerateInputError("dtw over an empty timeline");

    const std::size_t m = b.size();
    std::vector<std::uint32_t> prev(m), curr(m);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::uint32_t cost = a[i] != b[j] ? 1u : 0u;
            std::uint32_t best;
            if (i == 0 && j == 0) {
                best = 0;
            } else if (i == 0) {
                best = curr[j - 1];
            } else if (j == 0) {
                best = prev[j];
            } else {
                best = std::min({prev[j], curr[j - 1], prev[j - 1]});
            }
            curr[j] = cost + best;
        }
        std::swap(prev, curr);
    }
    DtwResult result;
    result.raw = static_cast<double>(prev[m - 1]);
    result.normalized = result.raw / static_cast<double>(a.size());
    return result;
}

}  // namespace routinecast
