#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "routinecast/clock.hpp"

namespace routinecast {

inline constexpr std::string_view kBeingOutside = "being_outside";
inline constexpr std::string_view kLeaveHome = "leave_home";
inline constexpr std::string_view kEnterHome = "enter_home";

/// Lowercase a raw activity label into its canonical form.
std::string canonical_label(std::string_view raw);

/// Bijection between 0-based label indices and canonical lowercase names,
/// fixed for the lifetime of a run. Indices are assigned by sorted name so
/// the same label set always yields the same ontology.
class Ontology {
public:
    Ontology() = default;

    /// Builds from a set of canonical names (deduplicated, then sorted).
    static Ontology from_names(std::vector<std::string> names);

    /// Rebuilds from explicit (index, name) pairs, e.g. from serialized data.
    /// Indices must form a dense 0..n-1 range with unique names.
    static Ontology from_index_name_pairs(const std::map<int, std::string>& pairs);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int index) const;
    std::optional<int> find(std::string_view name) const;
    int require(std::string_view name) const;  // throws DataError when absent
    bool contains(int index) const { return index >= 0 && index < size(); }
    const std::vector<std::string>& names() const { return names_; }

    friend bool operator==(const Ontology& a, const Ontology& b) { return a.names_ == b.names_; }

private:
    std::vector<std::string> names_;
    std::map<std::string, int, std::less<>> index_by_name_;
};

/// One completed activity episode.
struct ActivityInterval {
    int label = 0;  // ontology index
    Timestamp start;
    Timestamp end;
    double duration_minutes = 0.0;
    Weekday day_of_week = Weekday::Monday;  // derived from start
};

ActivityInterval make_interval(int label, Timestamp start, Timestamp end);

struct SplitDataset {
    Ontology ontology;
    std::vector<ActivityInterval> train;
    std::vector<ActivityInterval> eval;
    double split_fraction = 0.8;
};

}  // namespace routinecast
