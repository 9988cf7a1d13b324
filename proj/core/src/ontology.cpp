#include "routinecast/ontology.hpp"

#include <algorithm>
#include <cctype>

#include "routinecast/errors.hpp"

namespace routinecast {

std::string canonical_label(std::string_view raw) {
    std::string out(raw);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

Ontology Ontology::from_names(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    Ontology ontology;
    ontology.names_ = std::move(names);
    for (int i = 0; i < ontology.size(); ++i) {
        ontology.index_by_name_.emplace(ontology.names_[i], i);
    }
    return ontology;
}

Ontology Ontology::from_index_name_pairs(const std::map<int, std::string>& pairs) {
    Ontology ontology;
    int expected = 0;
    for (const auto& [index, name] : pairs) {
        if (index != expected) {
            throw DataError("label indices are not a dense 0..n-1 range (missing index " +
                            std::to_string(expected) + ")");
        }
        if (ontology.index_by_name_.count(name)) {
            throw DataError("duplicate label name: " + name);
        }
        ontology.names_.push_back(name);
        ontology.index_by_name_.emplace(name, index);
        ++expected;
    }
    return ontology;
}

const std::string& Ontology::name(int index) const {
    if (!contains(index)) {
        throw DataError("label index out of range: " + std::to_string(index));
    }
    return names_[index];
}

std::optional<int> Ontology::find(std::string_view name) const {
    auto it = index_by_name_.find(name);
    if (it == index_by_name_.end()) return std::nullopt;
    return it->second;
}

int Ontology::require(std::string_view name) const {
    auto found = find(name);
    if (!found) throw DataError("unknown activity label: " + std::string(name));
    return *found;
}

ActivityInterval make_interval(int label, Timestamp start, Timestamp end) {
    ActivityInterval interval;
    interval.label = label;
    interval.start = start;
    interval.end = end;
    interval.duration_minutes = minutes_between(start, end);
    interval.day_of_week = start.weekday();
    return interval;
}

}  // namespace routinecast
