#include "routinecast/priors.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "routinecast/errors.hpp"

namespace routinecast {

const char* transition_level_name(TransitionLevel level) {
    switch (level) {
        case TransitionLevel::Slot: return "Slot";
        case TransitionLevel::Day: return "Day";
        case TransitionLevel::Overall: return "Overall";
    }
    return "?";
}

const char* duration_level_name(DurationLevel level) {
    switch (level) {
        case DurationLevel::ActivityDow: return "ActivityDow";
        case DurationLevel::Global: return "Global";
    }
    return "?";
}

std::int64_t TransitionPriors::slot_key(int prev_label, Weekday day, int slot) {
    return (static_cast<std::int64_t>(prev_label) * 7 + static_cast<int>(day)) * kSlotsPerDay +
           slot;
}

std::int64_t TransitionPriors::day_key(int prev_label, Weekday day) {
    return static_cast<std::int64_t>(prev_label) * 7 + static_cast<int>(day);
}

const TransitionPriors::Entry* TransitionPriors::slot_entry(int prev_label, Weekday day,
                                                            int slot) const {
    auto it = slot_level_.find(slot_key(prev_label, day, slot));
    return it == slot_level_.end() ? nullptr : &it->second;
}

const TransitionPriors::Entry* TransitionPriors::day_entry(int prev_label, Weekday day) const {
    auto it = day_level_.find(day_key(prev_label, day));
    return it == day_level_.end() ? nullptr : &it->second;
}

const TransitionPriors::Entry* TransitionPriors::overall_entry(int prev_label) const {
    auto it = overall_.find(prev_label);
    return it == overall_.end() ? nullptr : &it->second;
}

TransitionPriors::Lookup TransitionPriors::lookup(int prev_label, Weekday day, int slot) const {
    if (const Entry* entry = slot_entry(prev_label, day, slot)) {
        return {&entry->probs, TransitionLevel::Slot};
    }
    if (const Entry* entry = day_entry(prev_label, day)) {
        return {&entry->probs, TransitionLevel::Day};
    }
    if (const Entry* entry = overall_entry(prev_label)) {
        return {&entry->probs, TransitionLevel::Overall};
    }
    throw NoPriorError("no transition prior for label index " + std::to_string(prev_label));
}

std::int64_t DurationPriors::dow_key(int label, Weekday day) {
    return static_cast<std::int64_t>(label) * 7 + static_cast<int>(day);
}

DurationPriors::Lookup DurationPriors::lookup(int label, Weekday day) const {
    auto it = by_activity_dow_.find(dow_key(label, day));
    if (it != by_activity_dow_.end()) {
        return {it->second.minutes, DurationLevel::ActivityDow};
    }
    auto global_it = global_.find(label);
    if (global_it != global_.end()) {
        return {global_it->second.minutes, DurationLevel::Global};
    }
    throw NoPriorError("no duration prior for label index " + std::to_string(label));
}

namespace {

void normalize(TransitionPriors::Entry& entry) {
    entry.probs.assign(entry.counts.size(), 0.0);
    for (std::size_t i = 0; i < entry.counts.size(); ++i) {
        entry.probs[i] = static_cast<double>(entry.counts[i]) / static_cast<double>(entry.total);
    }
}

double median_of_sorted(const std::vector<double>& values) {
    std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

TransitionPriors estimate_transitions(const Ontology& ontology,
                                      const std::vector<ActivityInterval>& train) {
    if (train.size() < 2) {
        throw DegenerateInputError("transition estimation needs at least 2 intervals");
    }
    TransitionPriors priors;
    const std::size_t n_labels = static_cast<std::size_t>(ontology.size());
    auto credit = [&](auto& table, auto key, int successor) {
        auto& entry = table[key];
        if (entry.counts.empty()) entry.counts.assign(n_labels, 0);
        ++entry.counts[successor];
        ++entry.total;
    };
    for (std::size_t i = 0; i + 1 < train.size(); ++i) {
        const int prev = train[i].label;
        const ActivityInterval& succ = train[i + 1];
        const SlotKey key = SlotKey::of(succ.start);
        credit(priors.slot_level_, TransitionPriors::slot_key(prev, key.day, key.slot),
               succ.label);
        credit(priors.day_level_, TransitionPriors::day_key(prev, key.day), succ.label);
        credit(priors.overall_, prev, succ.label);
    }
    for (auto& [key, entry] : priors.slot_level_) normalize(entry);
    for (auto& [key, entry] : priors.day_level_) normalize(entry);
    for (auto& [key, entry] : priors.overall_) normalize(entry);
    return priors;
}

DurationPriors estimate_duration_medians(const Ontology& ontology,
                                         const std::vector<ActivityInterval>& train) {
    if (train.empty()) {
        throw DegenerateInputError("duration estimation needs a nonempty training split");
    }
    (void)ontology;
    std::map<std::int64_t, std::vector<double>> per_key;
    std::map<int, std::vector<double>> per_label;
    for (const auto& interval : train) {
        per_key[DurationPriors::dow_key(interval.label, interval.day_of_week)].push_back(
            interval.duration_minutes);
        per_label[interval.label].push_back(interval.duration_minutes);
    }
    DurationPriors priors;
    for (auto& [key, values] : per_key) {
        std::sort(values.begin(), values.end());
        priors.by_activity_dow_[key] = {median_of_sorted(values),
                                        static_cast<std::int64_t>(values.size())};
    }
    for (auto& [label, values] : per_label) {
        std::sort(values.begin(), values.end());
        priors.global_[label] = {median_of_sorted(values),
                                 static_cast<std::int64_t>(values.size())};
    }
    return priors;
}

struct PriorsCodec {
    static nlohmann::ordered_json encode(const PriorsBundle& bundle) {
        nlohmann::ordered_json doc;
        doc["ontology"] = bundle.ontology.names();

        auto encode_entry = [](const TransitionPriors::Entry& entry) {
            nlohmann::ordered_json out;
            out["counts"] = entry.counts;
            out["probs"] = entry.probs;
            out["total"] = entry.total;
            return out;
        };

        auto& slots = doc["slot_level"] = nlohmann::ordered_json::array();
        for (const auto& [key, entry] : bundle.transitions.slot_level_) {
            auto row = encode_entry(entry);
            std::int64_t slot = key % kSlotsPerDay;
            std::int64_t day = (key / kSlotsPerDay) % 7;
            row["prev"] = key / (kSlotsPerDay * 7);
            row["day"] = kWeekdayShort[day];
            row["slot"] = slot;
            slots.push_back(std::move(row));
        }
        auto& days = doc["day_level"] = nlohmann::ordered_json::array();
        for (const auto& [key, entry] : bundle.transitions.day_level_) {
            auto row = encode_entry(entry);
            row["prev"] = key / 7;
            row["day"] = kWeekdayShort[key % 7];
            days.push_back(std::move(row));
        }
        auto& overall = doc["overall"] = nlohmann::ordered_json::array();
        for (const auto& [prev, entry] : bundle.transitions.overall_) {
            auto row = encode_entry(entry);
            row["prev"] = prev;
            overall.push_back(std::move(row));
        }

        auto& by_dow = doc["duration_by_activity_dow"] = nlohmann::ordered_json::array();
        for (const auto& [key, median] : bundle.durations.by_activity_dow_) {
            by_dow.push_back({{"label", key / 7},
                              {"day", kWeekdayShort[key % 7]},
                              {"median_minutes", median.minutes},
                              {"n", median.n}});
        }
        auto& global = doc["duration_global"] = nlohmann::ordered_json::array();
        for (const auto& [label, median] : bundle.durations.global_) {
            global.push_back(
                {{"label", label}, {"median_minutes", median.minutes}, {"n", median.n}});
        }
        return doc;
    }

    static PriorsBundle decode(const nlohmann::json& doc) {
        PriorsBundle bundle;
        std::map<int, std::string> pairs;
        const auto& names = doc.at("ontology");
        for (std::size_t i = 0; i < names.size(); ++i) {
            pairs[static_cast<int>(i)] = names[i].get<std::string>();
        }
        bundle.ontology = Ontology::from_index_name_pairs(pairs);

        auto decode_entry = [](const nlohmann::json& row) {
            TransitionPriors::Entry entry;
            entry.counts = row.at("counts").get<std::vector<std::int64_t>>();
            entry.probs = row.at("probs").get<std::vector<double>>();
            entry.total = row.at("total").get<std::int64_t>();
            return entry;
        };
        auto day_of = [](const nlohmann::json& row) {
            auto day = weekday_from_string(row.at("day").get<std::string>());
            if (!day) throw DataError("priors file: unknown day name");
            return *day;
        };

        for (const auto& row : doc.at("slot_level")) {
            auto key = TransitionPriors::slot_key(row.at("prev").get<int>(), day_of(row),
                                                  row.at("slot").get<int>());
            bundle.transitions.slot_level_[key] = decode_entry(row);
        }
        for (const auto& row : doc.at("day_level")) {
            auto key = TransitionPriors::day_key(row.at("prev").get<int>(), day_of(row));
            bundle.transitions.day_level_[key] = decode_entry(row);
        }
        for (const auto& row : doc.at("overall")) {
            bundle.transitions.overall_[row.at("prev").get<int>()] = decode_entry(row);
        }
        for (const auto& row : doc.at("duration_by_activity_dow")) {
            auto key = DurationPriors::dow_key(row.at("label").get<int>(), day_of(row));
            bundle.durations.by_activity_dow_[key] = {row.at("median_minutes").get<double>(),
                                                      row.at("n").get<std::int64_t>()};
        }
        for (const auto& row : doc.at("duration_global")) {
            bundle.durations.global_[row.at("label").get<int>()] = {
                row.at("median_minutes").get<double>(), row.at("n").get<std::int64_t>()};
        }
        return bundle;
    }
};

std::string priors_to_json(const PriorsBundle& bundle) {
    return PriorsCodec::encode(bundle).dump(2) + "\n";
}

PriorsBundle priors_from_json(const std::string& text) {
    try {
        return PriorsCodec::decode(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("priors file: ") + e.what());
    }
}

}  // namespace routinecast
