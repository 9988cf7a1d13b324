#include "routinecast/jsonio.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "routinecast/errors.hpp"

namespace routinecast {

void write_intervals_jsonl(std::ostream& out, const Ontology& ontology,
                           const std::vector<ActivityInterval>& intervals) {
    for (const auto& interval : intervals) {
        nlohmann::ordered_json row;
        row["label_index"] = interval.label;
        row["label_name"] = ontology.name(interval.label);
        row["start_iso8601"] = interval.start.iso8601();
        row["end_iso8601"] = interval.end.iso8601();
        row["duration_minutes"] = interval.duration_minutes;
        row["day_of_week"] = weekday_short(interval.day_of_week);
        out << row.dump() << "\n";
    }
}

IntervalDataset read_intervals_jsonl(std::istream& in) {
    std::map<int, std::string> labels;
    struct Row {
        int label;
        Timestamp start, end;
        double duration;
        Weekday day;
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json row;
        try {
            row = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError("interval file line " + std::to_string(line_no) + ": " + e.what());
        }
        auto fail = [&](const std::string& what) -> DataError {
            return DataError("interval file line " + std::to_string(line_no) + ": " + what);
        };
        if (!row.is_object()) throw fail("not a JSON object");
        try {
            int index = row.at("label_index").get<int>();
            std::string name = row.at("label_name").get<std::string>();
            auto [it, inserted] = labels.emplace(index, name);
            if (!inserted && it->second != name) {
                throw fail("label index " + std::to_string(index) + " maps to both '" +
                           it->second + "' and '" + name + "'");
            }
            auto start = Timestamp::parse(row.at("start_iso8601").get<std::string>());
            auto end = Timestamp::parse(row.at("end_iso8601").get<std::string>());
            if (!start || !end) throw fail("unparseable timestamp");
            double duration = row.at("duration_minutes").get<double>();
            auto day = weekday_from_string(row.at("day_of_week").get<std::string>());
            if (!day) throw fail("unknown day_of_week");
            if (*end <= *start) throw fail("end must be after start");
            if (std::fabs(duration - minutes_between(*start, *end)) > 1e-6) {
                throw fail("duration_minutes inconsistent with timestamps");
            }
            if (*day != start->weekday()) throw fail("day_of_week inconsistent with start");
            rows.push_back({index, *start, *end, duration, *day});
        } catch (const nlohmann::json::exception& e) {
            throw fail(e.what());
        }
    }
    if (in.bad()) throw IoError("stream read failure while reading intervals");

    IntervalDataset dataset;
    dataset.ontology = Ontology::from_index_name_pairs(labels);
    dataset.intervals.reserve(rows.size());
    for (const auto& row : rows) {
        ActivityInterval interval;
        interval.label = row.label;
        interval.start = row.start;
        interval.end = row.end;
        interval.duration_minutes = row.duration;
        interval.day_of_week = row.day;
        dataset.intervals.push_back(interval);
    }
    return dataset;
}

void write_intervals_file(const std::filesystem::path& path, const Ontology& ontology,
                          const std::vector<ActivityInterval>& intervals) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    write_intervals_jsonl(out, ontology, intervals);
    if (!out) throw IoError("write failure: " + path.string());
}

IntervalDataset read_intervals_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    return read_intervals_jsonl(in);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failure: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure: " + path.string());
    return buf.str();
}

}  // namespace routinecast
