#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "routinecast/ontology.hpp"

namespace routinecast {

/// One interval per line:
/// {"label_index":..,"label_name":"..","start_iso8601":"..","end_iso8601":"..",
///  "duration_minutes":..,"day_of_week":"Mon"}
void write_intervals_jsonl(std::ostream& out, const Ontology& ontology,
                           const std::vector<ActivityInterval>& intervals);

struct IntervalDataset {
    Ontology ontology;
    std::vector<ActivityInterval> intervals;
};

/// Reads a JSONL interval file and rebuilds the (index, name) label table it
/// was written with. Throws DataError on inconsistent rows.
IntervalDataset read_intervals_jsonl(std::istream& in);

void write_intervals_file(const std::filesystem::path& path, const Ontology& ontology,
                          const std::vector<ActivityInterval>& intervals);
IntervalDataset read_intervals_file(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace routinecast
