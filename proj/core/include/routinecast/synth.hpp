#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace routinecast {

/// Generator for a CASAS-format smart-home event log with the Aruba corpus
/// shape: 39 sensors, 11 annotated activity classes, single resident, one
/// event per line, begin/end activity markers riding on sensor events.
/// Fully deterministic for a given config. Intended for offline testing and
/// for environments where the real dataset is not available.
struct SynthConfig {
    std::uint64_t seed = 7;
    int days = 219;
    int start_year = 2010;
    int start_month = 11;
    int start_day = 4;
    /// Sprinkle a handful of deterministic malformed lines and orphaned
    /// begin/end annotations so parser skip/exclusion paths run on full data.
    bool inject_defects = true;
};

std::string generate_synthetic_log(const SynthConfig& config);
void write_synthetic_log(std::ostream& out, const SynthConfig& config);

}  // namespace routinecast
