#pragma once

#include <string>
#include <string_view>

namespace routinecast {

/// FIPS 180-4 SHA-256, hex-encoded. Used for cache keys and for content
/// hashes (prompt template, persona, spatial text, priors) in reports.
std::string sha256_hex(std::string_view data);

}  // namespace routinecast
