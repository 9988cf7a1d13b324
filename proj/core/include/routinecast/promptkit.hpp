#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "routinecast/ontology.hpp"
#include "routinecast/retrieval.hpp"

namespace routinecast {

/// Marker line opening the query section; the mock backend locates the query
/// context by searching for the LAST occurrence of this line.
inline constexpr std::string_view kQueryMarker = "Now predict for the current situation.";
inline constexpr std::string_view kContextHeader = "Context:";
inline constexpr std::string_view kDayFieldPrefix = "  Day: ";
inline constexpr std::string_view kTimeFieldPrefix = "  Time: ";

/// Prompt wording lives here: a system section and a user-message skeleton
/// separated by a line containing only "---". Placeholders: {{ONTOLOGY}},
/// {{PERSONA}}, {{SPATIAL}}, {{DEMONSTRATIONS}}, {{QUERY}}, {{SCHEMA}}.
/// The content hash is recorded in every run report.
struct PromptTemplate {
    std::string system_text;
    std::string user_skeleton;
    std::string sha256;

    static PromptTemplate builtin();
    static PromptTemplate from_file(const std::filesystem::path& path);
    static PromptTemplate from_text(const std::string& text);
};

struct Persona {
    std::string text;
    std::string sha256;

    static Persona aruba_default();
    static Persona from_file(const std::filesystem::path& path);
    static Persona from_text(std::string text);
};

struct SpatialDescription {
    std::string text;
    std::string sha256;

    static SpatialDescription aruba_default();
    static SpatialDescription from_file(const std::filesystem::path& path);
    static SpatialDescription from_text(std::string text);
};

/// One retrieved exemplar: a context plus its ground-truth answer.
struct Demonstration {
    InstanceContext ctx;
    int target_label = 0;
    double target_duration = 0.0;
};

struct PromptBundle {
    std::string system_instruction;
    std::vector<std::string> ontology_lines;        // "INDEX : NAME"
    std::vector<std::string> demonstration_blocks;  // rendered exemplars
    std::string context_block;                      // rendered query context
    std::string output_schema_note;
    std::string user_text;  // fully rendered user message

    /// system + user in one string; the canonical text for mocks and hashing.
    std::string flat_text() const { return system_instruction + "\n\n" + user_text; }
};

/// Multi-line rendering of one context, shared by demonstrations and the
/// query section; byte-stable for identical inputs.
std::string render_context_block(const InstanceContext& ctx, const Ontology& ontology);

/// The exact JSON answer string used in demonstrations and produced by the
/// mock backend: {"next_activity": N, "duration_minutes": D}.
std::string render_prediction_json(int label, double duration_minutes);

/// Pure function of its inputs; equal inputs yield byte-equal prompts.
PromptBundle assemble_prompt(const std::vector<Demonstration>& demos,
                             const InstanceContext& query, const Persona& persona,
                             const SpatialDescription& spatial, const Ontology& ontology,
                             const PromptTemplate& prompt_template);

struct Prediction {
    int label = 0;
    double duration_minutes = 0.0;
    std::string raw_text;
    int parse_attempts = 1;
};

enum class ParseErrorKind { None, MalformedOutput, UnknownLabel, NonpositiveDuration };

const char* parse_error_name(ParseErrorKind kind);

struct ParseResult {
    std::optional<Prediction> prediction;
    ParseErrorKind error = ParseErrorKind::None;
    std::string detail;

    bool ok() const { return prediction.has_value(); }
};

/// Accepts a JSON object whose next_activity is an ontology index or a
/// canonical name, plus a positive numeric duration_minutes. Surrounding
/// whitespace is tolerated; anything else is rejected with a typed error.
ParseResult parse_prediction(std::string_view raw_text, const Ontology& ontology);

/// Query fields the mock backend recovers from a flat prompt.
struct QueryView {
    Weekday day = Weekday::Monday;
    int minutes_since_midnight = 0;
    std::string last_activity_name;
};

/// Throws MockContractError when the prompt does not follow the layout
/// produced by assemble_prompt.
QueryView parse_query_context(std::string_view flat_prompt);

}  // namespace routinecast
