#include "routinecast/promptkit.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "routinecast/errors.hpp"
#include "routinecast/jsonio.hpp"
#include "routinecast/sha256.hpp"

namespace routinecast {

namespace {

constexpr std::string_view kBuiltinSystem =
    "You are an assistant that predicts the next daily activity of a smart-home resident. "
    "Use the allowed activity list, the resident's recent activities, and the current time "
    "context to choose the single most likely next activity and how long it will last. "
    "Respond with JSON only.";

constexpr std::string_view kBuiltinUserSkeleton =
    "Allowed activities (INDEX : NAME):\n"
    "{{ONTOLOGY}}\n"
    "\n"
    "Persona: {{PERSONA}}\n"
    "\n"
    "Environment: {{SPATIAL}}\n"
    "\n"
    "{{DEMONSTRATIONS}}{{QUERY}}\n"
    "{{SCHEMA}}";

constexpr std::string_view kSchemaNote =
    "Respond with a single JSON object with exactly these fields:\n"
    "{\"next_activity\": <index or name of the chosen activity>, "
    "\"duration_minutes\": <positive number>}";

constexpr std::string_view kPersonaAruba =
    "A single adult resident living alone in a one-story smart home. The resident keeps a "
    "fairly regular routine: sleeps at night with occasional brief bathroom visits, prepares "
    "and eats meals at home, relaxes in the living room, works at a desk some days, does "
    "housekeeping now and then, uses a Resperate breathing device in the evening, and leaves "
    "the house for errands or outings most days.";

constexpr std::string_view kSpatialAruba =
    "One-story home. The master bedroom with its bathroom is at one end, connected by a "
    "hallway to the kitchen and the adjoining dining area. The living room sits next to the "
    "kitchen and holds the reading chair. A second bedroom serves as an office. The front "
    "door opens from the living room and the back door and garage door open from the "
    "kitchen area. This description is context only and imposes no hard constraints.";

std::string replace_all(std::string text, std::string_view key, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = text.find(key, pos)) != std::string::npos) {
        text.replace(pos, key.size(), value);
        pos += value.size();
    }
    return text;
}

std::string format_minutes(double minutes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", minutes);
    return buf;
}

std::string hhmm_of_minutes(int minutes) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", minutes / 60, minutes % 60);
    return buf;
}

}  // namespace

PromptTemplate PromptTemplate::from_text(const std::string& text) {
    auto separator = text.find("\n---\n");
    if (separator == std::string::npos) {
        throw ConfigError("prompt template needs a '---' line between system and user parts");
    }
    PromptTemplate result;
    result.system_text = text.substr(0, separator);
    result.user_skeleton = text.substr(separator + 5);
    result.sha256 = sha256_hex(text);
    return result;
}

PromptTemplate PromptTemplate::builtin() {
    std::string text = std::string(kBuiltinSystem) + "\n---\n" + std::string(kBuiltinUserSkeleton);
    return from_text(text);
}

PromptTemplate PromptTemplate::from_file(const std::filesystem::path& path) {
    return from_text(read_text_file(path));
}

Persona Persona::from_text(std::string text) {
    if (text.empty()) throw ConfigError("persona text must be non-empty");
    Persona persona;
    persona.sha256 = sha256_hex(text);
    persona.text = std::move(text);
    return persona;
}

Persona Persona::aruba_default() { return from_text(std::string(kPersonaAruba)); }

Persona Persona::from_file(const std::filesystem::path& path) {
    return from_text(read_text_file(path));
}

SpatialDescription SpatialDescription::from_text(std::string text) {
    if (text.empty()) throw ConfigError("spatial description must be non-empty");
    SpatialDescription spatial;
    spatial.sha256 = sha256_hex(text);
    spatial.text = std::move(text);
    return spatial;
}

SpatialDescription SpatialDescription::aruba_default() {
    return from_text(std::string(kSpatialAruba));
}

SpatialDescription SpatialDescription::from_file(const std::filesystem::path& path) {
    return from_text(read_text_file(path));
}

std::string render_context_block(const InstanceContext& ctx, const Ontology& ontology) {
    if (ctx.recent_history.size() > kHistoryWindow) {
        throw ConfigError("context history exceeds the 3-activity window");
    }
    std::string block{kContextHeader};
    block += "\n";
    block += kDayFieldPrefix;
    block += weekday_full(ctx.day);
    block += "\n";
    block += kTimeFieldPrefix;
    block += hhmm_of_minutes(ctx.minutes_since_midnight);
    block += "\n  Recent activities (oldest first):\n";
    if (ctx.recent_history.empty()) {
        block += "    (none)\n";
    }
    for (std::size_t i = 0; i < ctx.recent_history.size(); ++i) {
        block += "    " + std::to_string(i + 1) + ". " +
                 ontology.name(ctx.recent_history[i].label) + " (" +
                 format_minutes(ctx.recent_history[i].duration_minutes) + " minutes)\n";
    }
    return block;
}

std::string render_prediction_json(int label, double duration_minutes) {
    return "{\"next_activity\": " + std::to_string(label) + ", \"duration_minutes\": " +
           nlohmann::json(duration_minutes).dump() + "}";
}

PromptBundle assemble_prompt(const std::vector<Demonstration>& demos,
                             const InstanceContext& query, const Persona& persona,
                             const SpatialDescription& spatial, const Ontology& ontology,
                             const PromptTemplate& prompt_template) {
    if (ontology.size() == 0) throw ConfigError("cannot assemble a prompt over an empty ontology");

    PromptBundle bundle;
    bundle.system_instruction = prompt_template.system_text;
    bundle.output_schema_note = std::string(kSchemaNote);

    std::string ontology_text;
    for (int i = 0; i < ontology.size(); ++i) {
        std::string line = std::to_string(i) + " : " + ontology.name(i);
        bundle.ontology_lines.push_back(line);
        if (i) ontology_text += "\n";
        ontology_text += line;
    }

    std::string demos_text;
    if (!demos.empty()) {
        demos_text = "Examples:\n";
        for (std::size_t i = 0; i < demos.size(); ++i) {
            std::string block = "Example " + std::to_string(i + 1) + ":\n" +
                                render_context_block(demos[i].ctx, ontology) + "Answer: " +
                                render_prediction_json(demos[i].target_label,
                                                       demos[i].target_duration) +
                                "\n";
            demos_text += "\n" + block;
            bundle.demonstration_blocks.push_back(std::move(block));
        }
        demos_text += "\n";
    }

    bundle.context_block = render_context_block(query, ontology);
    std::string query_text = std::string(kQueryMarker) + "\n" + bundle.context_block;

    std::string user = prompt_template.user_skeleton;
    user = replace_all(std::move(user), "{{ONTOLOGY}}", ontology_text);
    user = replace_all(std::move(user), "{{PERSONA}}", persona.text);
    user = replace_all(std::move(user), "{{SPATIAL}}", spatial.text);
    user = replace_all(std::move(user), "{{DEMONSTRATIONS}}", demos_text);
    user = replace_all(std::move(user), "{{QUERY}}", query_text);
    user = replace_all(std::move(user), "{{SCHEMA}}", kSchemaNote);
    bundle.user_text = std::move(user);
    return bundle;
}

const char* parse_error_name(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::None: return "None";
        case ParseErrorKind::MalformedOutput: return "MalformedOutput";
        case ParseErrorKind::UnknownLabel: return "UnknownLabel";
        case ParseErrorKind::NonpositiveDuration: return "NonpositiveDuration";
    }
    return "?";
}

ParseResult parse_prediction(std::string_view raw_text, const Ontology& ontology) {
    auto malformed = [&](std::string detail) {
        ParseResult result;
        result.error = ParseErrorKind::MalformedOutput;
        result.detail = std::move(detail);
        return result;
    };

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(raw_text);  // leading/trailing whitespace is fine
    } catch (const nlohmann::json::exception& e) {
        return malformed(e.what());
    }
    if (!doc.is_object()) return malformed("output is not a JSON object");
    if (!doc.contains("next_activity") || !doc.contains("duration_minutes")) {
        return malformed("missing next_activity or duration_minutes");
    }

    const auto& activity = doc["next_activity"];
    int label = -1;
    if (activity.is_number_integer()) {
        label = activity.get<int>();
    } else if (activity.is_number_float()) {
        double value = activity.get<double>();
        if (value != std::floor(value)) return malformed("next_activity is not integral");
        label = static_cast<int>(value);
    } else if (activity.is_string()) {
        auto found = ontology.find(canonical_label(activity.get<std::string>()));
        if (!found) {
            ParseResult result;
            result.error = ParseErrorKind::UnknownLabel;
            result.detail = "unknown activity name: " + activity.get<std::string>();
            return result;
        }
        label = *found;
    } else {
        return malformed("next_activity has an unsupported type");
    }
    if (!ontology.contains(label)) {
        ParseResult result;
        result.error = ParseErrorKind::UnknownLabel;
        result.detail = "activity index out of range: " + std::to_string(label);
        return result;
    }

    const auto& duration = doc["duration_minutes"];
    if (!duration.is_number()) return malformed("duration_minutes is not a number");
    double minutes = duration.get<double>();
    if (!std::isfinite(minutes) || minutes <= 0.0) {
        ParseResult result;
        result.error = ParseErrorKind::NonpositiveDuration;
        result.detail = "duration_minutes must be finite and positive";
        return result;
    }

    ParseResult result;
    Prediction prediction;
    prediction.label = label;
    prediction.duration_minutes = minutes;
    prediction.raw_text = std::string(raw_text);
    result.prediction = std::move(prediction);
    return result;
}

QueryView parse_query_context(std::string_view flat_prompt) {
    auto marker_pos = flat_prompt.rfind(kQueryMarker);
    if (marker_pos == std::string_view::npos) {
        throw MockContractError("prompt lacks the query marker line");
    }
    std::string_view tail = flat_prompt.substr(marker_pos);

    auto line_value = [&](std::string_view prefix) -> std::string_view {
        auto pos = tail.find(prefix);
        if (pos == std::string_view::npos) {
            throw MockContractError("query context lacks field " + std::string(prefix));
        }
        auto value_start = pos + prefix.size();
        auto value_end = tail.find('\n', value_start);
        if (value_end == std::string_view::npos) value_end = tail.size();
        return tail.substr(value_start, value_end - value_start);
    };

    QueryView view;
    auto day = weekday_from_string(line_value(kDayFieldPrefix));
    if (!day) throw MockContractError("query context day is unparseable");
    view.day = *day;

    auto clock = line_value(kTimeFieldPrefix);
    if (clock.size() != 5 || clock[2] != ':') {
        throw MockContractError("query context time is unparseable");
    }
    int hour = (clock[0] - '0') * 10 + (clock[1] - '0');
    int minute = (clock[3] - '0') * 10 + (clock[4] - '0');
    if (hour < 0 || hour > 23 || minute < 0 || minute > 59) {
        throw MockContractError("query context time is out of range");
    }
    view.minutes_since_midnight = hour * 60 + minute;

    // Last numbered history line: "    k. name (D minutes)".
    std::string_view last_name;
    std::size_t scan = 0;
    while (true) {
        auto pos = tail.find("\n    ", scan);
        if (pos == std::string_view::npos) break;
        auto line_start = pos + 5;
        auto line_end = tail.find('\n', line_start);
        if (line_end == std::string_view::npos) line_end = tail.size();
        std::string_view line = tail.substr(line_start, line_end - line_start);
        scan = line_end;
        auto dot = line.find(". ");
        auto paren = line.rfind(" (");
        if (dot == std::string_view::npos || paren == std::string_view::npos || paren <= dot) {
            continue;
        }
        last_name = line.substr(dot + 2, paren - dot - 2);
    }
    if (last_name.empty()) {
        throw MockContractError("query context lacks a recent-activity line");
    }
    view.last_activity_name = std::string(last_name);
    return view;
}

}  // namespace routinecast
