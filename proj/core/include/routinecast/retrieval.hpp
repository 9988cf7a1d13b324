#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "routinecast/clock.hpp"
#include "routinecast/ontology.hpp"

namespace routinecast {

struct HistoryEntry {
    int label = 0;
    double duration_minutes = 0.0;
};

/// Query/demonstration context: where we are in the week and day, and what
/// was done most recently (oldest first, at most the 3-activity window).
struct InstanceContext {
    Weekday day = Weekday::Monday;
    int minutes_since_midnight = 0;
    std::vector<HistoryEntry> recent_history;
    std::optional<int> target_label;       // training instances only
    std::optional<double> target_duration;  // training instances only
    bool from_train = false;
};

inline constexpr int kHistoryWindow = 3;

struct EmbeddingVector {
    std::vector<double> values;
    std::string backend_id;

    std::size_t dim() const { return values.size(); }
};

/// Single-line canonical serialization fed to text embedding backends;
/// frozen by a golden test.
std::string context_text(const InstanceContext& ctx, const Ontology& ontology);

/// Deterministic embedding: one-hot day (7) + [sin, cos] of time-of-day (2) +
/// recency-weighted label histogram, weights 1.0/0.6/0.36 newest-first
/// (|ontology|) + log1p of the last activity's duration (1), L2-normalized.
EmbeddingVector featurize_builtin(const InstanceContext& ctx, int ontology_size);

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual std::string id() const = 0;
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
};

class BuiltinEmbeddingBackend final : public EmbeddingBackend {
public:
    explicit BuiltinEmbeddingBackend(const Ontology& ontology) : ontology_(ontology) {}
    std::string id() const override { return "builtin"; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

    /// The builtin backend embeds structured contexts, not free text.
    EmbeddingVector embed_context(const InstanceContext& ctx) const;

private:
    Ontology ontology_;
};

struct HttpEmbeddingConfig {
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/embeddings";
    std::string api_key;
    std::string model = "all-MiniLM-L6-v2";
    int timeout_seconds = 60;
};

/// OpenAI-compatible embeddings client: POST {model, input:[texts]} ->
/// {data:[{embedding:[...]}]}.
class HttpEmbeddingBackend final : public EmbeddingBackend {
public:
    explicit HttpEmbeddingBackend(HttpEmbeddingConfig config) : config_(std::move(config)) {}
    std::string id() const override { return "http:" + config_.model; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

private:
    HttpEmbeddingConfig config_;
};

/// Exact cosine-similarity index; a linear scan at this corpus scale.
/// Immutable after build; queries are const and thread-safe.
class VectorIndex {
public:
    void add(EmbeddingVector vector, std::size_t instance_id);

    struct Hit {
        std::size_t instance_id;
        double cosine;
    };

    /// Top-k by cosine, ties broken by lower instance id.
    std::vector<Hit> top_k(const EmbeddingVector& query, std::size_t k) const;

    double cosine_between_ids(std::size_t id_a, std::size_t id_b) const;
    std::size_t size() const { return entries_.size(); }
    std::size_t query_count() const { return query_count_.load(); }

private:
    struct Entry {
        std::size_t instance_id;
        std::vector<double> values;
        double norm;
    };
    std::vector<Entry> entries_;
    std::unordered_map<std::size_t, std::size_t> position_by_id_;
    mutable std::atomic<std::size_t> query_count_{0};
};

struct DemonstrationSet {
    std::vector<std::size_t> instance_ids;  // selection order
    int shot_count = 0;
    bool truncated = false;  // fewer candidates than requested
};

/// Greedy maximal marginal relevance over the top-K cosine pool,
/// K = max(50, 5N). First pick is the pure cosine argmax; later picks
/// maximize lambda*cos(query, d) - (1-lambda)*max over selected cos(d, s).
DemonstrationSet mmr_select(const VectorIndex& index, const EmbeddingVector& query, int n,
                            double lambda = 0.5);

}  // namespace routinecast
