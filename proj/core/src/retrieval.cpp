#include "routinecast/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "routinecast/errors.hpp"

namespace routinecast {

namespace {

std::string format_minutes(double minutes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", minutes);
    return buf;
}

}  // namespace

std::string context_text(const InstanceContext& ctx, const Ontology& ontology) {
    std::string text = "day=";
    text += weekday_full(ctx.day);
    char clock[8];
    std::snprintf(clock, sizeof(clock), "%02d:%02d", ctx.minutes_since_midnight / 60,
                  ctx.minutes_since_midnight % 60);
    text += " time=";
    text += clock;
    text += " recent=[";
    for (std::size_t i = 0; i < ctx.recent_history.size(); ++i) {
        if (i) text += ", ";
        text += ontology.name(ctx.recent_history[i].label);
        text += ":";
        text += format_minutes(ctx.recent_history[i].duration_minutes);
        text += "m";
    }
    text += "]";
    return text;
}

EmbeddingVector featurize_builtin(const InstanceContext& ctx, int ontology_size) {
    constexpr double kRecencyWeights[kHistoryWindow] = {1.0, 0.6, 0.36};
    EmbeddingVector vector;
    vector.backend_id = "builtin";
    vector.values.assign(7 + 2 + static_cast<std::size_t>(ontology_size) + 1, 0.0);

    vector.values[static_cast<int>(ctx.day)] = 1.0;
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(ctx.minutes_since_midnight) / 1440.0;
    vector.values[7] = std::sin(angle);
    vector.values[8] = std::cos(angle);

    const std::size_t n = ctx.recent_history.size();
    for (std::size_t i = 0; i < n; ++i) {
        // recent_history is oldest-first; weight 1.0 goes to the newest.
        const std::size_t age = n - 1 - i;
        if (age >= kHistoryWindow) continue;
        vector.values[9 + static_cast<std::size_t>(ctx.recent_history[i].label)] +=
            kRecencyWeights[age];
    }
    if (n > 0) {
        vector.values[9 + static_cast<std::size_t>(ontology_size)] =
            std::log1p(ctx.recent_history.back().duration_minutes);
    }

    double norm_sq = 0.0;
    for (double v : vector.values) norm_sq += v * v;
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& v : vector.values) v *= inv;
    }
    return vector;
}

std::vector<EmbeddingVector> BuiltinEmbeddingBackend::embed(
    const std::vector<std::string>& texts) {
    // The builtin featurizer is structural; free text has no defined mapping.
    (void)texts;
    throw EmbeddingError("builtin embedding backend embeds contexts, not raw text", false);
}

EmbeddingVector BuiltinEmbeddingBackend::embed_context(const InstanceContext& ctx) const {
    return featurize_builtin(ctx, ontology_.size());
}

std::vector<EmbeddingVector> HttpEmbeddingBackend::embed(const std::vector<std::string>& texts) {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.api_key);
    }
    nlohmann::json body;
    body["model"] = config_.model;
    body["input"] = texts;
    auto res = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!res) {
        throw EmbeddingError("embedding request failed: " + httplib::to_string(res.error()),
                             true);
    }
    if (res->status == 401 || res->status == 403) {
        throw EmbeddingError("embedding auth failure (status " + std::to_string(res->status) + ")",
                             false);
    }
    if (res->status != 200) {
        throw EmbeddingError("embedding backend status " + std::to_string(res->status),
                             res->status >= 500 || res->status == 429);
    }
    try {
        auto doc = nlohmann::json::parse(res->body);
        std::vector<EmbeddingVector> vectors;
        for (const auto& item : doc.at("data")) {
            EmbeddingVector vector;
            vector.backend_id = id();
            vector.values = item.at("embedding").get<std::vector<double>>();
            vectors.push_back(std::move(vector));
        }
        if (vectors.size() != texts.size()) {
            throw EmbeddingError("embedding count mismatch", true);
        }
        return vectors;
    } catch (const nlohmann::json::exception& e) {
        throw EmbeddingError(std::string("embedding response malformed: ") + e.what(), true);
    }
}

namespace {

double vector_norm(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return std::sqrt(sum);
}

double cosine(const std::vector<double>& a, double norm_a, const std::vector<double>& b,
              double norm_b) {
    if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot / (norm_a * norm_b);
}

}  // namespace

void VectorIndex::add(EmbeddingVector vector, std::size_t instance_id) {
    if (!entries_.empty() && entries_.front().values.size() != vector.values.size()) {
        throw DataError("embedding dimension mismatch inside one index");
    }
    if (position_by_id_.count(instance_id)) {
        throw DataError("duplicate instance id in index: " + std::to_string(instance_id));
    }
    double norm = vector_norm(vector.values);
    position_by_id_.emplace(instance_id, entries_.size());
    entries_.push_back({instance_id, std::move(vector.values), norm});
}

std::vector<VectorIndex::Hit> VectorIndex::top_k(const EmbeddingVector& query,
                                                 std::size_t k) const {
    ++query_count_;
    const double query_norm = vector_norm(query.values);
    std::vector<Hit> hits;
    hits.reserve(entries_.size());
    for (const auto& entry : entries_) {
        hits.push_back({entry.instance_id,
                        cosine(query.values, query_norm, entry.values, entry.norm)});
    }
    auto better = [](const Hit& a, const Hit& b) {
        if (a.cosine != b.cosine) return a.cosine > b.cosine;
        return a.instance_id < b.instance_id;
    };
    if (k < hits.size()) {
        std::partial_sort(hits.begin(), hits.begin() + k, hits.end(), better);
        hits.resize(k);
    } else {
        std::sort(hits.begin(), hits.end(), better);
    }
    return hits;
}

double VectorIndex::cosine_between_ids(std::size_t id_a, std::size_t id_b) const {
    const auto& a = entries_[position_by_id_.at(id_a)];
    const auto& b = entries_[position_by_id_.at(id_b)];
    return cosine(a.values, a.norm, b.values, b.norm);
}

DemonstrationSet mmr_select(const VectorIndex& index, const EmbeddingVector& query, int n,
                            double lambda) {
    if (n < 0) throw ConfigError("shot count must be nonnegative");
    if (lambda < 0.0 || lambda > 1.0) throw ConfigError("mmr lambda must lie in [0, 1]");

    DemonstrationSet selection;
    selection.shot_count = n;
    if (n == 0 || index.size() == 0) {
        selection.truncated = index.size() == 0 && n > 0;
        return selection;
    }

    const std::size_t pool_size = std::max<std::size_t>(50, static_cast<std::size_t>(5) * n);
    auto pool = index.top_k(query, pool_size);

    std::vector<bool> picked(pool.size(), false);
    std::vector<std::size_t> chosen;  // positions into pool
    chosen.reserve(std::min<std::size_t>(n, pool.size()));

    // First pick: pure query similarity (pool is already cosine-sorted).
    picked[0] = true;
    chosen.push_back(0);

    while (chosen.size() < static_cast<std::size_t>(n) && chosen.size() < pool.size()) {
        double best_score = -std::numeric_limits<double>::infinity();
        std::size_t best_pos = pool.size();
        for (std::size_t cand = 0; cand < pool.size(); ++cand) {
            if (picked[cand]) continue;
            double max_sim = -std::numeric_limits<double>::infinity();
            for (std::size_t sel : chosen) {
                max_sim = std::max(max_sim, index.cosine_between_ids(pool[cand].instance_id,
                                                                     pool[sel].instance_id));
            }
            const double score = lambda * pool[cand].cosine - (1.0 - lambda) * max_sim;
            const bool wins =
                score > best_score ||
                (score == best_score && best_pos < pool.size() &&
                 pool[cand].instance_id < pool[best_pos].instance_id);
            if (wins) {
                best_score = score;
                best_pos = cand;
            }
        }
        if (best_pos == pool.size()) break;
        picked[best_pos] = true;
        chosen.push_back(best_pos);
    }

    for (std::size_t pos : chosen) selection.instance_ids.push_back(pool[pos].instance_id);
    selection.truncated = selection.instance_ids.size() < static_cast<std::size_t>(n);
    return selection;
}

}  // namespace routinecast
