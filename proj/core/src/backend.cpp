#include "routinecast/backend.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "routinecast/baseline.hpp"
#include "routinecast/errors.hpp"
#include "routinecast/jsonio.hpp"
#include "routinecast/promptkit.hpp"
#include "routinecast/sha256.hpp"

namespace routinecast {

std::string cache_key_digest(const GenerationRequest& request) {
    char temperature[32];
    std::snprintf(temperature, sizeof(temperature), "%.6f", request.temperature);
    std::string material = request.model_id;
    material += '\x1f';
    material += temperature;
    material += '\x1f';
    material += request.prompt_text();
    material += '\x1f';
    material += std::to_string(request.attempt_index);
    return sha256_hex(material);
}

MockBackend::MockBackend(Ontology ontology, TransitionPriors transitions,
                         DurationPriors durations)
    : ontology_(std::move(ontology)),
      transitions_(std::move(transitions)),
      durations_(std::move(durations)) {}

GenerationResponse MockBackend::generate(const GenerationRequest& request) {
    const std::size_t call = ++calls_;
    GenerationResponse response;
    response.backend_id = id();
    if (malformed_every_ > 0 && call % static_cast<std::size_t>(malformed_every_) == 0) {
        response.raw_text = "I think they will relax next.";
        return response;
    }
    QueryView view = parse_query_context(request.prompt_text());
    auto prev = ontology_.find(view.last_activity_name);
    if (!prev) {
        throw MockContractError("query context names an activity outside the ontology: " +
                                view.last_activity_name);
    }
    const int slot = view.minutes_since_midnight / kSlotMinutes;
    auto prediction = predict_next_argmax(transitions_, durations_, *prev, view.day, slot);
    response.raw_text = render_prediction_json(prediction.label, prediction.duration_minutes);
    return response;
}

void ScriptedBackend::script(const GenerationRequest& request, std::string reply) {
    replies_[cache_key_digest(request)] = std::move(reply);
}

GenerationResponse ScriptedBackend::generate(const GenerationRequest& request) {
    auto it = replies_.find(cache_key_digest(request));
    if (it == replies_.end()) {
        throw BackendError(BackendErrorKind::Protocol, "scripted backend has no reply for prompt");
    }
    GenerationResponse response;
    response.raw_text = it->second;
    response.backend_id = id();
    return response;
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {}

GenerationResponse HttpBackend::attempt_once(const GenerationRequest& request) {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);

    httplib::Headers headers;
    if (!config_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.api_key);
    }

    nlohmann::json body;
    body["model"] = request.model_id;
    body["messages"] = nlohmann::json::array({
        nlohmann::json{{"role", "system"}, {"content", request.system_text}},
        nlohmann::json{{"role", "user"}, {"content", request.user_text}},
    });
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_output_tokens;
    if (request.json_mode) {
        body["response_format"] = nlohmann::json{{"type", "json_object"}};
    }

    const auto started = std::chrono::steady_clock::now();
    ++requests_;
    auto res = client.Post(config_.path, headers, body.dump(), "application/json");
    const double latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();

    if (!res) {
        auto err = res.error();
        auto kind = (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                     err == httplib::Error::Write)
                        ? BackendErrorKind::Timeout
                        : BackendErrorKind::ServerError;
        throw BackendError(kind, "chat request failed: " + httplib::to_string(err));
    }
    if (res->status == 401 || res->status == 403) {
        throw BackendError(BackendErrorKind::AuthError,
                           "authentication rejected (status " + std::to_string(res->status) + ")");
    }
    if (res->status == 429) {
        std::optional<int> retry_after_ms;
        if (res->has_header("Retry-After")) {
            retry_after_ms = std::stoi(res->get_header_value("Retry-After")) * 1000;
        }
        throw BackendError(BackendErrorKind::RateLimited, "rate limited", retry_after_ms);
    }
    if (res->status >= 500) {
        throw BackendError(BackendErrorKind::ServerError,
                           "server error (status " + std::to_string(res->status) + ")");
    }
    if (res->status != 200) {
        throw BackendError(BackendErrorKind::Protocol,
                           "unexpected status " + std::to_string(res->status));
    }
    try {
        auto doc = nlohmann::json::parse(res->body);
        GenerationResponse response;
        response.raw_text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
        response.latency_ms = latency_ms;
        response.backend_id = id();
        return response;
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(BackendErrorKind::Protocol,
                           std::string("malformed completion payload: ") + e.what());
    }
}

GenerationResponse HttpBackend::generate(const GenerationRequest& request) {
    int backoff_ms = config_.backoff_base_ms;
    for (int attempt = 1;; ++attempt) {
        try {
            return attempt_once(request);
        } catch (const BackendError& error) {
            const bool transient = error.kind == BackendErrorKind::RateLimited ||
                                   error.kind == BackendErrorKind::Timeout ||
                                   error.kind == BackendErrorKind::ServerError;
            if (!transient || attempt >= config_.max_attempts) throw;
            int sleep_ms = error.retry_after_ms.value_or(backoff_ms);
            std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
            backoff_ms *= 2;
        }
    }
}

ConcurrencyLimiter::ConcurrencyLimiter(int limit) : limit_(limit) {
    if (limit < 1) throw ConfigError("concurrency limit must be at least 1");
}

void ConcurrencyLimiter::acquire() {
    std::unique_lock lock(mutex_);
    available_.wait(lock, [&] { return in_flight_ < limit_; });
    ++in_flight_;
}

void ConcurrencyLimiter::release() {
    {
        std::lock_guard lock(mutex_);
        --in_flight_;
    }
    available_.notify_one();
}

GenerationResponse LimitedBackend::generate(const GenerationRequest& request) {
    limiter_->acquire();
    struct Release {
        ConcurrencyLimiter* limiter;
        ~Release() { limiter->release(); }
    } release{limiter_.get()};
    return inner_->generate(request);
}

CachingBackend::CachingBackend(std::shared_ptr<TextBackend> inner, std::filesystem::path cache_dir)
    : inner_(std::move(inner)), cache_dir_(std::move(cache_dir)) {
    std::filesystem::create_directories(cache_dir_);
}

std::filesystem::path CachingBackend::entry_path(const std::string& digest) const {
    return cache_dir_ / (digest + ".json");
}

GenerationResponse CachingBackend::generate(const GenerationRequest& request) {
    const std::string digest = cache_key_digest(request);
    const auto path = entry_path(digest);
    if (std::filesystem::exists(path)) {
        try {
            auto doc = nlohmann::json::parse(read_text_file(path));
            GenerationResponse response;
            response.raw_text = doc.at("raw_text").get<std::string>();
            response.backend_id = doc.at("backend_id").get<std::string>();
            response.cache_hit = true;
            ++hits_;
            return response;
        } catch (const std::exception&) {
            // Corrupt entry: fall through and regenerate it.
        }
    }
    auto response = inner_->generate(request);
    ++misses_;
    nlohmann::ordered_json doc;
    doc["raw_text"] = response.raw_text;
    doc["backend_id"] = response.backend_id;
    doc["digest"] = digest;
    // Unique temp name per write so concurrent misses of one key cannot
    // interleave; the final rename is atomic within the cache directory.
    static std::atomic<std::uint64_t> write_counter{0};
    auto tmp = path;
    tmp += ".tmp" + std::to_string(write_counter.fetch_add(1));
    write_text_file(tmp, doc.dump(2) + "\n");
    std::filesystem::rename(tmp, path);
    return response;
}

}  // namespace routinecast
