#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "routinecast/ontology.hpp"
#include "routinecast/priors.hpp"

namespace routinecast {

struct GenerationRequest {
    std::string system_text;
    std::string user_text;
    std::string model_id;
    double temperature = 0.0;
    int max_output_tokens = 256;
    bool json_mode = true;
    /// Distinguishes regenerations after malformed output in cache keys.
    int attempt_index = 0;

    /// Canonical single-string prompt, used for hashing and by mocks.
    std::string prompt_text() const { return system_text + "\n\n" + user_text; }
};

/// sha256(model_id, temperature, prompt_text, attempt_index) with field
/// separators; stable across processes.
std::string cache_key_digest(const GenerationRequest& request);

struct GenerationResponse {
    std::string raw_text;
    double latency_ms = 0.0;
    bool cache_hit = false;
    std::string backend_id;
};

class TextBackend {
public:
    virtual ~TextBackend() = default;
    virtual std::string id() const = 0;
    /// Returns a response or throws BackendError with a typed kind.
    virtual GenerationResponse generate(const GenerationRequest& request) = 0;
};

/// Offline backend for end-to-end tests: recovers the query context from the
/// prompt (promptkit delimiter contract), runs the time-aware Markov baseline
/// with argmax decoding, and answers with valid prediction JSON.
class MockBackend final : public TextBackend {
public:
    MockBackend(Ontology ontology, TransitionPriors transitions, DurationPriors durations);

    std::string id() const override { return "mock"; }
    GenerationResponse generate(const GenerationRequest& request) override;

    /// When n > 0, every n-th call returns unparseable text instead of JSON
    /// (exercises the regeneration path). Calls are counted either way.
    void set_malformed_every(int n) { malformed_every_ = n; }

    std::size_t call_count() const { return calls_.load(); }

private:
    Ontology ontology_;
    TransitionPriors transitions_;
    DurationPriors durations_;
    int malformed_every_ = 0;
    std::atomic<std::size_t> calls_{0};
};

/// Unit-test backend answering from a prompt-digest -> reply map.
class ScriptedBackend final : public TextBackend {
public:
    std::string id() const override { return "scripted"; }

    void script(const GenerationRequest& request, std::string reply);
    GenerationResponse generate(const GenerationRequest& request) override;

private:
    std::map<std::string, std::string> replies_;
};

struct HttpBackendConfig {
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string api_key;
    int timeout_seconds = 120;
    int max_attempts = 5;       // transient-error retries (backoff-bounded)
    int backoff_base_ms = 500;  // doubled per attempt; tests shrink it
};

/// OpenAI-compatible chat-completions client:
/// POST {model, messages, temperature, response_format:{type:"json_object"}}.
/// Transient failures (429/5xx/timeouts) retry with exponential backoff up to
/// max_attempts, then surface as typed BackendError.
class HttpBackend final : public TextBackend {
public:
    explicit HttpBackend(HttpBackendConfig config);

    std::string id() const override { return "http"; }
    GenerationResponse generate(const GenerationRequest& request) override;

    std::size_t request_count() const { return requests_.load(); }

private:
    GenerationResponse attempt_once(const GenerationRequest& request);

    HttpBackendConfig config_;
    std::atomic<std::size_t> requests_{0};
};

/// Caps in-flight generate() calls across threads.
class ConcurrencyLimiter {
public:
    explicit ConcurrencyLimiter(int limit);

    void acquire();
    void release();

private:
    std::mutex mutex_;
    std::condition_variable available_;
    int limit_;
    int in_flight_ = 0;
};

/// Decorator applying a ConcurrencyLimiter around an inner backend.
class LimitedBackend final : public TextBackend {
public:
    LimitedBackend(std::shared_ptr<TextBackend> inner, std::shared_ptr<ConcurrencyLimiter> limiter)
        : inner_(std::move(inner)), limiter_(std::move(limiter)) {}

    std::string id() const override { return inner_->id(); }
    GenerationResponse generate(const GenerationRequest& request) override;

private:
    std::shared_ptr<TextBackend> inner_;
    std::shared_ptr<ConcurrencyLimiter> limiter_;
};

/// Read-through persistent cache, one JSON file per content-addressed key;
/// writes are write-temp-then-rename so partial runs stay resumable.
class CachingBackend final : public TextBackend {
public:
    CachingBackend(std::shared_ptr<TextBackend> inner, std::filesystem::path cache_dir);

    std::string id() const override { return inner_->id(); }
    GenerationResponse generate(const GenerationRequest& request) override;

    std::size_t hits() const { return hits_.load(); }
    std::size_t misses() const { return misses_.load(); }

private:
    std::filesystem::path entry_path(const std::string& digest) const;

    std::shared_ptr<TextBackend> inner_;
    std::filesystem::path cache_dir_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> misses_{0};
};

}  // namespace routinecast
