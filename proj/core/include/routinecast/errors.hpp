#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace routinecast {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DegenerateInputError : Error {
    using Error::Error;
};

/// Inconsistent or self-contradicting data files (label table mismatch, etc).
struct DataError : Error {
    using Error::Error;
};

/// A transition or duration lookup failed at every fallback level.
struct NoPriorError : Error {
    using Error::Error;
};

/// The mock backend could not locate the query context inside a prompt.
struct MockContractError : Error {
    using Error::Error;
};

enum class BackendErrorKind {
    Timeout,
    RateLimited,
    ServerError,
    AuthError,
    Protocol,
};

struct BackendError : Error {
    BackendError(BackendErrorKind kind, const std::string& what,
                 std::optional<int> retry_after_ms = std::nullopt)
        : Error(what), kind(kind), retry_after_ms(retry_after_ms) {}

    BackendErrorKind kind;
    std::optional<int> retry_after_ms;
};

struct EmbeddingError : Error {
    EmbeddingError(const std::string& what, bool retryable) : Error(what), retryable(retryable) {}
    bool retryable;
};

}  // namespace routinecast
