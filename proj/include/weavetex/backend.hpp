#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace weavetex {

enum class RequestKind { Eval, Exec, Plot };

std::string_view request_kind_name(RequestKind kind) noexcept;

struct BackendRequest {
    std::uint64_t id = 0;
    RequestKind kind = RequestKind::Eval;
    std::string code;
    std::optional<std::string> format;
    std::optional<std::string> save_path;

    bool operator==(const BackendRequest&) const = default;
};

struct BackendResponse {
    std::uint64_t id = 0;
    bool ok = false;
    std::optional<std::string> latex;
    std::optional<std::vector<std::string>> files;
    std::optional<std::string> error;

    bool operator==(const BackendResponse&) const = default;
};

/// One interpreter session. Requests are answered strictly in order and all
/// of them share the session's state.
class Backend {
public:
    virtual ~Backend() = default;

    /// Identifier reported by the interpreter (handshake id for subprocesses).
    virtual std::string id() const = 0;

    virtual BackendResponse send(const BackendRequest& request) = 0;

    /// Request ids are strictly increasing over the lifetime of the session.
    std::uint64_t next_request_id() noexcept { return ++last_id_; }

private:
    std::uint64_t last_id_ = 0;
};

// Wire protocol: one compact JSON object per line, in both directions.

std::string encode_request(const BackendRequest& request);
BackendRequest decode_request(std::string_view line);

std::string encode_response(const BackendResponse& response);
BackendResponse decode_response(std::string_view line);

std::string encode_hello(std::string_view backend_id);
/// Returns the backend id announced by a handshake line.
std::string decode_hello(std::string_view line);

/// Throws ProtocolViolation if `response` cannot be the answer to `request`.
void check_response(const BackendRequest& request, const BackendResponse& response);

} // namespace weavetex
