#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace weavetex {

/// Half-open byte range [byte_start, byte_end) into the source document.
struct SourceSpan {
    std::size_t byte_start = 0;
    std::size_t byte_end = 0;
    std::size_t line = 1;

    std::size_t size() const noexcept { return byte_end - byte_start; }
    bool operator==(const SourceSpan&) const = default;
};

enum class DirectiveKind {
    InlineExpr,
    CodeBlock,
    SilentBlock,
    Plot,
    Pause,
    Unpause,
};

std::string_view kind_name(DirectiveKind kind) noexcept;
std::optional<DirectiveKind> kind_from_name(std::string_view name) noexcept;

/// Pause and Unpause only toggle state; everything else becomes a Job.
constexpr bool is_executable(DirectiveKind kind) noexcept {
    return kind != DirectiveKind::Pause && kind != DirectiveKind::Unpause;
}

struct Directive {
    DirectiveKind kind = DirectiveKind::InlineExpr;
    std::string code;                       // raw argument or block body bytes
    std::optional<std::string> gfx_options; // Plot only: first [..]
    std::optional<std::string> format;      // Plot only: second [..]
    SourceSpan span;
    std::size_t ordinal = 0;

    bool operator==(const Directive&) const = default;
};

struct Job {
    std::size_t ordinal = 0;
    DirectiveKind kind = DirectiveKind::InlineExpr;
    std::string code; // after expansion, trimming and dedent
    std::optional<std::string> gfx_options;
    std::optional<std::string> format;
    bool paused = false;
    std::string content_hash;
    std::vector<std::string> plot_format_requests;

    bool operator==(const Job&) const = default;
};

struct Clock {
    int year = 1970;
    unsigned month = 1;
    unsigned day = 1;

    bool valid() const noexcept;
    bool operator==(const Clock&) const = default;
};

enum class ResultStatus { Ok, Skipped, Error };

std::string_view status_name(ResultStatus status) noexcept;
std::optional<ResultStatus> status_from_name(std::string_view name) noexcept;

struct ResultRecord {
    std::size_t ordinal = 0;
    ResultStatus status = ResultStatus::Skipped;
    std::optional<std::string> latex;
    std::optional<std::vector<std::string>> files;
    std::optional<std::string> error_message;
    // Set for plots requested with the `imagemagick` format token.
    bool eps_conversion_requested = false;

    bool operator==(const ResultRecord&) const = default;
};

struct ResultSet {
    std::map<std::size_t, ResultRecord> records;
    std::string doc_hash;
    std::string backend_id;

    bool operator==(const ResultSet&) const = default;
};

/// SHA-256 of `bytes`, as 64 lowercase hex characters.
std::string sha256_hex(std::string_view bytes);

/// Digest over (kind, code, gfx_options, format). Each field is length-prefixed
/// and absent optionals are distinguished from empty ones, so no two distinct
/// field tuples share an encoding.
std::string content_hash(DirectiveKind kind, std::string_view code,
                         const std::optional<std::string>& gfx_options = std::nullopt,
                         const std::optional<std::string>& format = std::nullopt);

} // namespace weavetex
