#include "weavetex/model.hpp"

#include "weavetex/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>

namespace weavetex {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::UnbalancedGroup: return "UnbalancedGroup";
    case ErrorCode::UnterminatedEnvironment: return "UnterminatedEnvironment";
    case ErrorCode::UnterminatedVerb: return "UnterminatedVerb";
    case ErrorCode::UnmatchedUnpause: return "UnmatchedUnpause";
    case ErrorCode::PauseInsidePause: return "PauseInsidePause";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::UnboundIdentifier: return "UnboundIdentifier";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::BackendCrash: return "BackendCrash";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::DocMismatch: return "DocMismatch";
    case ErrorCode::NoJobPlan: return "NoJobPlan";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

std::string_view kind_name(DirectiveKind kind) noexcept {
    switch (kind) {
    case DirectiveKind::InlineExpr: return "InlineExpr";
    case DirectiveKind::CodeBlock: return "CodeBlock";
    case DirectiveKind::SilentBlock: return "SilentBlock";
    case DirectiveKind::Plot: return "Plot";
    case DirectiveKind::Pause: return "Pause";
    case DirectiveKind::Unpause: return "Unpause";
    }
    return "Unknown";
}

std::optional<DirectiveKind> kind_from_name(std::string_view name) noexcept {
    for (auto kind : {DirectiveKind::InlineExpr, DirectiveKind::CodeBlock,
                      DirectiveKind::SilentBlock, DirectiveKind::Plot,
                      DirectiveKind::Pause, DirectiveKind::Unpause}) {
        if (kind_name(kind) == name)
            return kind;
    }
    return std::nullopt;
}

std::string_view status_name(ResultStatus status) noexcept {
    switch (status) {
    case ResultStatus::Ok: return "ok";
    case ResultStatus::Skipped: return "skipped";
    case ResultStatus::Error: return "error";
    }
    return "unknown";
}

std::optional<ResultStatus> status_from_name(std::string_view name) noexcept {
    for (auto status : {ResultStatus::Ok, ResultStatus::Skipped, ResultStatus::Error}) {
        if (status_name(status) == name)
            return status;
    }
    return std::nullopt;
}

bool Clock::valid() const noexcept {
    using namespace std::chrono;
    return year_month_day{std::chrono::year{year}, std::chrono::month{month},
                          std::chrono::day{day}}
        .ok();
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int digest_len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &digest_len, EVP_sha256(),
                   nullptr) != 1)
        throw Error(ErrorCode::IoError, "SHA-256 digest failed");

    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(digest_len * 2);
    for (unsigned int i = 0; i < digest_len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0x0f]);
    }
    return out;
}

namespace {

void append_field(std::string& buf, std::string_view field) {
    std::uint64_t len = field.size();
    for (int shift = 56; shift >= 0; shift -= 8)
        buf.push_back(static_cast<char>((len >> shift) & 0xff));
    buf.append(field);
}

void append_optional(std::string& buf, const std::optional<std::string>& field) {
    buf.push_back(field ? '\x01' : '\x00');
    if (field)
        append_field(buf, *field);
}

} // namespace

std::string content_hash(DirectiveKind kind, std::string_view code,
                         const std::optional<std::string>& gfx_options,
                         const std::optional<std::string>& format) {
    std::string buf;
    buf.reserve(code.size() + 64);
    append_field(buf, kind_name(kind));
    append_field(buf, code);
    append_optional(buf, gfx_options);
    append_optional(buf, format);
    return sha256_hex(buf);
}

} // namespace weavetex
