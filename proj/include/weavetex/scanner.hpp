#pragma once

#include "weavetex/model.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace weavetex {

struct TextSpan {
    SourceSpan span;
    bool operator==(const TextSpan&) const = default;
};

using Segment = std::variant<TextSpan, Directive>;

const SourceSpan& segment_span(const Segment& segment) noexcept;

struct ScanOutput {
    std::string source;
    std::vector<Segment> segments;

    std::size_t source_len() const noexcept { return source.size(); }

    /// Directives in document order (ordinal order).
    std::vector<Directive> directives() const;

    /// Concatenation of the source bytes of every segment.
    std::string reconstruct() const;

    bool operator==(const ScanOutput&) const = default;
};

struct Census {
    std::size_t inline_expr = 0;
    std::size_t code_block = 0;
    std::size_t silent_block = 0;
    std::size_t plot = 0;
    std::size_t pause = 0;
    std::size_t unpause = 0;

    std::size_t total() const noexcept {
        return inline_expr + code_block + silent_block + plot + pause + unpause;
    }
    bool operator==(const Census&) const = default;
};

Census census(const ScanOutput& scan);

/// Splits `source` into literal text and directives. Directive-like text in
/// `%` comments, `\verb` spans and verbatim environments is left as text.
ScanOutput scan_document(std::string source);

struct Group {
    std::string body;
    std::size_t end_offset = 0; // one past the closing brace
};

/// Reads the balanced `{...}` group opening at `open_offset`. `\{`, `\}` and
/// other backslash pairs are taken literally.
Group read_group(std::string_view source, std::size_t open_offset);

/// Returns the first offset after the comment, `\verb` span or verbatim
/// environment starting at `offset`.
std::size_t skip_opaque(std::string_view source, std::size_t offset);

/// 1-based line number of `offset`.
std::size_t line_of(std::string_view source, std::size_t offset) noexcept;

} // namespace weavetex
