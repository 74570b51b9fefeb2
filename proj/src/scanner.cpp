#include "weavetex/scanner.hpp"

#include "weavetex/error.hpp"

#include <algorithm>
#include <optional>

namespace weavetex {

namespace {

constexpr std::string_view kVerbatimEnds[] = {"\\end{verbatim}", "\\end{verbatim*}"};

bool is_letter(char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_blank(char c) noexcept { return c == ' ' || c == '\t'; }

/// Name of the control sequence whose backslash is at `pos`. Control words
/// are a run of letters; anything else is a one-character control symbol.
std::string_view control_name(std::string_view src, std::size_t pos) noexcept {
    std::size_t start = pos + 1;
    if (start >= src.size())
        return {};
    if (!is_letter(src[start]))
        return src.substr(start, 1);
    std::size_t end = start;
    while (end < src.size() && is_letter(src[end]))
        ++end;
    return src.substr(start, end - start);
}

std::size_t skip_blanks(std::string_view src, std::size_t pos) noexcept {
    while (pos < src.size() && is_blank(src[pos]))
        ++pos;
    return pos;
}

/// `\begin{name}` at `pos`: returns the environment name without consuming
/// anything if the braces are present on the same token.
std::optional<std::string_view> begin_env_name(std::string_view src, std::size_t pos) {
    constexpr std::string_view begin = "\\begin{";
    if (src.substr(pos, begin.size()) != begin)
        return std::nullopt;
    std::size_t name_start = pos + begin.size();
    std::size_t close = src.find('}', name_start);
    if (close == std::string_view::npos)
        return std::nullopt;
    std::string_view name = src.substr(name_start, close - name_start);
    if (name.find_first_of("{\\\n") != std::string_view::npos)
        return std::nullopt;
    return name;
}

std::size_t line_start_of(std::string_view src, std::size_t pos) noexcept {
    std::size_t nl = src.rfind('\n', pos == 0 ? 0 : pos - 1);
    if (pos == 0 || nl == std::string_view::npos)
        return 0;
    return nl + 1;
}

/// Bracketed optional argument `[...]` at `pos`; brackets nested inside
/// braces do not close it.
Group read_optional(std::string_view src, std::size_t pos, std::size_t line) {
    int brace_depth = 0;
    for (std::size_t i = pos + 1; i < src.size(); ++i) {
        char c = src[i];
        if (c == '\\') {
            ++i;
        } else if (c == '{') {
            ++brace_depth;
        } else if (c == '}') {
            if (brace_depth > 0)
                --brace_depth;
        } else if (c == ']' && brace_depth == 0) {
            return {std::string(src.substr(pos + 1, i - pos - 1)), i + 1};
        }
    }
    throw Error(ErrorCode::UnbalancedGroup, "optional argument '[' is never closed", line);
}

class Scanner {
public:
    explicit Scanner(std::string_view src) : src_(src) {}

    std::vector<Segment> run() {
        std::size_t pos = 0;
        while (pos < src_.size()) {
            char c = src_[pos];
            if (c == '%') {
                pos = skip_opaque(src_, pos);
            } else if (c == '\\') {
                pos = control_sequence(pos);
            } else {
                ++pos;
            }
        }
        flush_text(src_.size());
        return std::move(segments_);
    }

private:
    std::size_t control_sequence(std::size_t pos) {
        std::string_view name = control_name(src_, pos);
        if (name.empty())
            return pos + 1;
        std::size_t after = pos + 1 + name.size();

        if (name == "verb")
            return skip_opaque(src_, pos);
        if (name == "begin") {
            auto env = begin_env_name(src_, pos);
            if (!env)
                return after;
            if (*env == "verbatim" || *env == "verbatim*")
                return skip_opaque(src_, pos);
            if (*env == "sageblock")
                return block(pos, DirectiveKind::CodeBlock, "sageblock");
            if (*env == "sagesilent")
                return block(pos, DirectiveKind::SilentBlock, "sagesilent");
            return after;
        }
        if (name == "sage")
            return inline_expr(pos, after);
        if (name == "sageplot")
            return plot(pos, after);
        if (name == "sagetexpause") {
            emit(DirectiveKind::Pause, {}, pos, after);
            return after;
        }
        if (name == "sagetexunpause") {
            emit(DirectiveKind::Unpause, {}, pos, after);
            return after;
        }
        return after;
    }

    std::size_t inline_expr(std::size_t pos, std::size_t after) {
        std::size_t open = skip_blanks(src_, after);
        if (open >= src_.size() || src_[open] != '{')
            throw Error(ErrorCode::UnbalancedGroup, "expected '{' after \\sage",
                        line_of(src_, pos));
        Group group = read_group_at(open, pos);
        emit(DirectiveKind::InlineExpr, std::move(group.body), pos, group.end_offset);
        return group.end_offset;
    }

    std::size_t plot(std::size_t pos, std::size_t after) {
        std::size_t line = line_of(src_, pos);
        std::optional<std::string> gfx_options;
        std::optional<std::string> format;

        std::size_t cursor = skip_blanks(src_, after);
        if (cursor < src_.size() && src_[cursor] == '[') {
            Group opt = read_optional(src_, cursor, line);
            gfx_options = std::move(opt.body);
            cursor = skip_blanks(src_, opt.end_offset);
            if (cursor < src_.size() && src_[cursor] == '[') {
                Group fmt = read_optional(src_, cursor, line);
                format = std::move(fmt.body);
                cursor = skip_blanks(src_, fmt.end_offset);
            }
        }
        if (cursor >= src_.size() || src_[cursor] != '{')
            throw Error(ErrorCode::UnbalancedGroup, "expected '{' after \\sageplot", line);
        Group group = read_group_at(cursor, pos);

        Directive& d = emit(DirectiveKind::Plot, std::move(group.body), pos, group.end_offset);
        d.gfx_options = std::move(gfx_options);
        d.format = std::move(format);
        return group.end_offset;
    }

    std::size_t block(std::size_t pos, DirectiveKind kind, std::string_view env) {
        std::string end_token = "\\end{" + std::string(env) + "}";
        std::size_t begin_end = pos + std::string_view("\\begin{}").size() + env.size();
        std::size_t end_pos = src_.find(end_token, begin_end);
        if (end_pos == std::string_view::npos)
            throw Error(ErrorCode::UnterminatedEnvironment,
                        "missing " + end_token, line_of(src_, pos));

        std::size_t body_end = std::max(line_start_of(src_, end_pos), begin_end);
        std::size_t first_nl = src_.find('\n', begin_end);
        std::size_t body_start =
            first_nl == std::string_view::npos ? body_end : std::min(first_nl + 1, body_end);

        // The line break that ends the \end{...} line belongs to the block.
        std::size_t span_end = end_pos + end_token.size();
        if (span_end < src_.size() && src_[span_end] == '\n')
            ++span_end;
        else if (src_.substr(span_end, 2) == "\r\n")
            span_end += 2;

        emit(kind, std::string(src_.substr(body_start, body_end - body_start)), pos, span_end);
        return span_end;
    }

    Group read_group_at(std::size_t open, std::size_t directive_pos) {
        try {
            return read_group(src_, open);
        } catch (const Error& e) {
            throw Error(e.code(), e.what(), line_of(src_, directive_pos));
        }
    }

    Directive& emit(DirectiveKind kind, std::string code, std::size_t start, std::size_t end) {
        flush_text(start);
        Directive d;
        d.kind = kind;
        d.code = std::move(code);
        d.span = SourceSpan{start, end, line_at(start)};
        d.ordinal = next_ordinal_++;
        segments_.emplace_back(std::move(d));
        text_start_ = end;
        return std::get<Directive>(segments_.back());
    }

    void flush_text(std::size_t upto) {
        if (upto > text_start_)
            segments_.emplace_back(
                TextSpan{SourceSpan{text_start_, upto, line_at(text_start_)}});
        text_start_ = upto;
    }

    // Offsets passed here never decrease during a scan.
    std::size_t line_at(std::size_t offset) {
        line_ += static_cast<std::size_t>(
            std::count(src_.begin() + static_cast<std::ptrdiff_t>(line_offset_),
                       src_.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
        line_offset_ = offset;
        return line_;
    }

    std::string_view src_;
    std::vector<Segment> segments_;
    std::size_t text_start_ = 0;
    std::size_t next_ordinal_ = 0;
    std::size_t line_offset_ = 0;
    std::size_t line_ = 1;
};

} // namespace

const SourceSpan& segment_span(const Segment& segment) noexcept {
    return std::visit([](const auto& s) -> const SourceSpan& { return s.span; }, segment);
}

std::vector<Directive> ScanOutput::directives() const {
    std::vector<Directive> out;
    for (const auto& seg : segments)
        if (const auto* d = std::get_if<Directive>(&seg))
            out.push_back(*d);
    return out;
}

std::string ScanOutput::reconstruct() const {
    std::string out;
    out.reserve(source.size());
    for (const auto& seg : segments) {
        const SourceSpan& span = segment_span(seg);
        out.append(source, span.byte_start, span.size());
    }
    return out;
}

Census census(const ScanOutput& scan) {
    Census c;
    for (const auto& seg : scan.segments) {
        const auto* d = std::get_if<Directive>(&seg);
        if (!d)
            continue;
        switch (d->kind) {
        case DirectiveKind::InlineExpr: ++c.inline_expr; break;
        case DirectiveKind::CodeBlock: ++c.code_block; break;
        case DirectiveKind::SilentBlock: ++c.silent_block; break;
        case DirectiveKind::Plot: ++c.plot; break;
        case DirectiveKind::Pause: ++c.pause; break;
        case DirectiveKind::Unpause: ++c.unpause; break;
        }
    }
    return c;
}

ScanOutput scan_document(std::string source) {
    ScanOutput out;
    out.source = std::move(source);
    out.segments = Scanner(out.source).run();
    return out;
}

Group read_group(std::string_view source, std::size_t open_offset) {
    if (open_offset >= source.size() || source[open_offset] != '{')
        throw Error(ErrorCode::UnbalancedGroup, "expected '{'");
    int depth = 0;
    for (std::size_t i = open_offset; i < source.size(); ++i) {
        char c = source[i];
        if (c == '\\') {
            ++i;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0)
                return {std::string(source.substr(open_offset + 1, i - open_offset - 1)), i + 1};
        }
    }
    throw Error(ErrorCode::UnbalancedGroup, "group '{' is never closed");
}

std::size_t skip_opaque(std::string_view source, std::size_t offset) {
    if (offset >= source.size())
        return offset;

    if (source[offset] == '%') {
        std::size_t nl = source.find('\n', offset);
        return nl == std::string_view::npos ? source.size() : nl + 1;
    }

    std::string_view name = source[offset] == '\\' ? control_name(source, offset) : "";
    if (name == "verb") {
        std::size_t delim_pos = offset + 5;
        if (delim_pos < source.size() && source[delim_pos] == '*')
            ++delim_pos;
        if (delim_pos >= source.size())
            throw Error(ErrorCode::UnterminatedVerb, "\\verb without delimiter",
                        line_of(source, offset));
        std::size_t close = source.find(source[delim_pos], delim_pos + 1);
        if (close == std::string_view::npos)
            throw Error(ErrorCode::UnterminatedVerb,
                        std::string("\\verb delimiter '") + source[delim_pos] + "' never repeats",
                        line_of(source, offset));
        return close + 1;
    }

    if (name == "begin") {
        auto env = begin_env_name(source, offset);
        if (env && (*env == "verbatim" || *env == "verbatim*")) {
            std::string_view end_token = *env == "verbatim" ? kVerbatimEnds[0] : kVerbatimEnds[1];
            std::size_t body = offset + std::string_view("\\begin{}").size() + env->size();
            std::size_t close = source.find(end_token, body);
            if (close == std::string_view::npos)
                throw Error(ErrorCode::UnterminatedEnvironment,
                            "missing " + std::string(end_token), line_of(source, offset));
            return close + end_token.size();
        }
    }
    return offset;
}

std::size_t line_of(std::string_view source, std::size_t offset) noexcept {
    offset = std::min(offset, source.size());
    return 1 + static_cast<std::size_t>(
                   std::count(source.begin(), source.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

} // namespace weavetex
