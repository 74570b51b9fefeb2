#include "weavetex/splicer.hpp"

#include "weavetex/error.hpp"

namespace weavetex {

namespace {

std::string why_unresolved(const ResultRecord* rec) {
    if (!rec)
        return "no result recorded";
    switch (rec->status) {
    case ResultStatus::Skipped: return "not computed (skipped)";
    case ResultStatus::Error: return "computation failed: " + rec->error_message.value_or("");
    case ResultStatus::Ok: return "result is missing its payload";
    }
    return "unresolved";
}

/// Line break captured at the end of a block span, re-emitted after the
/// listing so the following text keeps its line.
std::string_view trailing_newline(std::string_view span_bytes) {
    if (span_bytes.ends_with("\r\n"))
        return "\r\n";
    if (span_bytes.ends_with("\n"))
        return "\n";
    return {};
}

} // namespace

ResolvedDocument splice(const ScanOutput& scan, const ResultSet& results,
                        const SpliceOptions& options) {
    if (options.expected_doc_hash && *options.expected_doc_hash != results.doc_hash)
        throw Error(ErrorCode::DocMismatch,
                    "results were computed for a different document (doc_hash " +
                        results.doc_hash + ", expected " + *options.expected_doc_hash + ")");

    ResolvedDocument out;
    out.text.reserve(scan.source.size());
    std::string_view src = scan.source;

    auto placeholder = [&](const Directive& d, const ResultRecord* rec) {
        out.text += kPlaceholder;
        ++out.unresolved_count;
        out.warnings.push_back({d.ordinal, d.span.line, why_unresolved(rec)});
    };

    for (const auto& seg : scan.segments) {
        if (const auto* text = std::get_if<TextSpan>(&seg)) {
            out.text.append(src.substr(text->span.byte_start, text->span.size()));
            continue;
        }
        const Directive& d = std::get<Directive>(seg);
        auto it = results.records.find(d.ordinal);
        const ResultRecord* rec = it != results.records.end() ? &it->second : nullptr;
        bool ok = rec && rec->status == ResultStatus::Ok;

        switch (d.kind) {
        case DirectiveKind::InlineExpr:
            if (ok && rec->latex)
                out.text += *rec->latex;
            else
                placeholder(d, rec);
            break;
        case DirectiveKind::CodeBlock:
            out.text += "\\begin{verbatim}\n";
            out.text += d.code;
            out.text += "\\end{verbatim}";
            out.text += trailing_newline(src.substr(d.span.byte_start, d.span.size()));
            if (rec && rec->status == ResultStatus::Error)
                out.warnings.push_back({d.ordinal, d.span.line, why_unresolved(rec)});
            break;
        case DirectiveKind::SilentBlock:
            if (rec && rec->status == ResultStatus::Error)
                out.warnings.push_back({d.ordinal, d.span.line, why_unresolved(rec)});
            break;
        case DirectiveKind::Plot:
            if (ok) {
                PlotSpec spec;
                spec.ordinal = d.ordinal;
                spec.formats = resolve_formats(d.format).formats;
                spec.gfx_options = d.gfx_options.value_or("");
                spec.out_dir = options.plots_dir;
                out.text += includegraphics_text(spec);
            } else {
                placeholder(d, rec);
            }
            break;
        case DirectiveKind::Pause:
        case DirectiveKind::Unpause:
            break;
        }
    }
    return out;
}

} // namespace weavetex
