#pragma once

#include "weavetex/model.hpp"
#include "weavetex/plots.hpp"
#include "weavetex/scanner.hpp"

#include <optional>
#include <string>
#include <vector>

namespace weavetex {

inline constexpr std::string_view kPlaceholder = "\\mbox{??}";

struct SpliceWarning {
    std::size_t ordinal = 0;
    std::size_t line = 0;
    std::string message;
    bool operator==(const SpliceWarning&) const = default;
};

struct ResolvedDocument {
    std::string text;
    std::vector<SpliceWarning> warnings;
    std::size_t unresolved_count = 0; // number of placeholders inserted
};

struct SpliceOptions {
    std::string plots_dir = std::string(kDefaultPlotsDir);
    /// When set, must equal the results' doc_hash (else DocMismatch).
    std::optional<std::string> expected_doc_hash;
};

/// Replaces every directive span:
///   InlineExpr  -> result LaTeX, verbatim
///   CodeBlock   -> \begin{verbatim} + original body + \end{verbatim}
///   SilentBlock -> nothing
///   Plot        -> \includegraphics
///   Pause/Unpause -> nothing
/// Inline and plot sites without an Ok result get kPlaceholder and a warning.
ResolvedDocument splice(const ScanOutput& scan, const ResultSet& results,
                        const SpliceOptions& options = {});

} // namespace weavetex
