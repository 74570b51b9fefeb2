#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace weavetex {

inline constexpr std::string_view kDefaultPlotsDir = "sage-plots";

struct FormatSelection {
    std::vector<std::string> formats;
    bool eps_conversion = false; // `imagemagick`: PNG now, EPS via external convert

    bool operator==(const FormatSelection&) const = default;
};

/// absent -> [pdf, eps]; png/pdf/eps -> itself; imagemagick -> [png] with
/// the conversion flag. Anything else throws UnknownFormat.
FormatSelection resolve_formats(const std::optional<std::string>& directive_format);

struct PlotSpec {
    std::size_t ordinal = 0;
    std::vector<std::string> formats;
    std::string gfx_options;
    std::string out_dir = std::string(kDefaultPlotsDir);

    /// Throws UnknownFormat / InvalidConfig when the invariants do not hold.
    void validate() const;
};

/// `<out_dir>/plot-<ordinal>` without extension.
std::string plot_stem(std::string_view out_dir, std::size_t ordinal);

/// `<out_dir>/plot-<ordinal>.<format>`.
std::string plot_file(std::string_view out_dir, std::size_t ordinal, std::string_view format);

std::vector<std::string> plot_files(const PlotSpec& spec);

/// `\includegraphics[<options>]{<out_dir>/plot-<ordinal>}`; the bracket is
/// dropped when the options are empty and the extension is always omitted.
std::string includegraphics_text(const PlotSpec& spec);

} // namespace weavetex
