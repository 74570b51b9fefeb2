#include "weavetex/plots.hpp"

#include "weavetex/error.hpp"
#include "weavetex/planner.hpp"

#include <algorithm>

namespace weavetex {

namespace {

bool is_file_format(std::string_view token) {
    return token == "pdf" || token == "eps" || token == "png";
}

std::string_view strip_trailing_slashes(std::string_view dir) {
    while (dir.size() > 1 && dir.back() == '/')
        dir.remove_suffix(1);
    return dir;
}

} // namespace

FormatSelection resolve_formats(const std::optional<std::string>& directive_format) {
    std::string token = directive_format ? trim(*directive_format) : std::string();
    if (token.empty())
        return {{"pdf", "eps"}, false};
    if (token == "imagemagick")
        return {{"png"}, true};
    if (is_file_format(token))
        return {{token}, false};
    throw Error(ErrorCode::UnknownFormat, "unknown plot format '" + token + "'");
}

void PlotSpec::validate() const {
    if (formats.empty())
        throw Error(ErrorCode::UnknownFormat, "plot has no output formats");
    for (const auto& f : formats)
        if (!is_file_format(f))
            throw Error(ErrorCode::UnknownFormat, "unknown plot format '" + f + "'");
    if (out_dir.empty() || out_dir.front() == '/')
        throw Error(ErrorCode::InvalidConfig, "plot directory must be a relative path");
}

std::string plot_stem(std::string_view out_dir, std::size_t ordinal) {
    std::string stem(strip_trailing_slashes(out_dir));
    stem += "/plot-";
    stem += std::to_string(ordinal);
    return stem;
}

std::string plot_file(std::string_view out_dir, std::size_t ordinal, std::string_view format) {
    std::string path = plot_stem(out_dir, ordinal);
    path += '.';
    path += format;
    return path;
}

std::vector<std::string> plot_files(const PlotSpec& spec) {
    std::vector<std::string> out;
    out.reserve(spec.formats.size());
    for (const auto& f : spec.formats)
        out.push_back(plot_file(spec.out_dir, spec.ordinal, f));
    return out;
}

std::string includegraphics_text(const PlotSpec& spec) {
    std::string out = "\\includegraphics";
    if (!spec.gfx_options.empty()) {
        out += '[';
        out += spec.gfx_options;
        out += ']';
    }
    out += '{';
    out += plot_stem(spec.out_dir, spec.ordinal);
    out += '}';
    return out;
}

} // namespace weavetex
