#pragma once

#include "weavetex/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace weavetex {

inline constexpr std::string_view kResultsExtension = ".wout";

/// Versioned JSON document with sorted keys, two-space indent and a
/// trailing newline. The output is a pure function of `results`.
std::string serialize_results(const ResultSet& results);

/// Throws ParseError or VersionMismatch.
ResultSet parse_results(std::string_view text);

/// Writes through a temporary file and a rename, so readers never observe a
/// partial file. Throws IoError.
void write_results(const ResultSet& results, const std::filesystem::path& path);

ResultSet read_results(const std::filesystem::path& path);

} // namespace weavetex
