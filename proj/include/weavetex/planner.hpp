#pragma once

#include "weavetex/model.hpp"
#include "weavetex/scanner.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace weavetex {

struct PlanWarning {
    std::size_t ordinal = 0;
    std::size_t line = 0;
    std::string message;
    bool operator==(const PlanWarning&) const = default;
};

struct JobPlan {
    std::vector<Job> jobs;
    std::string doc_hash;
    Clock clock;
    std::vector<PlanWarning> warnings; // not persisted

    std::size_t paused_count() const noexcept;
};

/// Substitutes `\the\year`, `\the\month`, `\the\day` and `\percent`. Any other
/// control sequence is left untouched.
std::string expand_primitives(std::string_view code, const Clock& clock);

struct DedentResult {
    std::string text;
    bool mixed_indentation = false; // tabs seen; text returned unchanged
};

/// Removes the longest common run of leading spaces from every non-blank
/// line. Blank lines lose up to that many spaces.
DedentResult dedent(std::string_view body);

std::string trim(std::string_view text);

/// Digest over the ordered (content_hash, paused) pairs of `jobs`.
std::string compute_doc_hash(const std::vector<Job>& jobs);

JobPlan plan(const ScanOutput& scan, const Clock& clock);

/// Bit-stable JSON form of a plan: sorted keys, two-space indent, trailing
/// newline.
std::string serialize_plan(const JobPlan& plan);
JobPlan parse_plan(std::string_view text);

void write_plan(const JobPlan& plan, const std::filesystem::path& path);
JobPlan read_plan(const std::filesystem::path& path);

} // namespace weavetex
