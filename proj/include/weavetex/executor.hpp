#pragma once

#include "weavetex/backend.hpp"
#include "weavetex/model.hpp"
#include "weavetex/planner.hpp"
#include "weavetex/plots.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace weavetex {

struct ExecuteOptions {
    std::string plots_dir = std::string(kDefaultPlotsDir);
};

struct ExecutionStats {
    std::size_t requests = 0;
    bool cache_hit = false;
    /// Set when the session died or broke protocol; jobs after that point
    /// carry Error records.
    std::optional<std::string> aborted;
};

/// Runs the plan's jobs in ordinal order in one backend session.
///
/// InlineExpr jobs become eval requests, blocks become exec requests and
/// plots one plot request per resolved format. Paused jobs are recorded as
/// Skipped without contacting the backend, and empty blocks are no-ops. A
/// failed job is recorded as Error and execution continues. When `cache`
/// carries the plan's doc_hash nothing is executed and its records are
/// returned.
ResultSet execute(const JobPlan& plan, Backend& backend,
                  const std::optional<ResultSet>& cache = std::nullopt,
                  const ExecuteOptions& options = {}, ExecutionStats* stats = nullptr);

bool has_errors(const ResultSet& results) noexcept;

} // namespace weavetex
