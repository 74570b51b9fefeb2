#pragma once

#include "weavetex/backend.hpp"
#include "weavetex/model.hpp"
#include "weavetex/plots.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace weavetex {

inline constexpr std::string_view kBackendEnvVar = "WEAVETEX_BACKEND";

enum ExitCode : int {
    kExitOk = 0,
    kExitJobErrors = 1, // Error records, or placeholders under --strict
    kExitFatal = 2,     // the stage could not complete
};

struct Config {
    std::string backend = "builtin"; // or "subprocess:<command line>"
    std::optional<Clock> clock;      // default: today's local date
    std::string plots_dir = std::string(kDefaultPlotsDir);
    bool strict = false;
    bool clean_plots = false;
    std::optional<std::filesystem::path> out;

    /// Throws InvalidConfig.
    void validate() const;
};

/// Parses `Y-M-D` (e.g. `2009-1-1`), rejecting impossible dates.
Clock parse_clock(std::string_view text);
Clock today();

struct Diagnostic {
    std::string file;
    std::size_t line = 0;
    std::string severity; // error | warning | note
    std::string message;

    /// `<file>:<line>: <severity>: <message>`; the line is omitted when 0.
    std::string format() const;
};

using DiagnosticSink = std::function<void(const Diagnostic&)>;

struct ArtifactPaths {
    std::filesystem::path input;
    std::filesystem::path jobs;     // <dir>/<stem>.jobs
    std::filesystem::path results;  // <dir>/<stem>.wout
    std::filesystem::path resolved; // --out, or <dir>/<stem>.resolved.tex
    std::filesystem::path output_dir;

    std::filesystem::path plots_dir(const Config& config) const {
        return output_dir / config.plots_dir;
    }
};

ArtifactPaths artifact_paths(const std::filesystem::path& input, const Config& config);

/// `builtin` or `subprocess:<command line>`; plot paths are relative to
/// `working_dir`.
std::unique_ptr<Backend> make_backend(std::string_view spec,
                                      const std::filesystem::path& working_dir);

/// Scans and plans the input, writes `.jobs`, prints the directive census.
int cmd_scan(const std::filesystem::path& input, const Config& config, std::ostream& out,
             const DiagnosticSink& diag);

/// Executes `.jobs` (reusing `.wout` on a doc_hash match) and writes `.wout`.
int cmd_run(const std::filesystem::path& input, const Config& config, std::ostream& out,
            const DiagnosticSink& diag);

/// Splices `.wout` into the input and writes the resolved document.
int cmd_splice(const std::filesystem::path& input, const Config& config, std::ostream& out,
               const DiagnosticSink& diag);

/// scan, run and splice in sequence.
int cmd_build(const std::filesystem::path& input, const Config& config, std::ostream& out,
              const DiagnosticSink& diag);

} // namespace weavetex
