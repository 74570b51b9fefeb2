#include "weavetex/pipeline.hpp"

#include "fileio.hpp"
#include "weavetex/builtin.hpp"
#include "weavetex/error.hpp"
#include "weavetex/executor.hpp"
#include "weavetex/planner.hpp"
#include "weavetex/results_io.hpp"
#include "weavetex/scanner.hpp"
#include "weavetex/splicer.hpp"
#include "weavetex/subprocess.hpp"

#include <charconv>
#include <ctime>
#include <ostream>
#include <system_error>

namespace weavetex {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kSubprocessPrefix = "subprocess:";

struct Stage {
    const ArtifactPaths& paths;
    const Config& config;
    const DiagnosticSink& diag;

    void report(std::size_t line, std::string_view severity, std::string message) const {
        if (diag)
            diag(Diagnostic{paths.input.string(), line, std::string(severity), std::move(message)});
    }

    void report(const Error& e) const {
        report(e.line(), "error",
               std::string(error_code_name(e.code())) + ": " + e.what());
    }
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

/// Line of each directive ordinal, for diagnostics about jobs.
std::size_t line_for(const ScanOutput* scan, std::size_t ordinal) {
    if (!scan)
        return 0;
    for (const auto& seg : scan->segments)
        if (const auto* d = std::get_if<Directive>(&seg); d && d->ordinal == ordinal)
            return d->span.line;
    return 0;
}

int stage_scan(const Stage& st, std::ostream* census_out) {
    ScanOutput scan = scan_document(detail::read_file(st.paths.input));
    JobPlan jobs = plan(scan, st.config.clock.value_or(today()));
    for (const auto& w : jobs.warnings)
        st.report(w.line, "warning", w.message);
    write_plan(jobs, st.paths.jobs);

    if (census_out) {
        Census c = census(scan);
        *census_out << "InlineExpr " << c.inline_expr << '\n'
                    << "CodeBlock " << c.code_block << '\n'
                    << "SilentBlock " << c.silent_block << '\n'
                    << "Plot " << c.plot << '\n'
                    << "Pause " << c.pause << '\n'
                    << "Unpause " << c.unpause << '\n'
                    << "jobs " << jobs.jobs.size() << " (" << jobs.paused_count()
                    << " paused)\n"
                    << "doc_hash " << jobs.doc_hash << '\n';
    }
    return kExitOk;
}

int stage_run(const Stage& st) {
    if (!fs::exists(st.paths.jobs))
        throw Error(ErrorCode::NoJobPlan,
                    "no job plan at " + st.paths.jobs.string() + "; run `scan` first");
    JobPlan jobs = read_plan(st.paths.jobs);

    std::optional<ScanOutput> scan;
    try {
        scan = scan_document(detail::read_file(st.paths.input));
    } catch (const Error&) {
        // Only used for line numbers in diagnostics.
    }

    fs::path plots = st.paths.plots_dir(st.config);
    std::optional<ResultSet> cache;
    if (st.config.clean_plots) {
        std::error_code ec;
        fs::remove_all(plots, ec);
        if (ec)
            throw Error(ErrorCode::IoError, "cannot clean " + plots.string() + ": " + ec.message());
    } else if (fs::exists(st.paths.results)) {
        try {
            cache = read_results(st.paths.results);
        } catch (const Error& e) {
            st.report(0, "warning", "ignoring unreadable results file " +
                                        st.paths.results.string() + ": " + e.what());
        }
    }

    ensure_dir(st.paths.output_dir);
    // Subprocess backends start on their first request, so a cache hit never
    // spawns an interpreter.
    std::unique_ptr<Backend> backend = make_backend(st.config.backend, st.paths.output_dir);
    ExecutionStats stats;
    ResultSet results =
        execute(jobs, *backend, cache, ExecuteOptions{st.config.plots_dir}, &stats);
    if (stats.cache_hit)
        st.report(0, "note", "cache hit: document unchanged, skipping execution");
    else
        st.report(0, "note", std::to_string(jobs.jobs.size()) + " jobs, " +
                                 std::to_string(stats.requests) + " backend requests");
    if (stats.aborted)
        st.report(0, "error", "backend session aborted: " + *stats.aborted);

    for (const auto& [ordinal, rec] : results.records)
        if (rec.status == ResultStatus::Error)
            st.report(line_for(scan ? &*scan : nullptr, ordinal), "error",
                      rec.error_message.value_or("job failed"));

    write_results(results, st.paths.results);
    return has_errors(results) ? kExitJobErrors : kExitOk;
}

int stage_splice(const Stage& st) {
    ScanOutput scan = scan_document(detail::read_file(st.paths.input));
    if (!fs::exists(st.paths.jobs))
        throw Error(ErrorCode::NoJobPlan, "no job plan at " + st.paths.jobs.string());
    JobPlan jobs = read_plan(st.paths.jobs);
    if (!fs::exists(st.paths.results))
        throw Error(ErrorCode::IoError, "no results file at " + st.paths.results.string());
    ResultSet results = read_results(st.paths.results);

    JobPlan current = plan(scan, jobs.clock);
    if (current.doc_hash != jobs.doc_hash)
        throw Error(ErrorCode::DocMismatch, "the document changed since `scan`; rerun the build");

    ResolvedDocument doc =
        splice(scan, results, SpliceOptions{st.config.plots_dir, jobs.doc_hash});
    for (const auto& w : doc.warnings)
        st.report(w.line, st.config.strict ? "error" : "warning", w.message);
    ensure_dir(st.paths.output_dir);
    detail::write_file_atomic(st.paths.resolved, doc.text);

    if (has_errors(results) || (st.config.strict && doc.unresolved_count > 0))
        return kExitJobErrors;
    return kExitOk;
}

template <typename F>
int guarded(const fs::path& input, const Config& config, const DiagnosticSink& diag, F&& body) {
    ArtifactPaths paths;
    try {
        config.validate();
        paths = artifact_paths(input, config);
        Stage st{paths, config, diag};
        return body(st);
    } catch (const Error& e) {
        if (paths.input.empty())
            paths.input = input;
        Stage{paths, config, diag}.report(e);
        return kExitFatal;
    } catch (const fs::filesystem_error& e) {
        if (diag)
            diag(Diagnostic{input.string(), 0, "error", e.what()});
        return kExitFatal;
    }
}

} // namespace

void Config::validate() const {
    if (backend != "builtin" &&
        !(backend.starts_with(kSubprocessPrefix) && backend.size() > kSubprocessPrefix.size()))
        throw Error(ErrorCode::InvalidConfig,
                    "backend must be 'builtin' or 'subprocess:<command>', got '" + backend + "'");
    if (clock && !clock->valid())
        throw Error(ErrorCode::InvalidConfig, "clock is not a valid calendar date");
    fs::path plots(plots_dir);
    if (plots_dir.empty() || plots.is_absolute())
        throw Error(ErrorCode::InvalidConfig, "plots directory must be a relative path");
    for (const auto& part : plots)
        if (part == "..")
            throw Error(ErrorCode::InvalidConfig, "plots directory must not contain '..'");
}

Clock parse_clock(std::string_view text) {
    auto bad = [&] {
        return Error(ErrorCode::InvalidConfig,
                     "clock must be Y-M-D with a valid date, got '" + std::string(text) + "'");
    };
    Clock c;
    const char* p = text.data();
    const char* end = text.data() + text.size();
    auto r = std::from_chars(p, end, c.year);
    if (r.ec != std::errc{} || r.ptr == end || *r.ptr != '-')
        throw bad();
    r = std::from_chars(r.ptr + 1, end, c.month);
    if (r.ec != std::errc{} || r.ptr == end || *r.ptr != '-')
        throw bad();
    r = std::from_chars(r.ptr + 1, end, c.day);
    if (r.ec != std::errc{} || r.ptr != end || !c.valid())
        throw bad();
    return c;
}

Clock today() {
    std::time_t now = std::time(nullptr);
    std::tm local{};
    ::localtime_r(&now, &local);
    return Clock{local.tm_year + 1900, static_cast<unsigned>(local.tm_mon + 1),
                 static_cast<unsigned>(local.tm_mday)};
}

std::string Diagnostic::format() const {
    std::string s = file;
    if (line > 0)
        s += ":" + std::to_string(line);
    s += ": " + severity + ": " + message;
    return s;
}

ArtifactPaths artifact_paths(const fs::path& input, const Config& config) {
    ArtifactPaths p;
    p.input = input;
    fs::path base = input;
    base.replace_extension();
    p.jobs = fs::path(base).concat(".jobs");
    p.results = fs::path(base).concat(kResultsExtension);
    p.resolved = config.out ? *config.out : fs::path(base).concat(".resolved.tex");
    p.output_dir = p.resolved.parent_path();
    if (p.output_dir.empty())
        p.output_dir = ".";
    return p;
}

std::unique_ptr<Backend> make_backend(std::string_view spec, const fs::path& working_dir) {
    if (spec == "builtin")
        return std::make_unique<BuiltinBackend>(working_dir);
    if (spec.starts_with(kSubprocessPrefix) && spec.size() > kSubprocessPrefix.size())
        return std::make_unique<SubprocessBackend>(
            std::string(spec.substr(kSubprocessPrefix.size())), working_dir);
    throw Error(ErrorCode::InvalidConfig, "unknown backend '" + std::string(spec) + "'");
}

int cmd_scan(const fs::path& input, const Config& config, std::ostream& out,
             const DiagnosticSink& diag) {
    return guarded(input, config, diag, [&](const Stage& st) { return stage_scan(st, &out); });
}

int cmd_run(const fs::path& input, const Config& config, std::ostream&,
            const DiagnosticSink& diag) {
    return guarded(input, config, diag, [&](const Stage& st) { return stage_run(st); });
}

int cmd_splice(const fs::path& input, const Config& config, std::ostream&,
               const DiagnosticSink& diag) {
    return guarded(input, config, diag, [&](const Stage& st) { return stage_splice(st); });
}

int cmd_build(const fs::path& input, const Config& config, std::ostream&,
              const DiagnosticSink& diag) {
    return guarded(input, config, diag, [&](const Stage& st) {
        stage_scan(st, nullptr);
        int run = stage_run(st);
        int spliced = stage_splice(st);
        return std::max(run, spliced);
    });
}

} // namespace weavetex
