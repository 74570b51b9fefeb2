// weavetex: run the computations embedded in a LaTeX document and splice
// their results back in.

#include "weavetex/error.hpp"
#include "weavetex/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

namespace {

struct Options {
    std::string input;
    std::string backend;
    std::string clock;
    std::string plots_dir = std::string(weavetex::kDefaultPlotsDir);
    std::string out;
    bool strict = false;
    bool clean_plots = false;
};

void add_common(CLI::App* cmd, Options& opts) {
    cmd->add_option("input", opts.input, "LaTeX source file")->required();
    cmd->add_option("--backend", opts.backend,
                    "builtin | subprocess:<command line> (default: $WEAVETEX_BACKEND or builtin)");
    cmd->add_option("--clock", opts.clock, "date used for \\the\\year etc., as Y-M-D");
    cmd->add_option("--plots-dir", opts.plots_dir,
                    "plot directory, relative to the output document");
    cmd->add_option("--out", opts.out, "resolved document path (default <stem>.resolved.tex)");
    cmd->add_flag("--strict", opts.strict, "treat unresolved placeholders as errors");
    cmd->add_flag("--clean-plots", opts.clean_plots,
                  "delete the plot directory and re-execute everything");
}

weavetex::Config to_config(const Options& opts) {
    weavetex::Config config;
    if (!opts.backend.empty()) {
        config.backend = opts.backend;
    } else if (const char* env = std::getenv(std::string(weavetex::kBackendEnvVar).c_str());
               env && *env) {
        config.backend = env;
    }
    if (!opts.clock.empty())
        config.clock = weavetex::parse_clock(opts.clock);
    config.plots_dir = opts.plots_dir;
    config.strict = opts.strict;
    config.clean_plots = opts.clean_plots;
    if (!opts.out.empty())
        config.out = opts.out;
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Execute computation directives in a LaTeX document and splice in the results"};
    app.require_subcommand(1);

    Options opts;
    using Command = int (*)(const std::filesystem::path&, const weavetex::Config&, std::ostream&,
                            const weavetex::DiagnosticSink&);
    Command command = nullptr;

    auto* scan = app.add_subcommand("scan", "extract directives and write the job plan (.jobs)");
    auto* run = app.add_subcommand("run", "execute the job plan and write results (.wout)");
    auto* splice = app.add_subcommand("splice", "write the resolved document from .wout");
    auto* build = app.add_subcommand("build", "scan, run and splice");
    for (auto* cmd : {scan, run, splice, build})
        add_common(cmd, opts);
    scan->callback([&] { command = weavetex::cmd_scan; });
    run->callback([&] { command = weavetex::cmd_run; });
    splice->callback([&] { command = weavetex::cmd_splice; });
    build->callback([&] { command = weavetex::cmd_build; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and friends exit 0; usage errors are fatal like any other.
        return app.exit(e) == 0 ? weavetex::kExitOk : weavetex::kExitFatal;
    }

    weavetex::Config config;
    try {
        config = to_config(opts);
    } catch (const weavetex::Error& e) {
        std::cerr << opts.input << ": error: " << e.what() << '\n';
        return weavetex::kExitFatal;
    }

    auto diag = [](const weavetex::Diagnostic& d) { std::cerr << d.format() << '\n'; };
    return command(opts.input, config, std::cout, diag);
}
