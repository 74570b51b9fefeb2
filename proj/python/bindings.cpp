#include "weavetex/builtin.hpp"
#include "weavetex/error.hpp"
#include "weavetex/executor.hpp"
#include "weavetex/pipeline.hpp"
#include "weavetex/planner.hpp"
#include "weavetex/plots.hpp"
#include "weavetex/results_io.hpp"
#include "weavetex/scanner.hpp"
#include "weavetex/splicer.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>
#include <tuple>

namespace py = pybind11;
using namespace weavetex;

namespace {

using ClockTuple = std::tuple<int, unsigned, unsigned>;

Clock to_clock(const std::optional<ClockTuple>& t) {
    if (!t)
        return today();
    Clock c{std::get<0>(*t), std::get<1>(*t), std::get<2>(*t)};
    if (!c.valid())
        throw Error(ErrorCode::InvalidConfig, "clock is not a valid calendar date");
    return c;
}

std::string kind_str(DirectiveKind k) { return std::string(kind_name(k)); }

} // namespace

PYBIND11_MODULE(_weavetex, m) {
    m.doc() = "Scan, plan, execute and splice computation directives in LaTeX sources";

    static py::exception<Error> error_type(m, "WeavetexError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            std::string msg = std::string(error_code_name(e.code())) + ": " + e.what();
            if (e.line() > 0)
                msg += " (line " + std::to_string(e.line()) + ")";
            error_type(msg.c_str());
        }
    });

    py::class_<Directive>(m, "Directive")
        .def_property_readonly("kind", [](const Directive& d) { return kind_str(d.kind); })
        .def_readonly("code", &Directive::code)
        .def_readonly("gfx_options", &Directive::gfx_options)
        .def_readonly("format", &Directive::format)
        .def_readonly("ordinal", &Directive::ordinal)
        .def_property_readonly("line", [](const Directive& d) { return d.span.line; })
        .def_property_readonly("byte_start", [](const Directive& d) { return d.span.byte_start; })
        .def_property_readonly("byte_end", [](const Directive& d) { return d.span.byte_end; })
        .def("__repr__", [](const Directive& d) {
            return "<Directive " + kind_str(d.kind) + " #" + std::to_string(d.ordinal) +
                   " line " + std::to_string(d.span.line) + ">";
        });

    py::class_<Job>(m, "Job")
        .def_readonly("ordinal", &Job::ordinal)
        .def_property_readonly("kind", [](const Job& j) { return kind_str(j.kind); })
        .def_readonly("code", &Job::code)
        .def_readonly("gfx_options", &Job::gfx_options)
        .def_readonly("format", &Job::format)
        .def_readonly("paused", &Job::paused)
        .def_readonly("content_hash", &Job::content_hash)
        .def_readonly("plot_format_requests", &Job::plot_format_requests);

    py::class_<JobPlan>(m, "JobPlan")
        .def_readonly("jobs", &JobPlan::jobs)
        .def_readonly("doc_hash", &JobPlan::doc_hash)
        .def_property_readonly("clock",
                               [](const JobPlan& p) {
                                   return ClockTuple{p.clock.year, p.clock.month, p.clock.day};
                               })
        .def_property_readonly("paused_count", &JobPlan::paused_count)
        .def("to_json", &serialize_plan);

    py::class_<ResultRecord>(m, "ResultRecord")
        .def_readonly("ordinal", &ResultRecord::ordinal)
        .def_property_readonly("status",
                               [](const ResultRecord& r) { return std::string(status_name(r.status)); })
        .def_readonly("latex", &ResultRecord::latex)
        .def_readonly("files", &ResultRecord::files)
        .def_readonly("error_message", &ResultRecord::error_message)
        .def_readonly("eps_conversion_requested", &ResultRecord::eps_conversion_requested);

    py::class_<ResultSet>(m, "ResultSet")
        .def_readonly("records", &ResultSet::records)
        .def_readonly("doc_hash", &ResultSet::doc_hash)
        .def_readonly("backend_id", &ResultSet::backend_id)
        .def("to_json", &serialize_results)
        .def_static("from_json", [](const std::string& text) { return parse_results(text); });

    py::class_<ResolvedDocument>(m, "Resolved")
        .def_readonly("text", &ResolvedDocument::text)
        .def_readonly("unresolved_count", &ResolvedDocument::unresolved_count)
        .def_property_readonly("warnings", [](const ResolvedDocument& r) {
            std::vector<std::tuple<std::size_t, std::size_t, std::string>> out;
            for (const auto& w : r.warnings)
                out.emplace_back(w.ordinal, w.line, w.message);
            return out;
        });

    m.def("scan", [](const std::string& source) { return scan_document(source).directives(); },
          py::arg("source"), "Directives of a LaTeX source, in document order.");

    m.def(
        "census",
        [](const std::string& source) {
            Census c = census(scan_document(source));
            py::dict d;
            d["InlineExpr"] = c.inline_expr;
            d["CodeBlock"] = c.code_block;
            d["SilentBlock"] = c.silent_block;
            d["Plot"] = c.plot;
            d["Pause"] = c.pause;
            d["Unpause"] = c.unpause;
            return d;
        },
        py::arg("source"));

    m.def(
        "plan",
        [](const std::string& source, std::optional<ClockTuple> clock) {
            return plan(scan_document(source), to_clock(clock));
        },
        py::arg("source"), py::arg("clock") = py::none());

    m.def(
        "execute_builtin",
        [](const JobPlan& jobs, const std::filesystem::path& base_dir, const std::string& plots_dir) {
            BuiltinBackend backend(base_dir);
            return execute(jobs, backend, std::nullopt, ExecuteOptions{plots_dir});
        },
        py::arg("plan"), py::arg("base_dir") = ".",
        py::arg("plots_dir") = std::string(kDefaultPlotsDir),
        "Run a plan in a fresh builtin-backend session.");

    m.def(
        "splice",
        [](const std::string& source, const ResultSet& results, const std::string& plots_dir) {
            return splice(scan_document(source), results, SpliceOptions{plots_dir, std::nullopt});
        },
        py::arg("source"), py::arg("results"),
        py::arg("plots_dir") = std::string(kDefaultPlotsDir));

    m.def(
        "builtin_eval",
        [](const std::string& expr, const std::string& setup) {
            Environment env;
            builtin_exec(setup, env);
            return builtin_eval(expr, env);
        },
        py::arg("expr"), py::arg("setup") = "",
        "Evaluate a mini-language expression after running `setup` statements.");

    m.def(
        "resolve_formats",
        [](std::optional<std::string> format) { return resolve_formats(format).formats; },
        py::arg("format") = py::none());

    m.def(
        "includegraphics_text",
        [](std::size_t ordinal, const std::string& gfx_options, const std::string& out_dir) {
            PlotSpec spec;
            spec.ordinal = ordinal;
            spec.formats = {"pdf", "eps"};
            spec.gfx_options = gfx_options;
            spec.out_dir = out_dir;
            return includegraphics_text(spec);
        },
        py::arg("ordinal"), py::arg("gfx_options") = "",
        py::arg("out_dir") = std::string(kDefaultPlotsDir));

    m.def(
        "build",
        [](const std::filesystem::path& input, const std::string& backend,
           std::optional<ClockTuple> clock, const std::string& plots_dir, bool strict,
           bool clean_plots, std::optional<std::filesystem::path> out) {
            Config config;
            config.backend = backend;
            if (clock)
                config.clock = to_clock(clock);
            config.plots_dir = plots_dir;
            config.strict = strict;
            config.clean_plots = clean_plots;
            config.out = std::move(out);
            std::vector<std::string> diagnostics;
            std::ostringstream sink;
            int code = cmd_build(input, config, sink, [&](const Diagnostic& d) {
                diagnostics.push_back(d.format());
            });
            return std::make_pair(code, diagnostics);
        },
        py::arg("input"), py::arg("backend") = "builtin", py::arg("clock") = py::none(),
        py::arg("plots_dir") = std::string(kDefaultPlotsDir), py::arg("strict") = false,
        py::arg("clean_plots") = false, py::arg("out") = py::none(),
        "Run the full pipeline on a file; returns (exit_code, diagnostics).");
}
