#include "weavetex/planner.hpp"

#include "fileio.hpp"
#include "json_util.hpp"
#include "weavetex/error.hpp"
#include "weavetex/plots.hpp"

#include <algorithm>
#include <limits>

namespace weavetex {

namespace {

constexpr int kPlanVersion = 1;

bool is_letter(char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

/// True when `code` at `pos` spells `word` as a complete control word.
bool control_word_at(std::string_view code, std::size_t pos, std::string_view word) {
    if (code.substr(pos, word.size()) != word)
        return false;
    std::size_t next = pos + word.size();
    return next >= code.size() || !is_letter(code[next]);
}

struct Line {
    std::string_view content;
    std::string_view terminator;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back({text.substr(pos), {}});
            break;
        }
        lines.push_back({text.substr(pos, nl - pos), text.substr(nl, 1)});
        pos = nl + 1;
    }
    return lines;
}

bool is_blank_line(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return is_space(c); });
}

} // namespace

std::size_t JobPlan::paused_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(jobs.begin(), jobs.end(), [](const Job& j) { return j.paused; }));
}

std::string expand_primitives(std::string_view code, const Clock& clock) {
    const std::pair<std::string_view, std::string> table[] = {
        {"\\the\\year", std::to_string(clock.year)},
        {"\\the\\month", std::to_string(clock.month)},
        {"\\the\\day", std::to_string(clock.day)},
        {"\\percent", "%"},
    };

    std::string out;
    out.reserve(code.size());
    std::size_t pos = 0;
    while (pos < code.size()) {
        if (code[pos] != '\\') {
            out.push_back(code[pos++]);
            continue;
        }
        bool replaced = false;
        for (const auto& [word, value] : table) {
            if (control_word_at(code, pos, word)) {
                out += value;
                pos += word.size();
                replaced = true;
                break;
            }
        }
        if (replaced)
            continue;
        // Copy a control symbol such as `\\` whole so its second byte never
        // starts a match.
        out.push_back(code[pos++]);
        if (pos < code.size() && !is_letter(code[pos]))
            out.push_back(code[pos++]);
    }
    return out;
}

DedentResult dedent(std::string_view body) {
    std::vector<Line> lines = split_lines(body);

    std::size_t common = std::numeric_limits<std::size_t>::max();
    bool saw_tab = false;
    bool any_content = false;
    for (const auto& line : lines) {
        if (is_blank_line(line.content))
            continue;
        any_content = true;
        std::size_t indent_end = line.content.find_first_not_of(" \t");
        std::string_view indent = line.content.substr(0, indent_end);
        saw_tab = saw_tab || indent.find('\t') != std::string_view::npos;
        common = std::min(common, indent.size());
    }
    if (!any_content || common == 0)
        return {std::string(body), false};

    if (saw_tab)
        return {std::string(body), true};

    std::string out;
    out.reserve(body.size());
    for (const auto& line : lines) {
        std::size_t lead = line.content.find_first_not_of(' ');
        if (lead == std::string_view::npos)
            lead = line.content.size();
        out.append(line.content.substr(std::min(common, lead)));
        out.append(line.terminator);
    }
    return {std::move(out), false};
}

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(text[begin]))
        ++begin;
    while (end > begin && is_space(text[end - 1]))
        --end;
    return std::string(text.substr(begin, end - begin));
}

std::string compute_doc_hash(const std::vector<Job>& jobs) {
    std::string buf;
    buf.reserve(jobs.size() * 66);
    for (const auto& job : jobs) {
        buf += job.content_hash;
        buf += job.paused ? 'P' : 'R';
    }
    return sha256_hex(buf);
}

JobPlan plan(const ScanOutput& scan, const Clock& clock) {
    if (!clock.valid())
        throw Error(ErrorCode::InvalidConfig, "clock is not a valid calendar date");

    JobPlan out;
    out.clock = clock;
    bool paused = false;

    for (const auto& seg : scan.segments) {
        const auto* d = std::get_if<Directive>(&seg);
        if (!d)
            continue;

        if (d->kind == DirectiveKind::Pause) {
            if (paused)
                throw Error(ErrorCode::PauseInsidePause,
                            "\\sagetexpause inside a paused region", d->span.line);
            paused = true;
            continue;
        }
        if (d->kind == DirectiveKind::Unpause) {
            if (!paused)
                throw Error(ErrorCode::UnmatchedUnpause,
                            "\\sagetexunpause without a preceding \\sagetexpause",
                            d->span.line);
            paused = false;
            continue;
        }

        Job job;
        job.ordinal = d->ordinal;
        job.kind = d->kind;
        job.paused = paused;
        std::string expanded = expand_primitives(d->code, clock);

        switch (d->kind) {
        case DirectiveKind::InlineExpr:
            job.code = trim(expanded);
            break;
        case DirectiveKind::CodeBlock:
        case DirectiveKind::SilentBlock: {
            DedentResult dd = dedent(expanded);
            if (dd.mixed_indentation)
                out.warnings.push_back({d->ordinal, d->span.line,
                                        "block indentation mixes tabs and spaces; not dedented"});
            job.code = std::move(dd.text);
            break;
        }
        case DirectiveKind::Plot:
            job.code = std::move(expanded);
            job.gfx_options = d->gfx_options;
            job.format = d->format;
            try {
                job.plot_format_requests = resolve_formats(d->format).formats;
            } catch (const Error& e) {
                throw Error(e.code(), e.what(), d->span.line);
            }
            break;
        case DirectiveKind::Pause:
        case DirectiveKind::Unpause:
            break;
        }
        job.content_hash = content_hash(job.kind, job.code, job.gfx_options, job.format);
        out.jobs.push_back(std::move(job));
    }

    out.doc_hash = compute_doc_hash(out.jobs);
    return out;
}

std::string serialize_plan(const JobPlan& plan) {
    json doc;
    doc["version"] = kPlanVersion;
    doc["clock"] = json::array({plan.clock.year, plan.clock.month, plan.clock.day});
    doc["doc_hash"] = plan.doc_hash;
    json jobs = json::array();
    for (const auto& job : plan.jobs) {
        json j;
        j["ordinal"] = job.ordinal;
        j["kind"] = std::string(kind_name(job.kind));
        j["code"] = job.code;
        if (job.gfx_options)
            j["gfx_options"] = *job.gfx_options;
        if (job.format)
            j["format"] = *job.format;
        j["paused"] = job.paused;
        j["content_hash"] = job.content_hash;
        jobs.push_back(std::move(j));
    }
    doc["jobs"] = std::move(jobs);
    return detail::dump_stable(doc);
}

JobPlan parse_plan(std::string_view text) {
    json doc = detail::parse_json(text);
    detail::check_version(doc, kPlanVersion);

    JobPlan out;
    try {
        const json& clock = doc.at("clock");
        if (!clock.is_array() || clock.size() != 3)
            throw Error(ErrorCode::ParseError, "clock must be [year, month, day]");
        out.clock = Clock{clock[0].get<int>(), clock[1].get<unsigned>(), clock[2].get<unsigned>()};
        out.doc_hash = doc.at("doc_hash").get<std::string>();

        for (const json& j : doc.at("jobs")) {
            Job job;
            job.ordinal = j.at("ordinal").get<std::size_t>();
            auto kind = kind_from_name(j.at("kind").get<std::string>());
            if (!kind || !is_executable(*kind))
                throw Error(ErrorCode::ParseError, "bad job kind in plan");
            job.kind = *kind;
            job.code = j.at("code").get<std::string>();
            if (j.contains("gfx_options"))
                job.gfx_options = j["gfx_options"].get<std::string>();
            if (j.contains("format"))
                job.format = j["format"].get<std::string>();
            job.paused = j.at("paused").get<bool>();
            job.content_hash = j.at("content_hash").get<std::string>();
            if (job.kind == DirectiveKind::Plot)
                job.plot_format_requests = resolve_formats(job.format).formats;

            if (job.content_hash != content_hash(job.kind, job.code, job.gfx_options, job.format))
                throw Error(ErrorCode::ParseError,
                            "content_hash mismatch for job " + std::to_string(job.ordinal));
            out.jobs.push_back(std::move(job));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed job plan: ") + e.what());
    }

    if (out.doc_hash != compute_doc_hash(out.jobs))
        throw Error(ErrorCode::ParseError, "doc_hash does not match the jobs in the plan");
    return out;
}

void write_plan(const JobPlan& plan, const std::filesystem::path& path) {
    detail::write_file_atomic(path, serialize_plan(plan));
}

JobPlan read_plan(const std::filesystem::path& path) {
    return parse_plan(detail::read_file(path));
}

} // namespace weavetex
