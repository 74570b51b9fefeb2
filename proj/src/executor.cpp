#include "weavetex/executor.hpp"

#include "weavetex/error.hpp"

#include <algorithm>

namespace weavetex {

namespace {

ResultRecord skipped(std::size_t ordinal) {
    ResultRecord r;
    r.ordinal = ordinal;
    r.status = ResultStatus::Skipped;
    return r;
}

ResultRecord failed(std::size_t ordinal, std::string message) {
    ResultRecord r;
    r.ordinal = ordinal;
    r.status = ResultStatus::Error;
    r.error_message = std::move(message);
    return r;
}

bool wants_eps_conversion(const Job& job) {
    return job.kind == DirectiveKind::Plot && job.format && trim(*job.format) == "imagemagick";
}

class Session {
public:
    Session(Backend& backend, ExecutionStats& stats) : backend_(backend), stats_(stats) {}

    BackendResponse request(RequestKind kind, const std::string& code,
                            std::optional<std::string> format = std::nullopt,
                            std::optional<std::string> save_path = std::nullopt) {
        BackendRequest req;
        req.id = backend_.next_request_id();
        req.kind = kind;
        req.code = code;
        req.format = std::move(format);
        req.save_path = std::move(save_path);
        ++stats_.requests;
        BackendResponse resp = backend_.send(req);
        check_response(req, resp);
        return resp;
    }

private:
    Backend& backend_;
    ExecutionStats& stats_;
};

ResultRecord run_job(Session& session, const Job& job, const ExecuteOptions& options) {
    ResultRecord rec;
    rec.ordinal = job.ordinal;

    auto failure = [&](const BackendResponse& resp) {
        return failed(job.ordinal, resp.error.value_or("backend reported failure"));
    };

    switch (job.kind) {
    case DirectiveKind::InlineExpr: {
        BackendResponse resp = session.request(RequestKind::Eval, job.code);
        if (!resp.ok)
            return failure(resp);
        rec.status = ResultStatus::Ok;
        rec.latex = std::move(resp.latex);
        return rec;
    }
    case DirectiveKind::CodeBlock:
    case DirectiveKind::SilentBlock: {
        rec.status = ResultStatus::Ok;
        if (trim(job.code).empty())
            return rec;
        BackendResponse resp = session.request(RequestKind::Exec, job.code);
        if (!resp.ok)
            return failure(resp);
        return rec;
    }
    case DirectiveKind::Plot: {
        std::vector<std::string> files;
        for (const auto& format : job.plot_format_requests) {
            BackendResponse resp = session.request(
                RequestKind::Plot, job.code, format,
                plot_file(options.plots_dir, job.ordinal, format));
            if (!resp.ok)
                return failure(resp);
            for (auto& f : *resp.files)
                files.push_back(std::move(f));
        }
        rec.status = ResultStatus::Ok;
        rec.files = std::move(files);
        rec.eps_conversion_requested = wants_eps_conversion(job);
        return rec;
    }
    case DirectiveKind::Pause:
    case DirectiveKind::Unpause:
        break;
    }
    throw Error(ErrorCode::ParseError, "job " + std::to_string(job.ordinal) + " is not executable");
}

} // namespace

ResultSet execute(const JobPlan& plan, Backend& backend, const std::optional<ResultSet>& cache,
                  const ExecuteOptions& options, ExecutionStats* stats_out) {
    ExecutionStats stats;
    ResultSet out;
    out.doc_hash = plan.doc_hash;

    if (cache && cache->doc_hash == plan.doc_hash) {
        stats.cache_hit = true;
        out.backend_id = cache->backend_id;
        for (const auto& job : plan.jobs) {
            auto it = cache->records.find(job.ordinal);
            out.records.emplace(job.ordinal,
                                it != cache->records.end() ? it->second : skipped(job.ordinal));
        }
        if (stats_out)
            *stats_out = std::move(stats);
        return out;
    }

    Session session(backend, stats);
    for (const auto& job : plan.jobs) {
        if (job.paused) {
            out.records.emplace(job.ordinal, skipped(job.ordinal));
            continue;
        }
        if (stats.aborted) {
            out.records.emplace(job.ordinal, failed(job.ordinal, "not executed: " + *stats.aborted));
            continue;
        }
        try {
            out.records.emplace(job.ordinal, run_job(session, job, options));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BackendCrash && e.code() != ErrorCode::ProtocolViolation)
                throw;
            std::string what = std::string(error_code_name(e.code())) + ": " + e.what();
            out.records.emplace(job.ordinal, failed(job.ordinal, what));
            stats.aborted = what;
        }
    }
    out.backend_id = backend.id();

    if (stats_out)
        *stats_out = std::move(stats);
    return out;
}

bool has_errors(const ResultSet& results) noexcept {
    return std::any_of(results.records.begin(), results.records.end(), [](const auto& kv) {
        return kv.second.status == ResultStatus::Error;
    });
}

} // namespace weavetex
