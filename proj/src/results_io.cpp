#include "weavetex/results_io.hpp"

#include "fileio.hpp"
#include "json_util.hpp"

namespace weavetex {

namespace {

constexpr int kResultsVersion = 1;

json record_to_json(const ResultRecord& rec) {
    json j;
    j["ordinal"] = rec.ordinal;
    j["status"] = std::string(status_name(rec.status));
    if (rec.latex)
        j["latex"] = *rec.latex;
    if (rec.files)
        j["files"] = *rec.files;
    if (rec.error_message)
        j["error"] = *rec.error_message;
    if (rec.eps_conversion_requested)
        j["eps_conversion"] = true;
    return j;
}

ResultRecord record_from_json(const json& j) {
    ResultRecord rec;
    rec.ordinal = j.at("ordinal").get<std::size_t>();
    auto status = status_from_name(j.at("status").get<std::string>());
    if (!status)
        throw Error(ErrorCode::ParseError, "unknown record status");
    rec.status = *status;
    if (j.contains("latex"))
        rec.latex = j["latex"].get<std::string>();
    if (j.contains("files"))
        rec.files = j["files"].get<std::vector<std::string>>();
    if (j.contains("error"))
        rec.error_message = j["error"].get<std::string>();
    if (j.contains("eps_conversion"))
        rec.eps_conversion_requested = j["eps_conversion"].get<bool>();
    return rec;
}

} // namespace

std::string serialize_results(const ResultSet& results) {
    json doc;
    doc["version"] = kResultsVersion;
    doc["doc_hash"] = results.doc_hash;
    doc["backend_id"] = results.backend_id;
    json records = json::object();
    for (const auto& [ordinal, rec] : results.records)
        records[std::to_string(ordinal)] = record_to_json(rec);
    doc["records"] = std::move(records);
    return detail::dump_stable(doc);
}

ResultSet parse_results(std::string_view text) {
    json doc = detail::parse_json(text);
    detail::check_version(doc, kResultsVersion);

    ResultSet out;
    try {
        out.doc_hash = doc.at("doc_hash").get<std::string>();
        out.backend_id = doc.at("backend_id").get<std::string>();
        const json& records = doc.at("records");
        if (!records.is_object())
            throw Error(ErrorCode::ParseError, "\"records\" must be an object");
        for (const auto& [key, value] : records.items()) {
            ResultRecord rec = record_from_json(value);
            if (key != std::to_string(rec.ordinal))
                throw Error(ErrorCode::ParseError, "record key " + key + " does not match its ordinal");
            out.records.emplace(rec.ordinal, std::move(rec));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed results file: ") + e.what());
    }
    return out;
}

void write_results(const ResultSet& results, const std::filesystem::path& path) {
    detail::write_file_atomic(path, serialize_results(results));
}

ResultSet read_results(const std::filesystem::path& path) {
    return parse_results(detail::read_file(path));
}

} // namespace weavetex
