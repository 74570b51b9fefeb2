#include "weavetex/backend.hpp"

#include "json_util.hpp"
#include "weavetex/error.hpp"

namespace weavetex {

namespace {

std::string dump_line(const json& obj) {
    try {
        return obj.dump(-1, ' ', false, json::error_handler_t::strict);
    } catch (const json::type_error& e) {
        throw Error(ErrorCode::ProtocolViolation, std::string("cannot encode message: ") + e.what());
    }
}

json parse_line(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r'))
        line.remove_suffix(1);
    try {
        json obj = json::parse(line);
        if (!obj.is_object())
            throw Error(ErrorCode::ProtocolViolation, "protocol message is not a JSON object");
        return obj;
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ProtocolViolation, std::string("malformed protocol line: ") + e.what());
    }
}

template <typename T>
std::optional<T> optional_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null())
        return std::nullopt;
    return it->get<T>();
}

} // namespace

std::string_view request_kind_name(RequestKind kind) noexcept {
    switch (kind) {
    case RequestKind::Eval: return "eval";
    case RequestKind::Exec: return "exec";
    case RequestKind::Plot: return "plot";
    }
    return "unknown";
}

std::string encode_request(const BackendRequest& request) {
    json obj;
    obj["id"] = request.id;
    obj["kind"] = std::string(request_kind_name(request.kind));
    obj["code"] = request.code;
    if (request.format)
        obj["format"] = *request.format;
    if (request.save_path)
        obj["save_path"] = *request.save_path;
    return dump_line(obj);
}

BackendRequest decode_request(std::string_view line) {
    json obj = parse_line(line);
    try {
        BackendRequest req;
        req.id = obj.at("id").get<std::uint64_t>();
        std::string kind = obj.at("kind").get<std::string>();
        if (kind == "eval")
            req.kind = RequestKind::Eval;
        else if (kind == "exec")
            req.kind = RequestKind::Exec;
        else if (kind == "plot")
            req.kind = RequestKind::Plot;
        else
            throw Error(ErrorCode::ProtocolViolation, "unknown request kind '" + kind + "'");
        req.code = obj.at("code").get<std::string>();
        req.format = optional_field<std::string>(obj, "format");
        req.save_path = optional_field<std::string>(obj, "save_path");
        return req;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ProtocolViolation, std::string("bad request: ") + e.what());
    }
}

std::string encode_response(const BackendResponse& response) {
    json obj;
    obj["id"] = response.id;
    obj["ok"] = response.ok;
    if (response.latex)
        obj["latex"] = *response.latex;
    if (response.files)
        obj["files"] = *response.files;
    if (response.error)
        obj["error"] = *response.error;
    return dump_line(obj);
}

BackendResponse decode_response(std::string_view line) {
    json obj = parse_line(line);
    try {
        BackendResponse resp;
        resp.id = obj.at("id").get<std::uint64_t>();
        resp.ok = obj.at("ok").get<bool>();
        resp.latex = optional_field<std::string>(obj, "latex");
        resp.files = optional_field<std::vector<std::string>>(obj, "files");
        resp.error = optional_field<std::string>(obj, "error");
        return resp;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ProtocolViolation, std::string("bad response: ") + e.what());
    }
}

std::string encode_hello(std::string_view backend_id) {
    json obj;
    obj["hello"] = 1;
    obj["backend"] = std::string(backend_id);
    return dump_line(obj);
}

std::string decode_hello(std::string_view line) {
    json obj = parse_line(line);
    auto hello = obj.find("hello");
    auto backend = obj.find("backend");
    if (hello == obj.end() || *hello != 1 || backend == obj.end() || !backend->is_string())
        throw Error(ErrorCode::ProtocolViolation, "expected handshake {\"hello\":1,\"backend\":...}");
    return backend->get<std::string>();
}

void check_response(const BackendRequest& request, const BackendResponse& response) {
    auto fail = [&](const std::string& what) {
        throw Error(ErrorCode::ProtocolViolation,
                    "response " + std::to_string(response.id) + " to request " +
                        std::to_string(request.id) + ": " + what);
    };
    if (response.id != request.id)
        fail("id does not match the pending request");
    if (!response.ok)
        return;
    switch (request.kind) {
    case RequestKind::Eval:
        if (!response.latex)
            fail("successful eval carries no latex");
        break;
    case RequestKind::Exec:
        if (response.latex || response.files)
            fail("successful exec must not carry latex or files");
        break;
    case RequestKind::Plot:
        if (!response.files)
            fail("successful plot carries no files");
        break;
    }
}

} // namespace weavetex
