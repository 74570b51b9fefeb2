#pragma once

#include "weavetex/backend.hpp"

#include <sys/types.h>

#include <filesystem>
#include <string>

namespace weavetex {

/// Backend speaking the line protocol with a child process started through
/// `/bin/sh -c <command_line>`. The child is started on the first request;
/// its first stdout line must be the handshake. The child's stderr is
/// inherited.
class SubprocessBackend final : public Backend {
public:
    explicit SubprocessBackend(std::string command_line,
                               std::filesystem::path working_dir = {});
    ~SubprocessBackend() override;

    SubprocessBackend(const SubprocessBackend&) = delete;
    SubprocessBackend& operator=(const SubprocessBackend&) = delete;

    /// Handshake id once started, `subprocess` before that.
    std::string id() const override;

    /// Throws BackendCrash when the child dies or closes its stdout, and
    /// ProtocolViolation on a malformed or mismatched response line.
    BackendResponse send(const BackendRequest& request) override;

    /// Starts the child and reads the handshake if not done yet.
    void start();

    bool running() const noexcept { return pid_ > 0; }

private:
    std::string read_line();
    void write_all(std::string_view bytes);
    [[noreturn]] void crashed(const std::string& what);
    void shutdown() noexcept;

    std::string command_line_;
    std::filesystem::path working_dir_;
    std::string backend_id_;
    std::string buffer_;
    pid_t pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    bool dead_ = false;
};

} // namespace weavetex
