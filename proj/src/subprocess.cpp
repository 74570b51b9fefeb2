#include "weavetex/subprocess.hpp"

#include "weavetex/error.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace weavetex {

namespace {

void close_fd(int& fd) noexcept {
    if (fd >= 0) {
        ::close(fd);
        fd = -1;
    }
}

std::string describe_status(int status) {
    if (WIFEXITED(status))
        return "exited with status " + std::to_string(WEXITSTATUS(status));
    if (WIFSIGNALED(status))
        return "killed by signal " + std::to_string(WTERMSIG(status));
    return "stopped";
}

} // namespace

SubprocessBackend::SubprocessBackend(std::string command_line, std::filesystem::path working_dir)
    : command_line_(std::move(command_line)), working_dir_(std::move(working_dir)) {}

SubprocessBackend::~SubprocessBackend() { shutdown(); }

std::string SubprocessBackend::id() const {
    return backend_id_.empty() ? std::string("subprocess") : backend_id_;
}

void SubprocessBackend::start() {
    if (pid_ > 0)
        return;
    if (dead_)
        throw Error(ErrorCode::BackendCrash, "backend session already terminated");

    // A write to a child that has exited must surface as EPIPE, not kill us.
    struct sigaction current {};
    if (::sigaction(SIGPIPE, nullptr, &current) == 0 && current.sa_handler == SIG_DFL)
        ::signal(SIGPIPE, SIG_IGN);

    int in_pipe[2];
    int out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0)
        throw Error(ErrorCode::BackendCrash, std::string("pipe: ") + std::strerror(errno));
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        throw Error(ErrorCode::BackendCrash, std::string("pipe: ") + std::strerror(errno));
    }

    std::string workdir = working_dir_.string();
    pid_t pid = ::fork();
    if (pid < 0) {
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]})
            ::close(fd);
        throw Error(ErrorCode::BackendCrash, std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::signal(SIGPIPE, SIG_DFL);
        if (!workdir.empty() && ::chdir(workdir.c_str()) != 0)
            ::_exit(126);
        ::execl("/bin/sh", "sh", "-c", command_line_.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }

    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];

    try {
        backend_id_ = decode_hello(read_line());
    } catch (const Error& e) {
        if (e.code() != ErrorCode::BackendCrash) {
            shutdown();
            dead_ = true;
        }
        throw;
    }
}

BackendResponse SubprocessBackend::send(const BackendRequest& request) {
    start();
    write_all(encode_request(request) + "\n");
    std::string line = read_line();
    try {
        BackendResponse response = decode_response(line);
        check_response(request, response);
        return response;
    } catch (const Error&) {
        // The stream can no longer be trusted to stay in step.
        shutdown();
        dead_ = true;
        throw;
    }
}

std::string SubprocessBackend::read_line() {
    for (;;) {
        std::size_t nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        char chunk[4096];
        ssize_t n = ::read(from_child_, chunk, sizeof chunk);
        if (n > 0) {
            buffer_.append(chunk, static_cast<std::size_t>(n));
        } else if (n == 0) {
            crashed("backend closed its output");
        } else if (errno != EINTR) {
            crashed(std::string("read from backend: ") + std::strerror(errno));
        }
    }
}

void SubprocessBackend::write_all(std::string_view bytes) {
    while (!bytes.empty()) {
        ssize_t n = ::write(to_child_, bytes.data(), bytes.size());
        if (n >= 0) {
            bytes.remove_prefix(static_cast<std::size_t>(n));
        } else if (errno != EINTR) {
            crashed(std::string("write to backend: ") + std::strerror(errno));
        }
    }
}

void SubprocessBackend::crashed(const std::string& what) {
    std::string detail = what;
    close_fd(to_child_);
    close_fd(from_child_);
    if (pid_ > 0) {
        int status = 0;
        if (::waitpid(pid_, &status, 0) == pid_)
            detail += " (" + describe_status(status) + ")";
        pid_ = -1;
    }
    dead_ = true;
    throw Error(ErrorCode::BackendCrash, detail);
}

void SubprocessBackend::shutdown() noexcept {
    close_fd(to_child_);
    close_fd(from_child_);
    if (pid_ > 0) {
        // Closing stdin is the normal end-of-session signal; give the child a
        // moment, then make sure it does not outlive us.
        int status = 0;
        for (int i = 0; i < 50; ++i) {
            pid_t r = ::waitpid(pid_, &status, WNOHANG);
            if (r == pid_ || r < 0) {
                pid_ = -1;
                return;
            }
            ::usleep(10000);
        }
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
        pid_ = -1;
    }
}

} // namespace weavetex
