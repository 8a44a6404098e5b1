#pragma once

#include <atomic>
#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "spence/dimacs.hpp"
#include "spence/solver.hpp"

extern char** environ;

namespace spence {

namespace detail {

struct ProcessOutput {
    std::string stdoutText;
    int exitCode = -1; // -1 when terminated by a signal
};

// Removes the file on scope exit.
class TempFile {
public:
    explicit TempFile(const std::string& contents) {
        static std::atomic<std::uint64_t> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("spence-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".cnf");
        std::ofstream out(path_, std::ios::binary);
        if (!out)
            throw ExternalProcessError("cannot create temporary file " + path_.string());
        out << contents;
        if (!out.flush())
            throw ExternalProcessError("cannot write temporary file " + path_.string());
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// Runs `/bin/sh -c "exec <command> <file>"` in its own process group and
// collects stdout. On deadline the whole group is killed and TimeoutError thrown.
inline ProcessOutput runSolverProcess(const std::string& command, const std::filesystem::path& file,
                                      const SolveOptions& opts) {
    int fds[2];
    if (::pipe(fds) != 0)
        throw ExternalProcessError(std::string("pipe: ") + std::strerror(errno));

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, fds[0]);
    posix_spawn_file_actions_addclose(&actions, fds[1]);
    posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);

    posix_spawnattr_t attr;
    posix_spawnattr_init(&attr);
    posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
    posix_spawnattr_setpgroup(&attr, 0);

    std::string script = "exec " + command + " '" + file.string() + "'";
    const char* argv[] = {"/bin/sh", "-c", script.c_str(), nullptr};
    pid_t pid = 0;
    int rc = ::posix_spawn(&pid, "/bin/sh", &actions, &attr, const_cast<char* const*>(argv), environ);
    posix_spawn_file_actions_destroy(&actions);
    posix_spawnattr_destroy(&attr);
    ::close(fds[1]);
    if (rc != 0) {
        ::close(fds[0]);
        throw ExternalProcessError("cannot spawn '" + command + "': " + std::strerror(rc));
    }

    ProcessOutput out;
    char buf[4096];
    bool timedOut = false;
    for (;;) {
        int waitMs = -1;
        if (opts.deadline) {
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*opts.deadline - Clock::now()).count();
            if (left <= 0) {
                timedOut = true;
                break;
            }
            waitMs = static_cast<int>(std::min<long long>(left, 1000));
        }
        pollfd pfd{fds[0], POLLIN, 0};
        int pr = ::poll(&pfd, 1, waitMs);
        if (pr < 0 && errno == EINTR)
            continue;
        if (pr == 0)
            continue;
        ssize_t got = ::read(fds[0], buf, sizeof buf);
        if (got < 0 && errno == EINTR)
            continue;
        if (got <= 0)
            break;
        out.stdoutText.append(buf, static_cast<std::size_t>(got));
    }
    ::close(fds[0]);
    if (timedOut)
        ::kill(-pid, SIGKILL);

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (timedOut)
        throw TimeoutError();
    out.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

} // namespace detail

/// Interprets SAT-competition output ("s ..." status line, "v ..." model lines)
/// against `f`. A claimed model is completed with false for variables the
/// solver did not mention and must satisfy `f`.
inline SolveResult parseCompetitionOutput(const CnfFormula& f, const std::string& text, int exitCode = 0) {
    enum class Verdict { None, Sat, Unsat, Unknown } verdict = Verdict::None;
    Assignment model(f.numVariables());
    bool sawModel = false;

    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.rfind("s ", 0) == 0) {
            std::string word = line.substr(2);
            word.erase(0, word.find_first_not_of(' '));
            word.erase(word.find_last_not_of(' ') + 1);
            Verdict v = word == "SATISFIABLE"     ? Verdict::Sat
                        : word == "UNSATISFIABLE" ? Verdict::Unsat
                        : word == "UNKNOWN"       ? Verdict::Unknown
                                                  : Verdict::None;
            if (v == Verdict::None)
                throw ExternalOutputError("unrecognized status line '" + line + "'");
            if (verdict != Verdict::None && verdict != v)
                throw ExternalOutputError("conflicting status lines");
            verdict = v;
        } else if (line.rfind("v", 0) == 0 && (line.size() == 1 || line[1] == ' ')) {
            std::istringstream iss(line.substr(1));
            std::string tok;
            while (iss >> tok) {
                long long x = 0;
                try {
                    std::size_t used = 0;
                    x = std::stoll(tok, &used);
                    if (used != tok.size())
                        throw std::invalid_argument(tok);
                } catch (const std::exception&) {
                    throw ExternalOutputError("bad model token '" + tok + "'");
                }
                if (x == 0)
                    continue;
                long long var = x < 0 ? -x : x;
                if (var > f.numVariables())
                    throw SolverIntegrityError("model mentions variable " + std::to_string(var) +
                                               " beyond the formula's " + std::to_string(f.numVariables()));
                model.set(static_cast<Variable>(var), x > 0);
                sawModel = true;
            }
        }
    }

    SolveResult r;
    switch (verdict) {
    case Verdict::Unsat:
        r.status = SolveStatus::Unsat;
        return r;
    case Verdict::Sat: {
        if (!sawModel)
            throw SolverIntegrityError("solver claimed SAT without a model");
        for (Variable v = 1; v <= f.numVariables(); ++v)
            if (!model.isAssigned(v))
                model.set(v, false);
        if (!evaluate(f, model))
            throw SolverIntegrityError("solver claimed SAT but its model falsifies the formula");
        r.status = SolveStatus::Sat;
        r.model = std::move(model);
        return r;
    }
    case Verdict::Unknown:
        throw ExternalOutputError("solver answered UNKNOWN");
    case Verdict::None:
        break;
    }
    if (exitCode != 0 && exitCode != 10 && exitCode != 20)
        throw ExternalProcessError("solver exited abnormally (" +
                                   (exitCode < 0 ? std::string("signal") : "status " + std::to_string(exitCode)) +
                                   ") without a verdict");
    throw ExternalOutputError("no status line in solver output");
}

/// Runs an external DIMACS solver on `f`. The command gets the path of a
/// temporary DIMACS file appended as its last argument.
inline SolveResult solveExternal(const CnfFormula& f, const std::string& solverCommand, const SolveOptions& opts = {}) {
    if (solverCommand.empty())
        throw PreconditionError("empty solver command");
    detail::TempFile file(dimacs::write(f));
    auto out = detail::runSolverProcess(solverCommand, file.path(), opts);
    if (out.exitCode < 0)
        throw ExternalProcessError("solver '" + solverCommand + "' was terminated by a signal");
    return parseCompetitionOutput(f, out.stdoutText, out.exitCode);
}

} // namespace spence
