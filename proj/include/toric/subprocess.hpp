#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <sys/types.h>

namespace toric {

/// A child started through /bin/sh -c with its stdin and stdout on pipes.
/// stderr is inherited. Line-oriented I/O with timeouts.
class ChildProcess {
 public:
  /// Throws SpawnFailure.
  explicit ChildProcess(const std::string& command);
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  /// Writes `line` plus a newline. Returns false if the child closed its input
  /// or the deadline passed.
  bool write_line(const std::string& line, std::chrono::milliseconds timeout);

  /// Next line without its newline; nullopt on timeout. Sets eof() when the
  /// child closed its output.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);
  bool eof() const noexcept { return eof_; }

  /// Closes the child's stdin and waits up to `grace` before killing it.
  /// Returns the exit status as reported by waitpid, or -1.
  int shutdown(std::chrono::milliseconds grace = std::chrono::milliseconds(2000));

  pid_t pid() const noexcept { return pid_; }

 private:
  pid_t pid_ = -1;
  int in_fd_ = -1;   // our end of the child's stdin
  int out_fd_ = -1;  // our end of the child's stdout
  std::string buffer_;
  bool eof_ = false;
  bool reaped_ = false;
  int status_ = -1;
};

}  // namespace toric
