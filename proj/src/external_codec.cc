// Copyright 2026 The SSC Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ssc/external_codec.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <mutex>
#include <sstream>

#include "ssc/bytes.h"
#include "ssc/status.h"

namespace ssc {
namespace {

class ChildLimiter {
 public:
  void Acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return active_ < limit_; });
    ++active_;
  }
  void Release() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      --active_;
    }
    cv_.notify_one();
  }
  void SetLimit(int limit) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      limit_ = limit < 1 ? 1 : limit;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int active_ = 0;
  int limit_ = 4;
};

ChildLimiter& Limiter() {
  static ChildLimiter limiter;
  return limiter;
}

struct Pipe {
  int fd[2] = {-1, -1};
  ~Pipe() {
    for (int f : fd)
      if (f >= 0) close(f);
  }
  void CloseEnd(int i) {
    if (fd[i] >= 0) close(fd[i]);
    fd[i] = -1;
  }
};

std::string Tail(const std::string& s, size_t n = 400) {
  return s.size() <= n ? s : s.substr(s.size() - n);
}

struct ChildOutput {
  std::vector<uint8_t> out;
  std::string err;
  int status = 0;
};

ChildOutput RunChild(const std::vector<std::string>& argv,
                     const std::string& input, double timeout_s) {
  Pipe in, out, err;
  if (pipe2(in.fd, O_CLOEXEC) || pipe2(out.fd, O_CLOEXEC) ||
      pipe2(err.fd, O_CLOEXEC)) {
    Fail(ErrorCode::kIo, std::string("pipe: ") + std::strerror(errno));
  }
  const pid_t pid = fork();
  if (pid < 0) Fail(ErrorCode::kIo, std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(in.fd[0], STDIN_FILENO);
    dup2(out.fd[1], STDOUT_FILENO);
    dup2(err.fd[1], STDERR_FILENO);
    for (Pipe* p : {&in, &out, &err}) {
      close(p->fd[0]);
      close(p->fd[1]);
    }
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }
  in.CloseEnd(0);
  out.CloseEnd(1);
  err.CloseEnd(1);
  for (int f : {in.fd[1], out.fd[0], err.fd[0]}) {
    fcntl(f, F_SETFL, fcntl(f, F_GETFL) | O_NONBLOCK);
  }

  ChildOutput res;
  size_t written = 0;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_s);
  bool timed_out = false;
  char buf[65536];
  while (out.fd[0] >= 0 || err.fd[0] >= 0) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    std::vector<pollfd> fds;
    if (in.fd[1] >= 0) fds.push_back({in.fd[1], POLLOUT, 0});
    if (out.fd[0] >= 0) fds.push_back({out.fd[0], POLLIN, 0});
    if (err.fd[0] >= 0) fds.push_back({err.fd[0], POLLIN, 0});
    const int ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
    const int rc = poll(fds.data(), fds.size(), ms);
    if (rc < 0 && errno != EINTR) break;
    for (const pollfd& p : fds) {
      if (!p.revents) continue;
      if (p.fd == in.fd[1]) {
        const ssize_t n = write(p.fd, input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<size_t>(n);
        if (n < 0 && errno != EAGAIN) written = input.size();  // child closed stdin
        if (written >= input.size()) in.CloseEnd(1);
      } else {
        const ssize_t n = read(p.fd, buf, sizeof(buf));
        if (n > 0) {
          if (p.fd == out.fd[0]) {
            res.out.insert(res.out.end(), buf, buf + n);
          } else {
            res.err.append(buf, static_cast<size_t>(n));
          }
        } else if (n == 0 || errno != EAGAIN) {
          if (p.fd == out.fd[0]) out.CloseEnd(0); else err.CloseEnd(0);
        }
      }
    }
  }
  if (timed_out) kill(pid, SIGKILL);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (timed_out) {
    Fail(ErrorCode::kProtocol, "external codec timed out after " +
                                   std::to_string(timeout_s) + " s; stderr: " +
                                   Tail(res.err));
  }
  res.status = status;
  return res;
}

struct LimiterGuard {
  LimiterGuard() { Limiter().Acquire(); }
  ~LimiterGuard() { Limiter().Release(); }
};

}  // namespace

std::vector<std::string> SplitCommand(const std::string& cmd) {
  std::istringstream is(cmd);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

void SetExternalCodecConcurrency(int max_children) {
  Limiter().SetLimit(max_children);
}

CodecResult ExternalCode(const ImageRGB& img, const std::string& adapter,
                         int quality, const ExternalCodecOptions& opts) {
  std::vector<std::string> argv = SplitCommand(adapter);
  if (argv.empty()) Fail(ErrorCode::kInvalidArgument, "empty codec command");
  argv.push_back("--quality");
  argv.push_back(std::to_string(quality));

  // A child that exits early must not take us down with SIGPIPE.
  static std::once_flag sigpipe_once;
  std::call_once(sigpipe_once, [] { signal(SIGPIPE, SIG_IGN); });

  ChildOutput child;
  {
    LimiterGuard guard;
    child = RunChild(argv, EncodePpm(img), opts.timeout_seconds);
  }
  if (!WIFEXITED(child.status) || WEXITSTATUS(child.status) != 0) {
    const int code = WIFEXITED(child.status) ? WEXITSTATUS(child.status) : -1;
    Fail(ErrorCode::kProtocol, "external codec '" + argv[0] +
                                   "' failed with status " + std::to_string(code) +
                                   "; stderr: " + Tail(child.err));
  }
  if (child.out.size() < 8) {
    Fail(ErrorCode::kProtocol, "external codec reply shorter than the size field");
  }
  ByteReader r(child.out);
  const uint64_t coded_bytes = r.U64();
  ImageRGB recon;
  size_t consumed = 0;
  try {
    recon = DecodePpmPrefix(std::span<const uint8_t>(child.out).subspan(8), &consumed);
  } catch (const Error& e) {
    Fail(ErrorCode::kProtocol, std::string("external codec returned a bad PPM: ") +
                                   e.what() + "; stderr: " + Tail(child.err));
  }
  if (!recon.SameDims(img)) {
    Fail(ErrorCode::kProtocol, "external codec changed the image dimensions");
  }
  if (8 + consumed != child.out.size()) {
    Fail(ErrorCode::kProtocol, "external codec wrote trailing bytes");
  }
  CodecResult res{std::move(recon), 8.0 * static_cast<double>(coded_bytes), 0.0};
  res.bpp = res.bits / static_cast<double>(img.plane_size());
  return res;
}

}  // namespace ssc
