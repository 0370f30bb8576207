// Copyright 2026 The litscreen Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>
#include <sstream>

#include <httplib.h>

#include "litscreen/bridge.hpp"
#include "litscreen/stub_sidecar.hpp"

namespace litscreen {
namespace {

class HttpTransport final : public Transport {
 public:
  HttpTransport(const std::string& base_url, std::chrono::milliseconds timeout) : base_url_(base_url), timeout_(timeout) {
    if (base_url_.rfind("http://", 0) != 0 && base_url_.rfind("https://", 0) != 0)
      throw Error("sidecar endpoint must start with http:// or https://: " + base_url_);
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  }

  std::string call(std::string_view endpoint, const std::string& request) override {
    // One client per call keeps the transport usable from several threads.
    httplib::Client client(base_url_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    const std::string path = "/v1/" + std::string(endpoint);
    auto result = client.Post(path, request, "application/json");
    if (!result) {
      throw SidecarUnavailable("POST " + base_url_ + path + " failed: " + httplib::to_string(result.error()));
    }
    if (result->status == 502 || result->status == 503 || result->status == 504)
      throw SidecarUnavailable("POST " + base_url_ + path + " returned HTTP " + std::to_string(result->status));
    // Error envelopes travel with 4xx/5xx statuses; the client reads them.
    return result->body;
  }

 private:
  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

class SubprocessTransport final : public Transport {
 public:
  explicit SubprocessTransport(std::vector<std::string> argv) : argv_(std::move(argv)) {
    if (argv_.empty()) throw Error("subprocess transport needs a program");
  }

  ~SubprocessTransport() override { stop(); }

  std::string call(std::string_view /*endpoint*/, const std::string& request) override {
    std::lock_guard lock(mutex_);
    if (pid_ <= 0) start();
    std::string line = request;
    line.push_back('\n');
    if (!write_all(line)) {
      stop();
      throw SidecarUnavailable("sidecar process '" + argv_[0] + "' closed its input");
    }
    std::string response;
    if (!read_line(response)) {
      stop();
      throw SidecarUnavailable("sidecar process '" + argv_[0] + "' exited without responding");
    }
    return response;
  }

 private:
  void start() {
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0) throw SidecarUnavailable(std::string("pipe: ") + std::strerror(errno));
    if (pipe(from_child) != 0) {
      close(to_child[0]);
      close(to_child[1]);
      throw SidecarUnavailable(std::string("pipe: ") + std::strerror(errno));
    }
    std::vector<char*> args;
    for (auto& a : argv_) args.push_back(a.data());
    args.push_back(nullptr);

    const pid_t pid = fork();
    if (pid < 0) throw SidecarUnavailable(std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execvp(args[0], args.data());
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    fcntl(to_child[1], F_SETFD, FD_CLOEXEC);
    fcntl(from_child[0], F_SETFD, FD_CLOEXEC);
    pid_ = pid;
    write_fd_ = to_child[1];
    read_fd_ = from_child[0];
    buffer_.clear();
  }

  void stop() {
    if (write_fd_ >= 0) close(write_fd_);
    if (read_fd_ >= 0) close(read_fd_);
    write_fd_ = read_fd_ = -1;
    if (pid_ > 0) {
      int status = 0;
      waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }

  bool write_all(const std::string& data) {
    // A vanished child must not kill this process with SIGPIPE.
    struct sigaction ignore{}, previous{};
    ignore.sa_handler = SIG_IGN;
    sigaction(SIGPIPE, &ignore, &previous);
    std::size_t done = 0;
    bool ok = true;
    while (done < data.size()) {
      const ssize_t n = write(write_fd_, data.data() + done, data.size() - done);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        ok = false;
        break;
      }
      done += static_cast<std::size_t>(n);
    }
    sigaction(SIGPIPE, &previous, nullptr);
    return ok;
  }

  bool read_line(std::string& line) {
    for (;;) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return true;
      }
      char chunk[65536];
      const ssize_t n = read(read_fd_, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return false;
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  std::vector<std::string> argv_;
  std::mutex mutex_;
  pid_t pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  std::string buffer_;
};

class InProcessTransport final : public Transport {
 public:
  explicit InProcessTransport(std::shared_ptr<StubSidecar> sidecar) : sidecar_(std::move(sidecar)) {
    if (!sidecar_) throw Error("in-process transport needs a sidecar");
  }
  std::string call(std::string_view endpoint, const std::string& request) override {
    return sidecar_->handle(endpoint, request);
  }

 private:
  std::shared_ptr<StubSidecar> sidecar_;
};

}  // namespace

std::shared_ptr<Transport> make_http_transport(const std::string& base_url, std::chrono::milliseconds timeout) {
  return std::make_shared<HttpTransport>(base_url, timeout);
}

std::shared_ptr<Transport> make_subprocess_transport(std::vector<std::string> argv) {
  return std::make_shared<SubprocessTransport>(std::move(argv));
}

std::shared_ptr<Transport> make_in_process_transport(std::shared_ptr<StubSidecar> sidecar) {
  return std::make_shared<InProcessTransport>(std::move(sidecar));
}

std::shared_ptr<Transport> make_transport(const std::string& endpoint) {
  if (endpoint == "stub") return make_in_process_transport(std::make_shared<StubSidecar>());
  if (endpoint.rfind("exec:", 0) == 0) {
    std::istringstream words(endpoint.substr(5));
    std::vector<std::string> argv;
    for (std::string w; words >> w;) argv.push_back(w);
    return make_subprocess_transport(std::move(argv));
  }
  return make_http_transport(endpoint);
}

}  // namespace litscreen
