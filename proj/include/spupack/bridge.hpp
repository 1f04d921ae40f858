// Copyright 2026 The spupack Authors
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

// Predictor bridge: line-delimited JSON over a child process's stdin/stdout.
//
//   request  {"order_id": "...", "rhs": {"A": 2}, "initial_column_ids": [...],
//             "candidates": [{"id": "...", "features": [21 numbers]}]}
//   response {"order_id": "...", "selected": ["id", ...]}
//
// One request is in flight per process. A response is accepted only as a
// whole: it must echo the order id and select only known candidates.

#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "spupack/features.hpp"

namespace spupack {

class BridgeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PredictRequest {
  std::string order_id;
  ItemCounts rhs;
  std::vector<std::string> initial_column_ids;
  std::vector<CandidateFeatures> candidates;
};

inline std::string encode_request(const PredictRequest& r) {
  nlohmann::json j{{"order_id", r.order_id},
                   {"rhs", r.rhs},
                   {"initial_column_ids", r.initial_column_ids},
                   {"candidates", candidates_to_json(r.candidates)}};
  return j.dump();
}

inline PredictRequest decode_request(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  PredictRequest r;
  r.order_id = j.at("order_id").get<std::string>();
  r.rhs = j.at("rhs").get<ItemCounts>();
  r.initial_column_ids = j.at("initial_column_ids").get<std::vector<std::string>>();
  r.candidates = candidates_from_json(j.at("candidates"));
  return r;
}

// Validates a response line against its request; throws BridgeError.
inline std::vector<std::string> decode_response(const std::string& line, const PredictRequest& request) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const std::exception& e) {
    throw BridgeError(std::string("response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("order_id") || !j.at("order_id").is_string()) {
    throw BridgeError("response lacks a string order_id");
  }
  if (j.at("order_id").get<std::string>() != request.order_id) {
    throw BridgeError("response order_id " + j.at("order_id").get<std::string>() + " does not match request " +
                      request.order_id);
  }
  if (!j.contains("selected") || !j.at("selected").is_array()) {
    throw BridgeError("response lacks a selected array");
  }
  std::set<std::string> known;
  for (const auto& c : request.candidates) known.insert(c.id);
  std::vector<std::string> selected;
  std::set<std::string> seen;
  for (const auto& e : j.at("selected")) {
    if (!e.is_string()) throw BridgeError("selected ids must be strings");
    const auto id = e.get<std::string>();
    if (!known.contains(id)) throw BridgeError("selected id " + id + " is not a candidate");
    if (seen.insert(id).second) selected.push_back(id);
  }
  return selected;
}

// A child process `/bin/sh -c command` with piped stdin and stdout.
class PredictorProcess {
 public:
  explicit PredictorProcess(std::string command) : command_(std::move(command)) { spawn(); }
  PredictorProcess(const PredictorProcess&) = delete;
  PredictorProcess& operator=(const PredictorProcess&) = delete;
  ~PredictorProcess() { shutdown(); }

  // Sends one line and waits for one line back. nullopt on timeout or if
  // the child exits; the child is then restarted so a late answer can never
  // be read as the reply to a later request.
  std::optional<std::string> exchange(const std::string& line, std::chrono::milliseconds timeout) {
    if (pid_ <= 0) spawn();
    std::string payload = line + '\n';
    const char* p = payload.data();
    std::size_t left = payload.size();
    while (left > 0) {
      const ssize_t w = ::write(to_child_, p, left);
      if (w < 0) {
        if (errno == EINTR) continue;
        restart();
        return std::nullopt;
      }
      p += w;
      left -= static_cast<std::size_t>(w);
    }
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string out = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return out;
      }
      const auto now = std::chrono::steady_clock::now();
      if (now >= deadline) {
        restart();
        return std::nullopt;
      }
      const auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
      pollfd pfd{from_child_, POLLIN, 0};
      const int rc = ::poll(&pfd, 1, static_cast<int>(std::max<long long>(1, wait_ms)));
      if (rc < 0 && errno == EINTR) continue;
      if (rc <= 0) continue;
      char chunk[4096];
      const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        restart();
        return std::nullopt;
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  void spawn() {
    int in_pipe[2];
    int out_pipe[2];
    if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0) throw BridgeError("pipe failed");
    const pid_t pid = ::fork();
    if (pid < 0) throw BridgeError("fork failed");
    if (pid == 0) {
      ::dup2(in_pipe[0], STDIN_FILENO);
      ::dup2(out_pipe[1], STDOUT_FILENO);
      ::close(in_pipe[0]);
      ::close(in_pipe[1]);
      ::close(out_pipe[0]);
      ::close(out_pipe[1]);
      ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    ::fcntl(to_child_, F_SETFD, FD_CLOEXEC);
    ::fcntl(from_child_, F_SETFD, FD_CLOEXEC);
    pid_ = pid;
    buffer_.clear();
  }

  void shutdown() {
    if (pid_ <= 0) return;
    ::close(to_child_);
    ::close(from_child_);
    // Give a well-behaved child a moment to exit on EOF before killing it.
    for (int i = 0; i < 20; ++i) {
      if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      ::usleep(5000);
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }

  void restart() {
    shutdown();
    spawn();
  }

  std::string command_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

}  // namespace spupack
