#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "davnav/agent.hpp"

namespace davnav {

inline constexpr int kProtocolVersion = 1;

class ProtocolError : public Error {
 public:
  using Error::Error;
};

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Throws ProtocolError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

// Little-endian float32 tensor payloads.
std::string encode_tensor(std::span<const float> values);
std::vector<float> decode_tensor(std::string_view base64, std::size_t expected_count);

// Message builders and parsers. Every message is one JSON object on one
// line with "kind" and "protocol_version" members.
std::string hello_message(std::string_view agent_name);
std::string episode_start_message(const EpisodeInfo& info);
std::string observation_message(const Observation& obs, const Feedback& feedback);
std::string action_message(const Action& action);
std::string episode_end_message(std::string_view episode_id, Outcome outcome,
                                const EpisodeScore* score);
std::string shutdown_message();
std::string error_message(std::string_view text);

struct Message {
  std::string kind;
  std::string body;  // the full line, for kind-specific parsing
};
Message parse_message(std::string_view line);

EpisodeInfo parse_episode_start(std::string_view line);
// Observation plus the feedback of the previous decision.
std::pair<Observation, Feedback> parse_observation(std::string_view line);
// Throws ProtocolError("index out of range") for waypoints outside [0, 8].
Action parse_action(std::string_view line);
std::string parse_hello(std::string_view line);  // agent or server name
Outcome parse_episode_end(std::string_view line);

// Bidirectional line transport.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void send(std::string_view line) = 0;
  // nullopt on timeout; throws ProtocolError on EOF or I/O failure.
  virtual std::optional<std::string> receive(std::chrono::milliseconds timeout) = 0;
};

// Owns a read and a write descriptor (they may be the same socket).
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd);
  ~FdChannel() override;
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void send(std::string_view line) override;
  std::optional<std::string> receive(std::chrono::milliseconds timeout) override;

 private:
  int read_fd_;
  int write_fd_;
  std::string buffer_;
};

// Spawns `/bin/sh -c command` with its stdin/stdout connected to the
// channel. The child is reaped on destruction.
class ExecChannel : public LineChannel {
 public:
  explicit ExecChannel(const std::string& command);
  ~ExecChannel() override;
  void send(std::string_view line) override { fds_->send(line); }
  std::optional<std::string> receive(std::chrono::milliseconds timeout) override {
    return fds_->receive(timeout);
  }

 private:
  std::unique_ptr<FdChannel> fds_;
  int pid_ = -1;
};

// Listens on host:port and accepts a single connection.
std::unique_ptr<LineChannel> tcp_accept(const std::string& host, int port,
                                        std::chrono::milliseconds timeout);
// Agent side of a TCP session.
std::unique_ptr<LineChannel> tcp_connect(const std::string& host, int port);

// "exec:<command>" or "tcp:<host>:<port>".
std::unique_ptr<LineChannel> open_endpoint(const std::string& spec,
                                           std::chrono::milliseconds timeout);

// Harness-side proxy for an agent on the other end of a channel. The hello
// exchange happens in the constructor.
class RemoteAgent : public Agent {
 public:
  explicit RemoteAgent(std::unique_ptr<LineChannel> channel,
                       std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~RemoteAgent() override;

  std::string name() const override { return name_; }
  void begin_episode(const EpisodeInfo& info, const EpisodeConfig* privileged) override;
  Action act(const Observation& obs, const Feedback& feedback) override;
  void end_episode(Outcome outcome, const EpisodeScore* score) override;

 private:
  std::string await(std::string_view expected_kind);

  std::unique_ptr<LineChannel> channel_;
  std::chrono::milliseconds timeout_;
  std::string name_;
  std::string episode_id_;
  bool closed_ = false;
};

// Agent-side session loop: says hello, then answers every observation with
// `agent.act` until shutdown or end of input. Returns the number of
// episodes played.
int run_agent_client(LineChannel& channel, Agent& agent,
                     std::chrono::milliseconds timeout = std::chrono::hours(1));

}  // namespace davnav
