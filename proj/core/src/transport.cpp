#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "davnav/protocol.hpp"

namespace davnav {

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

// Writes to a closed pipe must surface as errors, not kill the harness.
void ignore_sigpipe() {
  static const bool once = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)once;
}

}  // namespace

FdChannel::FdChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {
  ignore_sigpipe();
}

FdChannel::~FdChannel() {
  if (read_fd_ >= 0) ::close(read_fd_);
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
}

void FdChannel::send(std::string_view line) {
  std::string data(line);
  data += '\n';
  std::size_t off = 0;
  while (off < data.size()) {
    const auto n = ::write(write_fd_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(errno_text("write"));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> FdChannel::receive(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    const auto eol = buffer_.find('\n');
    if (eol != std::string::npos) {
      std::string line = buffer_.substr(0, eol);
      buffer_.erase(0, eol + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    pollfd pfd{read_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(errno_text("poll"));
    }
    if (ready == 0) return std::nullopt;
    char chunk[65536];
    const auto n = ::read(read_fd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(errno_text("read"));
    }
    if (n == 0) throw ProtocolError("peer closed the connection");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

ExecChannel::ExecChannel(const std::string& command) {
  int to_child[2], from_child[2];
  if (::pipe(to_child) != 0) throw Error(errno_text("pipe"));
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw Error(errno_text("pipe"));
  }
  pid_ = ::fork();
  if (pid_ < 0) throw Error(errno_text("fork"));
  if (pid_ == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  fds_ = std::make_unique<FdChannel>(from_child[0], to_child[1]);
}

ExecChannel::~ExecChannel() {
  fds_.reset();  // closing stdin lets a well-behaved child exit
  if (pid_ > 0) {
    int status = 0;
    for (int i = 0; i < 200; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) return;
      ::usleep(10000);
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
  }
}

namespace {

addrinfo* resolve(const std::string& host, int port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const auto service = std::to_string(port);
  const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res);
  if (rc != 0) throw Error("cannot resolve " + host + ": " + ::gai_strerror(rc));
  return res;
}

}  // namespace

std::unique_ptr<LineChannel> tcp_accept(const std::string& host, int port,
                                        std::chrono::milliseconds timeout) {
  ignore_sigpipe();
  addrinfo* res = resolve(host, port, true);
  int listener = -1;
  for (auto* ai = res; ai; ai = ai->ai_next) {
    listener = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (listener < 0) continue;
    const int one = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(listener, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(listener, 1) == 0) break;
    ::close(listener);
    listener = -1;
  }
  ::freeaddrinfo(res);
  if (listener < 0) throw Error(errno_text("listen"));
  pollfd pfd{listener, POLLIN, 0};
  const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (ready <= 0) {
    ::close(listener);
    throw ProtocolError("no agent connected to tcp:" + host + ":" + std::to_string(port));
  }
  const int conn = ::accept(listener, nullptr, nullptr);
  ::close(listener);
  if (conn < 0) throw Error(errno_text("accept"));
  return std::make_unique<FdChannel>(conn, conn);
}

std::unique_ptr<LineChannel> tcp_connect(const std::string& host, int port) {
  ignore_sigpipe();
  addrinfo* res = resolve(host, port, false);
  int fd = -1;
  for (auto* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw Error(errno_text("connect"));
  return std::make_unique<FdChannel>(fd, fd);
}

std::unique_ptr<LineChannel> open_endpoint(const std::string& spec,
                                           std::chrono::milliseconds timeout) {
  if (spec.rfind("exec:", 0) == 0) return std::make_unique<ExecChannel>(spec.substr(5));
  if (spec.rfind("tcp:", 0) == 0) {
    const auto rest = spec.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) throw ConfigError("endpoint must be tcp:<host>:<port>");
    return tcp_accept(rest.substr(0, colon), std::stoi(rest.substr(colon + 1)), timeout);
  }
  throw ConfigError("unknown endpoint '" + spec + "'");
}

}  // namespace davnav
