#include "hwime/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

namespace hwime::net {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  throw NetError(what + ": " + std::strerror(errno));
}

struct AddrInfo {
  addrinfo* list = nullptr;
  ~AddrInfo() {
    if (list) ::freeaddrinfo(list);
  }
};

AddrInfo resolve(const std::string& host, uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;

  AddrInfo result;
  std::string service = std::to_string(port);
  int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(),
                         &hints, &result.list);
  if (rc != 0) {
    throw NetError("cannot resolve " + host + ":" + service + ": " + gai_strerror(rc));
  }
  return result;
}

}  // namespace

std::pair<std::string, uint16_t> parse_endpoint(const std::string& endpoint) {
  size_t colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon + 1 >= endpoint.size()) {
    throw NetError("endpoint '" + endpoint + "' is not host:port");
  }
  uint16_t port = 0;
  const char* first = endpoint.data() + colon + 1;
  const char* last = endpoint.data() + endpoint.size();
  auto [end, ec] = std::from_chars(first, last, port);
  if (ec != std::errc() || end != last) {
    throw NetError("endpoint '" + endpoint + "' has a bad port");
  }
  return {endpoint.substr(0, colon), port};
}

TcpSocket::~TcpSocket() { close(); }

TcpSocket& TcpSocket::operator=(TcpSocket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

TcpSocket TcpSocket::connect(const std::string& host, uint16_t port) {
  AddrInfo addrs = resolve(host, port, false);
  int last_errno = ECONNREFUSED;
  for (addrinfo* ai = addrs.list; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_errno = errno;
      continue;
    }
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return TcpSocket(fd);
    }
    last_errno = errno;
    ::close(fd);
  }
  errno = last_errno;
  throw_errno("connect to " + host + ":" + std::to_string(port) + " failed");
}

void TcpSocket::send_all(std::span<const uint8_t> bytes) {
  size_t sent = 0;
  while (sent < bytes.size()) {
    ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("send failed");
    }
    sent += static_cast<size_t>(n);
  }
}

std::optional<size_t> TcpSocket::recv_some(std::span<uint8_t> buf,
                                           std::chrono::microseconds timeout) {
  pollfd pfd{fd_, POLLIN, 0};
  // poll() rounds to milliseconds; round the deadline up so a sub-millisecond
  // wait is a wait, not a spin.
  int timeout_ms = static_cast<int>((timeout.count() + 999) / 1000);
  int rc = ::poll(&pfd, 1, timeout_ms);
  if (rc < 0) {
    if (errno == EINTR) return recv_some(buf, timeout);
    throw_errno("poll failed");
  }
  if (rc == 0) return std::nullopt;

  ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
  if (n < 0) {
    if (errno == EINTR) return recv_some(buf, timeout);
    if (errno == ECONNRESET) return 0;  // peer died; treat as EOF
    throw_errno("recv failed");
  }
  return static_cast<size_t>(n);
}

void TcpSocket::abort_connection() {
  if (fd_ < 0) return;
  linger lg{1, 0};  // RST on close
  ::setsockopt(fd_, SOL_SOCKET, SO_LINGER, &lg, sizeof(lg));
  close();
}

void TcpSocket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

TcpListener::~TcpListener() { close(); }

TcpListener& TcpListener::operator=(TcpListener&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
    port_ = other.port_;
  }
  return *this;
}

TcpListener TcpListener::bind(const std::string& host, uint16_t port) {
  AddrInfo addrs = resolve(host, port, true);
  for (addrinfo* ai = addrs.list; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 8) == 0) {
      TcpListener listener;
      listener.fd_ = fd;

      sockaddr_storage local{};
      socklen_t len = sizeof(local);
      if (::getsockname(fd, reinterpret_cast<sockaddr*>(&local), &len) == 0) {
        if (local.ss_family == AF_INET) {
          listener.port_ = ntohs(reinterpret_cast<sockaddr_in*>(&local)->sin_port);
        } else if (local.ss_family == AF_INET6) {
          listener.port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&local)->sin6_port);
        }
      }
      return listener;
    }
    ::close(fd);
  }
  throw NetError("cannot bind " + host + ":" + std::to_string(port));
}

std::optional<TcpSocket> TcpListener::accept(std::chrono::milliseconds timeout) {
  pollfd pfd{fd_, POLLIN, 0};
  int rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (rc < 0) {
    if (errno == EINTR) return std::nullopt;
    throw_errno("poll on listener failed");
  }
  if (rc == 0) return std::nullopt;

  int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) {
    if (errno == EINTR || errno == ECONNABORTED) return std::nullopt;
    throw_errno("accept failed");
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return TcpSocket(fd);
}

void TcpListener::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

}  // namespace hwime::net
