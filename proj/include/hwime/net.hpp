#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace hwime::net {

constexpr uint16_t kDefaultPort = 7431;

class NetError : public std::runtime_error {
 public:
  explicit NetError(const std::string& what) : std::runtime_error(what) {}
};

// "host:port" -> pair; throws NetError on malformed input.
std::pair<std::string, uint16_t> parse_endpoint(const std::string& endpoint);

// Blocking stream socket with RAII ownership and poll-based receive timeouts.
class TcpSocket {
 public:
  TcpSocket() = default;
  explicit TcpSocket(int fd) : fd_(fd) {}
  ~TcpSocket();

  TcpSocket(TcpSocket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  TcpSocket& operator=(TcpSocket&& other) noexcept;
  TcpSocket(const TcpSocket&) = delete;
  TcpSocket& operator=(const TcpSocket&) = delete;

  static TcpSocket connect(const std::string& host, uint16_t port);

  bool valid() const { return fd_ >= 0; }

  // Sends the whole buffer; throws NetError on a broken connection.
  void send_all(std::span<const uint8_t> bytes);

  // Receives at most buf.size() bytes. Returns the count (0 on orderly EOF)
  // or nullopt when the timeout elapses first. Zero timeout = pure poll.
  std::optional<size_t> recv_some(std::span<uint8_t> buf,
                                  std::chrono::microseconds timeout);

  // Hard close: RST-style teardown used by the fault hooks.
  void abort_connection();
  void close();

 private:
  int fd_ = -1;
};

class TcpListener {
 public:
  TcpListener() = default;
  ~TcpListener();

  TcpListener(TcpListener&& other) noexcept
      : fd_(std::exchange(other.fd_, -1)), port_(std::exchange(other.port_, 0)) {}
  TcpListener& operator=(TcpListener&& other) noexcept;
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  // Port 0 binds an ephemeral port; read it back with port().
  static TcpListener bind(const std::string& host, uint16_t port);

  uint16_t port() const { return port_; }
  bool valid() const { return fd_ >= 0; }

  // Accepted connection, or nullopt when the timeout elapses.
  std::optional<TcpSocket> accept(std::chrono::milliseconds timeout);

  void close();

 private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

}  // namespace hwime::net
