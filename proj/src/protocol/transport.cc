/*
 * Copyright 2026 The CHOCO Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "choco/protocol/transport.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <thread>

#include "choco/common/frame.h"
#include "choco/protocol/message.h"

namespace choco::protocol {

std::size_t Transport::ReadFull(std::span<uint8_t> out) {
  std::size_t got = 0;
  while (got < out.size()) {
    const std::size_t n = ReadSome(out.data() + got, out.size() - got);
    if (n == 0) break;
    got += n;
  }
  return got;
}

void Transport::Send(std::span<const uint8_t> frame) { WriteAll(frame); }

std::vector<uint8_t> Transport::Receive() {
  std::vector<uint8_t> frame(kFrameHeaderBytes);
  const std::size_t got = ReadFull(frame);
  if (got == 0) throw TransportError("connection closed");
  if (got < kFrameHeaderBytes) throw FormatError("short read");
  const uint64_t length = PayloadLength(frame);
  frame.resize(kFrameHeaderBytes + length);
  if (ReadFull(std::span(frame).subspan(kFrameHeaderBytes)) < length) {
    throw FormatError("short read");
  }
  return frame;
}

// --- pipe ------------------------------------------------------------------

namespace {

struct Channel {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<uint8_t> bytes;
  bool closed = false;
};

class PipeEnd : public Transport {
 public:
  PipeEnd(std::shared_ptr<Channel> in, std::shared_ptr<Channel> out)
      : in_(std::move(in)), out_(std::move(out)) {}
  ~PipeEnd() override { Close(); }

  void Close() override {
    for (Channel* c : {in_.get(), out_.get()}) {
      std::lock_guard lock(c->mu);
      c->closed = true;
      c->cv.notify_all();
    }
  }

 protected:
  std::size_t ReadSome(uint8_t* data, std::size_t size) override {
    std::unique_lock lock(in_->mu);
    if (!in_->cv.wait_for(lock, timeout(), [&] { return !in_->bytes.empty() || in_->closed; })) {
      throw TransportError("receive timed out");
    }
    const std::size_t n = std::min(size, in_->bytes.size());
    std::copy_n(in_->bytes.begin(), n, data);
    in_->bytes.erase(in_->bytes.begin(), in_->bytes.begin() + static_cast<std::ptrdiff_t>(n));
    return n;
  }

  void WriteAll(std::span<const uint8_t> data) override {
    std::lock_guard lock(out_->mu);
    if (out_->closed) throw TransportError("connection closed");
    out_->bytes.insert(out_->bytes.end(), data.begin(), data.end());
    out_->cv.notify_all();
  }

 private:
  std::shared_ptr<Channel> in_;
  std::shared_ptr<Channel> out_;
};

// --- tcp -------------------------------------------------------------------

std::string ErrnoText(const std::string& what) { return what + ": " + std::strerror(errno); }

bool WaitFd(int fd, short events, std::chrono::milliseconds timeout) {
  pollfd p{fd, events, 0};
  for (;;) {
    const int r = ::poll(&p, 1, static_cast<int>(timeout.count()));
    if (r > 0) return true;
    if (r == 0) return false;
    if (errno != EINTR) throw TransportError(ErrnoText("poll"));
  }
}

class TcpStream : public Transport {
 public:
  explicit TcpStream(int fd) : fd_(fd) {
    const int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  ~TcpStream() override { Close(); }

  void Close() override {
    std::lock_guard lock(mu_);
    if (fd_ >= 0) {
      ::shutdown(fd_, SHUT_RDWR);
      ::close(fd_);
      fd_ = -1;
    }
  }

 protected:
  std::size_t ReadSome(uint8_t* data, std::size_t size) override {
    if (fd_ < 0) throw TransportError("connection closed");
    if (!WaitFd(fd_, POLLIN, timeout())) throw TransportError("receive timed out");
    for (;;) {
      const ssize_t n = ::recv(fd_, data, size, 0);
      if (n >= 0) return static_cast<std::size_t>(n);
      if (errno == ECONNRESET) return 0;
      if (errno != EINTR) throw TransportError(ErrnoText("recv"));
    }
  }

  void WriteAll(std::span<const uint8_t> data) override {
    if (fd_ < 0) throw TransportError("connection closed");
    std::size_t sent = 0;
    while (sent < data.size()) {
      const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(ErrnoText("send"));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

 private:
  std::mutex mu_;
  int fd_;
};

addrinfo* Resolve(const std::string& host, uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res);
  if (rc != 0) throw TransportError("resolve " + host + ": " + ::gai_strerror(rc));
  return res;
}

}  // namespace

std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> MakePipe() {
  auto a_to_b = std::make_shared<Channel>();
  auto b_to_a = std::make_shared<Channel>();
  return {std::make_unique<PipeEnd>(b_to_a, a_to_b), std::make_unique<PipeEnd>(a_to_b, b_to_a)};
}

std::unique_ptr<Transport> TcpConnect(const std::string& host, uint16_t port,
                                      std::chrono::milliseconds timeout) {
  addrinfo* res = Resolve(host, port, false);
  std::string last = "no address";
  for (addrinfo* a = res; a != nullptr; a = a->ai_next) {
    const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    // Retry until the deadline: the server may still be starting.
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) {
        ::freeaddrinfo(res);
        return std::make_unique<TcpStream>(fd);
      }
      last = ErrnoText("connect");
      if (errno != ECONNREFUSED || std::chrono::steady_clock::now() >= deadline) break;
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    ::close(fd);
  }
  ::freeaddrinfo(res);
  throw TransportError(last);
}

TcpListener::TcpListener(const std::string& host, uint16_t port) {
  addrinfo* res = Resolve(host, port, true);
  std::string last = "no address";
  for (addrinfo* a = res; a != nullptr && fd_ < 0; a = a->ai_next) {
    const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, a->ai_addr, a->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      fd_ = fd;
    } else {
      last = ErrnoText("bind");
      ::close(fd);
    }
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) throw TransportError(last);
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.ss_family == AF_INET6 ? reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port
                                           : reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

TcpListener::~TcpListener() { Close(); }

void TcpListener::Close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

std::unique_ptr<Transport> TcpListener::Accept(std::chrono::milliseconds timeout) {
  if (fd_ < 0) throw TransportError("listener closed");
  if (!WaitFd(fd_, POLLIN, timeout)) return nullptr;
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) {
    if (errno == EINTR || errno == ECONNABORTED) return nullptr;
    throw TransportError(ErrnoText("accept"));
  }
  return std::make_unique<TcpStream>(fd);
}

// --- recording -------------------------------------------------------------

void RecordingTransport::Send(std::span<const uint8_t> frame) {
  {
    std::lock_guard lock(mu_);
    sent_.emplace_back(frame.begin(), frame.end());
  }
  inner_.Send(frame);
}

std::vector<uint8_t> RecordingTransport::Receive() {
  auto frame = inner_.Receive();
  std::lock_guard lock(mu_);
  received_.push_back(frame);
  return frame;
}

std::vector<std::vector<uint8_t>> RecordingTransport::sent() const {
  std::lock_guard lock(mu_);
  return sent_;
}

std::vector<std::vector<uint8_t>> RecordingTransport::received() const {
  std::lock_guard lock(mu_);
  return received_;
}

}  // namespace choco::protocol
