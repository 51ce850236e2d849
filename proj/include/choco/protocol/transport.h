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

#ifndef CHOCO_PROTOCOL_TRANSPORT_H_
#define CHOCO_PROTOCOL_TRANSPORT_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "choco/common/error.h"

namespace choco::protocol {

// The connection failed or the peer went away. Distinct from FormatError,
// which means bytes arrived but were not a frame.
class TransportError : public Error {
 public:
  using Error::Error;
};

// A duplex byte stream carrying frames. Receive() returns exactly one frame
// (header included); it throws FormatError on a bad header and "short read"
// when the stream ends mid-frame, TransportError when it ends between frames.
class Transport {
 public:
  virtual ~Transport() = default;

  virtual void Send(std::span<const uint8_t> frame);
  virtual std::vector<uint8_t> Receive();
  virtual void Close() = 0;

  void set_timeout(std::chrono::milliseconds timeout) { timeout_ = timeout; }
  std::chrono::milliseconds timeout() const { return timeout_; }

 protected:
  // Up to `size` bytes, blocking; 0 at end of stream.
  virtual std::size_t ReadSome(uint8_t* data, std::size_t size) = 0;
  virtual void WriteAll(std::span<const uint8_t> data) = 0;

 private:
  // Fills `out`; returns how many bytes arrived before end of stream.
  std::size_t ReadFull(std::span<uint8_t> out);

  std::chrono::milliseconds timeout_{std::chrono::minutes(10)};
};

// In-process duplex pipe; the two ends may live on different threads.
std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> MakePipe();

// Blocking TCP stream.
std::unique_ptr<Transport> TcpConnect(const std::string& host, uint16_t port,
                                      std::chrono::milliseconds timeout = std::chrono::seconds(10));

class TcpListener {
 public:
  // Port 0 picks an ephemeral port; see port().
  TcpListener(const std::string& host, uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  uint16_t port() const { return port_; }
  // nullptr on timeout, so callers can poll a shutdown flag.
  std::unique_ptr<Transport> Accept(std::chrono::milliseconds timeout);
  void Close();

 private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

// Keeps a copy of every frame passing through `inner`.
class RecordingTransport : public Transport {
 public:
  explicit RecordingTransport(Transport& inner) : inner_(inner) {}

  void Send(std::span<const uint8_t> frame) override;
  std::vector<uint8_t> Receive() override;
  void Close() override { inner_.Close(); }

  std::vector<std::vector<uint8_t>> sent() const;
  std::vector<std::vector<uint8_t>> received() const;

 protected:
  std::size_t ReadSome(uint8_t*, std::size_t) override { return 0; }
  void WriteAll(std::span<const uint8_t>) override {}

 private:
  Transport& inner_;
  mutable std::mutex mu_;
  std::vector<std::vector<uint8_t>> sent_;
  std::vector<std::vector<uint8_t>> received_;
};

}  // namespace choco::protocol

#endif  // CHOCO_PROTOCOL_TRANSPORT_H_
