//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_BINARY_IO_HPP_
#define DECOYFORGE_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "decoyforge/error.hpp"

namespace decoyforge {

/// Little-endian byte sink.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }

  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k)
      buf_.push_back(static_cast<char>((v >> (8 * k)) & 0xffU));
  }

  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k)
      buf_.push_back(static_cast<char>((v >> (8 * k)) & 0xffU));
  }

  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  void bytes(std::string_view s) { buf_.append(s); }

  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s);
  }

  std::size_t size() const { return buf_.size(); }
  const std::string &data() const { return buf_; }

 private:
  std::string buf_;
};

/// Little-endian byte source over a buffer; throws Error{Io} on overrun.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data, std::size_t pos = 0): data_(data), pos_(pos) { }

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_++])) << (8 * k);
    return v;
  }

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_++])) << (8 * k);
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::string_view bytes(std::size_t n) {
    need(n);
    std::string_view out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::string str() { return std::string(bytes(u32())); }

  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > data_.size())
      throw Error(ErrorKind::Io, "truncated binary data");
  }

  std::string_view data_;
  std::size_t pos_;
};

std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view contents);

}  // namespace decoyforge

#endif  // DECOYFORGE_BINARY_IO_HPP_
