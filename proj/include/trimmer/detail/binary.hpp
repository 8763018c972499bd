#pragma once

#include "trimmer/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace trimmer::detail {

class ByteWriter {
 public:
  void bytes(std::string_view s) { out_.append(s); }

  template <typename U>
  void uint(U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }

  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }

  const std::string& str() const noexcept { return out_; }
  std::string take() noexcept { return std::move(out_); }

 private:
  std::string out_;
};

// Reads from a byte buffer, reporting the offset of any short read.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::uint64_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ == data_.size(); }
  std::uint64_t remaining() const noexcept { return data_.size() - pos_; }

  std::string_view bytes(std::size_t n, std::string_view what) {
    require(n, what);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  template <typename U>
  U uint(std::string_view what) {
    require(sizeof(U), what);
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
      v |= static_cast<U>(static_cast<std::uint8_t>(data_[pos_ + i])) << (8 * i);
    pos_ += sizeof(U);
    return v;
  }

  double f64(std::string_view what) { return std::bit_cast<double>(uint<std::uint64_t>(what)); }

  void require(std::uint64_t n, std::string_view what) const {
    if (n > remaining())
      throw ParseError("truncated input: missing " + std::string(what) + " (need " + std::to_string(n) +
                           " bytes, have " + std::to_string(remaining()) + ")",
                       pos_);
  }

 private:
  std::string_view data_;
  std::uint64_t pos_ = 0;
};

}  // namespace trimmer::detail
