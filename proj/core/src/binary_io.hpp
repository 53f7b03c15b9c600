#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

namespace stepal::detail {

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

/// Sequential reader that tracks the byte offset for diagnostics.
class ByteReader {
 public:
  explicit ByteReader(std::istream& in) : in_(in) {}

  [[nodiscard]] std::uint64_t offset() const noexcept { return offset_; }

  /// False if fewer than sizeof(T) bytes remain; the offset then points at the short read.
  template <typename T>
  bool read_le(T& value) {
    std::array<char, sizeof(T)> bytes{};
    in_.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (in_.gcount() != static_cast<std::streamsize>(bytes.size())) return false;
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    std::memcpy(&value, bytes.data(), sizeof(T));
    offset_ += sizeof(T);
    return true;
  }

  bool read_bytes(std::string& out, std::size_t n) {
    out.assign(n, '\0');
    in_.read(out.data(), static_cast<std::streamsize>(n));
    if (in_.gcount() != static_cast<std::streamsize>(n)) return false;
    offset_ += n;
    return true;
  }

  [[nodiscard]] bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream& in_;
  std::uint64_t offset_ = 0;
};

}  // namespace stepal::detail
