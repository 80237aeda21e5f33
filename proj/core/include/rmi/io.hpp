#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rmi {

/// Writes to `<path>.tmp` and renames over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);
void write_file_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes);
std::string read_text_file(const std::string& path);
std::vector<std::uint8_t> read_binary_file(const std::string& path);

/// Little-endian byte encoder/decoder for the binary containers.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void bytes(std::string_view s);
  std::vector<std::uint8_t>& buffer() noexcept { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& buf) : buf_(buf) {}
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  std::string bytes(std::size_t n);
  bool done() const noexcept { return pos_ == buf_.size(); }

 private:
  void need(std::size_t n) const;
  const std::vector<std::uint8_t>& buf_;
  std::size_t pos_ = 0;
};

/// Resolves a job count: explicit value, else RADAR_MITIG_THREADS, else 1.
std::size_t resolve_jobs(std::size_t requested);

/// Runs f(i) for i in [0, n) over `jobs` threads.
template <class F>
void parallel_for(std::size_t n, std::size_t jobs, F&& f);

}  // namespace rmi

#include "rmi/detail/parallel.hpp"
