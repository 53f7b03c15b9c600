#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "stepal/manifest.hpp"
#include "stepal/synthgen.hpp"

namespace stepal {
namespace {

DatasetPool sample_pool() {
  DatasetPool pool = generate(benchmark_suite("default"));
  const auto ids = partition(pool).unlabeled;
  pool.mark_labeled(std::vector<std::string>(ids.begin(), ids.begin() + 10));
  const auto& v = pool.video(ids[20]);
  for (const auto& c : v.clips) pool.set_logits(ids[20], c.clip_index, std::vector<double>(8, 0.125 * c.clip_index));
  return pool;
}

std::string encode(const DatasetPool& pool) {
  std::ostringstream out;
  write_manifest(pool, out);
  return out.str();
}

void expect_manifest_error(const std::string& bytes, ErrorCode code, std::uint64_t offset) {
  std::istringstream in(bytes);
  try {
    (void)read_manifest(in);
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const ManifestError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    EXPECT_EQ(e.offset(), offset) << e.what();
  }
}

TEST(Manifest, RoundTripIsExact) {
  const DatasetPool pool = sample_pool();
  const std::string bytes = encode(pool);
  std::istringstream in(bytes);
  const DatasetPool back = read_manifest(in);
  EXPECT_EQ(back, pool);
  EXPECT_EQ(encode(back), bytes);
}

TEST(Manifest, HeaderErrors) {
  const std::string bytes = encode(sample_pool());
  std::string magic = bytes;
  magic[0] = 'X';
  expect_manifest_error(magic, ErrorCode::FormatError, 0);
  std::string version = bytes;
  version[4] = 9;
  expect_manifest_error(version, ErrorCode::VersionError, 4);
  expect_manifest_error(bytes.substr(0, 2), ErrorCode::ShapeMismatch, 0);
  expect_manifest_error(bytes.substr(0, 7), ErrorCode::ShapeMismatch, 5);
}

TEST(Manifest, TruncationAndTrailingBytes) {
  const std::string bytes = encode(sample_pool());
  for (std::size_t cut : {std::size_t{17}, std::size_t{40}, bytes.size() / 2, bytes.size() - 1}) {
    std::istringstream in(bytes.substr(0, cut));
    try {
      (void)read_manifest(in);
      ADD_FAILURE() << "cut at " << cut;
    } catch (const ManifestError& e) {
      EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
      EXPECT_LE(e.offset(), cut);
    }
  }
  expect_manifest_error(bytes + "z", ErrorCode::ShapeMismatch, bytes.size());
}

TEST(Manifest, EmptyPool) {
  const DatasetPool pool(3, 2);
  std::istringstream in(encode(pool));
  EXPECT_EQ(read_manifest(in), pool);
}

}  // namespace
}  // namespace stepal
