#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gsavg {

/// Partition of the feature indices {0..D-1} into disjoint, exhaustive,
/// nonempty blocks. Indices are 0-based here; files and the CLI use 1-based.
///
/// Members of every block are kept in ascending order. Block order is the
/// order given at construction and is the summation order of the kernels.
class Blocking {
 public:
  Blocking() = default;

  /// Validates and canonicalizes (sorts members). Throws std::invalid_argument
  /// on overlap, gaps, out-of-range indices or empty blocks.
  Blocking(std::vector<std::vector<std::size_t>> blocks, std::size_t dim);

  static Blocking singletons(std::size_t dim);
  static Blocking whole(std::size_t dim);
  /// Consecutive runs of `width` features; the last block may be shorter.
  static Blocking consecutive(std::size_t dim, std::size_t width);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return blocks_.size(); }
  std::size_t block_size(std::size_t b) const { return blocks_[b].size(); }
  std::size_t max_block_size() const;
  const std::vector<std::size_t>& block(std::size_t b) const { return blocks_[b]; }
  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }

  bool is_singletons() const { return blocks_.size() == dim_; }

  /// Stable hash of the partition (dimension, block order, members).
  std::uint64_t fingerprint() const;

  friend bool operator==(const Blocking&, const Blocking&) = default;

 private:
  std::vector<std::vector<std::size_t>> blocks_;
  std::size_t dim_ = 0;
};

/// Flattened form of a Blocking used by the kernels: `order` lists the
/// features block by block, block b occupying [offsets[b], offsets[b+1]).
struct BlockLayout {
  std::vector<std::size_t> order;
  std::vector<std::size_t> offsets;
  std::vector<double> inv_size;

  explicit BlockLayout(const Blocking& blocking);
  BlockLayout() = default;

  std::size_t dim() const { return order.size(); }
  std::size_t blocks() const { return inv_size.size(); }
};

}  // namespace gsavg
