#include "gsavg/blocks.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gsavg {

Blocking::Blocking(std::vector<std::vector<std::size_t>> blocks, std::size_t dim)
    : blocks_(std::move(blocks)), dim_(dim) {
  if (dim_ == 0) throw std::invalid_argument("blocking: dimension must be positive");
  if (blocks_.empty()) throw std::invalid_argument("blocking: at least one block required");
  std::vector<char> seen(dim_, 0);
  std::size_t covered = 0;
  for (auto& block : blocks_) {
    if (block.empty()) throw std::invalid_argument("blocking: empty block");
    std::sort(block.begin(), block.end());
    for (auto idx : block) {
      if (idx >= dim_) {
        throw std::invalid_argument("blocking: feature index " + std::to_string(idx + 1) +
                                    " exceeds dimension " + std::to_string(dim_));
      }
      if (seen[idx]) {
        throw std::invalid_argument("blocking: feature " + std::to_string(idx + 1) +
                                    " appears in more than one block");
      }
      seen[idx] = 1;
      ++covered;
    }
  }
  if (covered != dim_) {
    const auto missing = std::find(seen.begin(), seen.end(), 0) - seen.begin();
    throw std::invalid_argument("blocking: feature " + std::to_string(missing + 1) +
                                " is not covered by any block");
  }
}

Blocking Blocking::singletons(std::size_t dim) { return consecutive(dim, 1); }

Blocking Blocking::whole(std::size_t dim) { return consecutive(dim, dim); }

Blocking Blocking::consecutive(std::size_t dim, std::size_t width) {
  if (width == 0) throw std::invalid_argument("blocking: width must be positive");
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t start = 0; start < dim; start += width) {
    std::vector<std::size_t> b;
    for (std::size_t k = start; k < std::min(dim, start + width); ++k) b.push_back(k);
    blocks.push_back(std::move(b));
  }
  return Blocking(std::move(blocks), dim);
}

std::size_t Blocking::max_block_size() const {
  std::size_t m = 0;
  for (const auto& b : blocks_) m = std::max(m, b.size());
  return m;
}

std::uint64_t Blocking::fingerprint() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 0x100000001B3ULL;
    }
  };
  mix(dim_);
  for (const auto& b : blocks_) {
    mix(b.size());
    for (auto idx : b) mix(idx);
  }
  return h;
}

BlockLayout::BlockLayout(const Blocking& blocking) {
  order.reserve(blocking.dim());
  offsets.reserve(blocking.size() + 1);
  offsets.push_back(0);
  for (const auto& b : blocking.blocks()) {
    order.insert(order.end(), b.begin(), b.end());
    offsets.push_back(order.size());
    inv_size.push_back(1.0 / static_cast<double>(b.size()));
  }
}

}  // namespace gsavg
