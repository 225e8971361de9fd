#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "edlab/errors.hpp"

namespace edlab {

/// Multiset of cluster sizes s_1..s_m describing a duplicate graph: a disjoint
/// union of cliques on n = s_1 + ... + s_m vertices.
class ClusterProfile {
 public:
  ClusterProfile() = default;

  explicit ClusterProfile(std::vector<std::uint64_t> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw UsageError("cluster profile needs at least one cluster");
    for (auto s : sizes_) {
      if (s == 0) throw UsageError("cluster sizes must be positive");
      n_ += s;
    }
  }

  std::span<const std::uint64_t> sizes() const noexcept { return sizes_; }
  std::uint64_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return sizes_.size(); }
  std::uint64_t max_size() const { return *std::max_element(sizes_.begin(), sizes_.end()); }

  std::vector<std::uint64_t> sorted_sizes() const {
    auto v = sizes_;
    std::sort(v.begin(), v.end());
    return v;
  }

  /// Isomorphism of duplicate graphs is equality of the size multisets.
  friend bool operator==(const ClusterProfile& a, const ClusterProfile& b) {
    return a.sorted_sizes() == b.sorted_sizes();
  }

  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(sizes_[i]);
    }
    return out + "]";
  }

 private:
  std::vector<std::uint64_t> sizes_;
  std::uint64_t n_ = 0;
};

}  // namespace edlab
