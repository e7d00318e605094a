#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace markagg {

// Surjective labeling g: {0..N-1} -> {0..M-1}. Labels are zero-based in
// memory and one-based in files.
class PartitionMap {
 public:
  PartitionMap(std::vector<std::size_t> labels, std::size_t n_groups);

  static PartitionMap identity(std::size_t n);
  static PartitionMap constant(std::size_t n);
  // Consecutive blocks of the given sizes.
  static PartitionMap blocks(std::span<const std::size_t> sizes);
  static PartitionMap from_groups(const std::vector<std::vector<std::size_t>>& groups,
                                  std::size_t n_states);

  std::size_t n_states() const noexcept { return labels_.size(); }
  std::size_t n_groups() const noexcept { return n_groups_; }
  std::size_t operator[](std::size_t state) const noexcept { return labels_[state]; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }

  std::vector<std::size_t> group_sizes() const;
  std::vector<std::vector<std::size_t>> groups() const;

  // Same partition with groups renumbered in order of first appearance.
  PartitionMap canonical() const;

  // True when both induce the same set partition (labels may differ).
  bool same_partition(const PartitionMap& other) const;

  friend bool operator==(const PartitionMap&, const PartitionMap&) = default;

 private:
  std::vector<std::size_t> labels_;
  std::size_t n_groups_ = 0;
};

}  // namespace markagg
