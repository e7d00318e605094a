#include "markagg/partition.hpp"

#include <string>

#include "markagg/error.hpp"

namespace markagg {

PartitionMap::PartitionMap(std::vector<std::size_t> labels, std::size_t n_groups)
    : labels_(std::move(labels)), n_groups_(n_groups) {
  if (labels_.empty() || n_groups_ == 0) {
    throw Error(ErrorKind::InvalidArgument, "partition must have at least one state and group");
  }
  if (n_groups_ > labels_.size()) {
    throw Error(ErrorKind::InvalidArgument, "more groups than states");
  }
  std::vector<bool> seen(n_groups_, false);
  for (std::size_t label : labels_) {
    if (label >= n_groups_) {
      throw Error(ErrorKind::InvalidArgument, "label " + std::to_string(label) + " out of range");
    }
    seen[label] = true;
  }
  for (std::size_t b = 0; b < n_groups_; ++b) {
    if (!seen[b]) throw Error(ErrorKind::InvalidArgument, "group " + std::to_string(b) + " is empty");
  }
}

PartitionMap PartitionMap::identity(std::size_t n) {
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i;
  return {std::move(labels), n};
}

PartitionMap PartitionMap::constant(std::size_t n) { return {std::vector<std::size_t>(n, 0), 1}; }

PartitionMap PartitionMap::blocks(std::span<const std::size_t> sizes) {
  std::vector<std::size_t> labels;
  for (std::size_t b = 0; b < sizes.size(); ++b) labels.insert(labels.end(), sizes[b], b);
  return {std::move(labels), sizes.size()};
}

PartitionMap PartitionMap::from_groups(const std::vector<std::vector<std::size_t>>& groups,
                                       std::size_t n_states) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> labels(n_states, kUnset);
  for (std::size_t b = 0; b < groups.size(); ++b) {
    for (std::size_t s : groups[b]) {
      if (s >= n_states || labels[s] != kUnset) {
        throw Error(ErrorKind::InvalidArgument, "groups do not form a partition");
      }
      labels[s] = b;
    }
  }
  for (std::size_t l : labels) {
    if (l == kUnset) throw Error(ErrorKind::InvalidArgument, "groups do not cover every state");
  }
  return {std::move(labels), groups.size()};
}

std::vector<std::size_t> PartitionMap::group_sizes() const {
  std::vector<std::size_t> sizes(n_groups_, 0);
  for (std::size_t l : labels_) ++sizes[l];
  return sizes;
}

std::vector<std::vector<std::size_t>> PartitionMap::groups() const {
  std::vector<std::vector<std::size_t>> out(n_groups_);
  for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
  return out;
}

PartitionMap PartitionMap::canonical() const {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> remap(n_groups_, kUnset);
  std::size_t next = 0;
  std::vector<std::size_t> labels(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto& r = remap[labels_[i]];
    if (r == kUnset) r = next++;
    labels[i] = r;
  }
  return {std::move(labels), n_groups_};
}

bool PartitionMap::same_partition(const PartitionMap& other) const {
  if (n_states() != other.n_states() || n_groups_ != other.n_groups_) return false;
  return canonical().labels_ == other.canonical().labels_;
}

}  // namespace markagg
