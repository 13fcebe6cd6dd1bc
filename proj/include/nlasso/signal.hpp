#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nlasso/error.hpp"

namespace nlasso {

/// A sequence of equally sized real blocks stored contiguously.
///
/// NodeSignal and EdgeSignal share this layout; the tag keeps a node signal
/// from being passed where an edge signal is expected.
template <typename Tag>
class BlockSignal {
 public:
  BlockSignal() = default;
  BlockSignal(std::size_t blocks, std::size_t dim) : blocks_(blocks), dim_(dim), values_(blocks * dim) {}
  BlockSignal(std::size_t blocks, std::size_t dim, std::vector<double> values)
      : blocks_(blocks), dim_(dim), values_(std::move(values)) {
    if (values_.size() != blocks_ * dim_) {
      throw DimensionError("signal storage has " + std::to_string(values_.size()) +
                           " entries, expected " + std::to_string(blocks_ * dim_));
    }
  }

  std::size_t blocks() const noexcept { return blocks_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<double> operator[](std::size_t b) noexcept { return {values_.data() + b * dim_, dim_}; }
  std::span<const double> operator[](std::size_t b) const noexcept {
    return {values_.data() + b * dim_, dim_};
  }

  std::span<double> flat() noexcept { return values_; }
  std::span<const double> flat() const noexcept { return values_; }

  bool all_finite() const noexcept {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const BlockSignal&, const BlockSignal&) = default;

 private:
  std::size_t blocks_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

struct NodeTag {};
struct EdgeTag {};

/// One length-p weight vector per graph node.
using NodeSignal = BlockSignal<NodeTag>;
/// One length-p vector per canonical edge id.
using EdgeSignal = BlockSignal<EdgeTag>;

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

/// Inner product of the stacked vectors.
template <typename Tag>
double inner(const BlockSignal<Tag>& a, const BlockSignal<Tag>& b) {
  if (a.blocks() != b.blocks() || a.dim() != b.dim()) throw DimensionError("inner: shape mismatch");
  return dot(a.flat(), b.flat());
}

}  // namespace nlasso
