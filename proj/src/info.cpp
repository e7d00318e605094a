#include "markagg/info.hpp"

#include "markagg/error.hpp"

namespace markagg {

double entropy(std::span<const double> p) noexcept {
  double h = 0.0;
  for (double v : p) h += neg_plogp(v);
  return h;
}

double binary_entropy(double p) noexcept { return neg_plogp(p) + neg_plogp(1.0 - p); }

double conditional_entropy_last(std::span<const double> joint, std::size_t inner) {
  if (inner == 0 || joint.size() % inner != 0) {
    throw Error(ErrorKind::DimensionMismatch, "joint size is not a multiple of the inner extent");
  }
  // Sum_c [ H(row c) - H(sum of row c) ] without materializing the marginal.
  double h = 0.0;
  for (std::size_t base = 0; base < joint.size(); base += inner) {
    double mass = 0.0;
    for (std::size_t j = 0; j < inner; ++j) {
      const double v = joint[base + j];
      mass += v;
      h += neg_plogp(v);
    }
    h -= neg_plogp(mass);
  }
  return h;
}

}  // namespace markagg
