#include "markagg/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "markagg/error.hpp"
#include "markagg/simd/kernels.hpp"

namespace markagg {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double max_row_sum_error(const Matrix& m) {
  double worst = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    worst = std::max(worst, std::fabs(simd::sum(m.row(r)) - 1.0));
  }
  return worst;
}

}  // namespace markagg
