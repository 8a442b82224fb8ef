#pragma once

#include <cstddef>
#include <vector>

// Row-wise smoothing kernels over attention matrices. serial:: is the
// reference; parallel:: splits rows across OpenMP threads and must return
// identical values.
namespace chatud {

struct AttentionMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  AttentionMatrix() = default;
  AttentionMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), values(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  friend bool operator==(const AttentionMatrix&, const AttentionMatrix&) = default;
};

// Throws Error{kBadMatrix} on zero dimensions, size mismatch or non-finite
// values.
void check_matrix(const AttentionMatrix& m);

namespace serial {
AttentionMatrix mean_center(const AttentionMatrix& m);
// Throws Error{kBadKernel} unless kernel is odd and >= 1.
AttentionMatrix median_filter_rows(const AttentionMatrix& m, int kernel);
}  // namespace serial

namespace parallel {
AttentionMatrix mean_center(const AttentionMatrix& m);
AttentionMatrix median_filter_rows(const AttentionMatrix& m, int kernel);
}  // namespace parallel

using parallel::mean_center;
using parallel::median_filter_rows;

}  // namespace chatud
