#include "chatud/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chatud/error.hpp"

namespace chatud {

namespace {

void check_kernel(int kernel) {
  if (kernel < 1 || kernel % 2 == 0) {
    throw Error(ErrorCode::kBadKernel,
                "median kernel must be odd and >= 1, got " +
                    std::to_string(kernel));
  }
}

void center_row(const double* in, double* out, std::size_t n) {
  double sum = 0.0;
  for (std::size_t c = 0; c < n; ++c) sum += in[c];
  double mean = sum / static_cast<double>(n);
  for (std::size_t c = 0; c < n; ++c) out[c] = in[c] - mean;
}

// Symmetric reflection (edge sample repeated): index -1 -> 0, n -> n-1.
// Periodic with period 2n so it also covers windows wider than the row.
std::size_t reflect(long i, std::size_t n) {
  long period = 2 * static_cast<long>(n);
  long k = ((i % period) + period) % period;
  return static_cast<std::size_t>(k < static_cast<long>(n) ? k : period - 1 - k);
}

void filter_row(const double* in, double* out, std::size_t n, int kernel,
                std::vector<double>& window) {
  long half = kernel / 2;
  window.resize(static_cast<std::size_t>(kernel));
  for (std::size_t c = 0; c < n; ++c) {
    for (long k = -half; k <= half; ++k) {
      window[static_cast<std::size_t>(k + half)] =
          in[reflect(static_cast<long>(c) + k, n)];
    }
    auto mid = window.begin() + half;
    std::nth_element(window.begin(), mid, window.end());
    out[c] = *mid;
  }
}

}  // namespace

void check_matrix(const AttentionMatrix& m) {
  if (m.rows == 0 || m.cols == 0) {
    throw Error(ErrorCode::kBadMatrix, "attention matrix has a zero dimension");
  }
  if (m.values.size() != m.rows * m.cols) {
    throw Error(ErrorCode::kBadMatrix, "attention matrix size mismatch");
  }
  for (double v : m.values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kBadMatrix, "attention matrix has non-finite values");
    }
  }
}

namespace serial {

AttentionMatrix mean_center(const AttentionMatrix& m) {
  AttentionMatrix out(m.rows, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    center_row(&m.values[r * m.cols], &out.values[r * m.cols], m.cols);
  }
  return out;
}

AttentionMatrix median_filter_rows(const AttentionMatrix& m, int kernel) {
  check_kernel(kernel);
  if (kernel == 1) return m;
  AttentionMatrix out(m.rows, m.cols);
  std::vector<double> window;
  for (std::size_t r = 0; r < m.rows; ++r) {
    filter_row(&m.values[r * m.cols], &out.values[r * m.cols], m.cols, kernel,
               window);
  }
  return out;
}

}  // namespace serial

namespace parallel {

AttentionMatrix mean_center(const AttentionMatrix& m) {
  AttentionMatrix out(m.rows, m.cols);
  const long rows = static_cast<long>(m.rows);
#pragma omp parallel for schedule(static)
  for (long r = 0; r < rows; ++r) {
    auto off = static_cast<std::size_t>(r) * m.cols;
    center_row(&m.values[off], &out.values[off], m.cols);
  }
  return out;
}

AttentionMatrix median_filter_rows(const AttentionMatrix& m, int kernel) {
  check_kernel(kernel);
  if (kernel == 1) return m;
  AttentionMatrix out(m.rows, m.cols);
  const long rows = static_cast<long>(m.rows);
#pragma omp parallel
  {
    std::vector<double> window;
#pragma omp for schedule(static)
    for (long r = 0; r < rows; ++r) {
      auto off = static_cast<std::size_t>(r) * m.cols;
      filter_row(&m.values[off], &out.values[off], m.cols, kernel, window);
    }
  }
  return out;
}

}  // namespace parallel

}  // namespace chatud
