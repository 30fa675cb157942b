#pragma once

// Order-fixed summation: the index range is cut into chunks of kChunk,
// each chunk is summed with a compensated accumulator, and the chunk
// partials are combined pairwise.  The chunking does not depend on the
// number of threads, so the parallel and serial paths agree bit for bit.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ldacert {

inline constexpr std::size_t kChunk = 4096;

struct Compensated {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

double pairwise_sum(const double* v, std::size_t n);

template <std::size_t M>
std::array<double, M> pairwise_sum(const std::array<double, M>* v, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return v[0];
  const std::size_t h = n / 2;
  auto a = pairwise_sum<M>(v, h);
  const auto b = pairwise_sum<M>(v + h, n - h);
  for (std::size_t m = 0; m < M; ++m) a[m] += b[m];
  return a;
}

namespace detail {

template <std::size_t M, class F>
std::array<double, M> chunk(std::size_t lo, std::size_t hi, F& f) {
  std::array<Compensated, M> acc{};
  for (std::size_t i = lo; i < hi; ++i) {
    const std::array<double, M> v = f(i);
    for (std::size_t m = 0; m < M; ++m) acc[m].add(v[m]);
  }
  std::array<double, M> out{};
  for (std::size_t m = 0; m < M; ++m) out[m] = acc[m].value();
  return out;
}

}  // namespace detail

// f(i) -> std::array<double, M>
template <std::size_t M, class F>
std::array<double, M> det_sum_n(std::size_t n, F&& f) {
  const std::size_t nc = (n + kChunk - 1) / kChunk;
  std::vector<std::array<double, M>> parts(nc);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < static_cast<long>(nc); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    parts[c] = detail::chunk<M>(lo, hi, f);
  }
  return pairwise_sum<M>(parts.data(), nc);
}

template <class F>
double det_sum(std::size_t n, F&& f) {
  auto g = [&](std::size_t i) { return std::array<double, 1>{f(i)}; };
  return det_sum_n<1>(n, g)[0];
}

namespace serial {

template <std::size_t M, class F>
std::array<double, M> det_sum_n(std::size_t n, F&& f) {
  const std::size_t nc = (n + kChunk - 1) / kChunk;
  std::vector<std::array<double, M>> parts(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const std::size_t lo = c * kChunk;
    parts[c] = ldacert::detail::chunk<M>(lo, std::min(n, lo + kChunk), f);
  }
  return pairwise_sum<M>(parts.data(), nc);
}

template <class F>
double det_sum(std::size_t n, F&& f) {
  auto g = [&](std::size_t i) { return std::array<double, 1>{f(i)}; };
  return serial::det_sum_n<1>(n, g)[0];
}

}  // namespace serial

}  // namespace ldacert
