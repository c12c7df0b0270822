#include "csp/simd/vecops.hpp"

#include <cmath>

namespace csp::vecops {

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  const size_t n = a.size() < b.size() ? a.size() : b.size();
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_norm_scalar(std::span<const double> a) {
  double acc = 0.0;
  for (double x : a) acc += x * x;
  return acc;
}

namespace {

using DotFn = double (*)(std::span<const double>, std::span<const double>);
using NormFn = double (*)(std::span<const double>);

struct Dispatch {
  DotFn dot = dot_scalar;
  NormFn norm = squared_norm_scalar;
  std::string name = "scalar";

  Dispatch() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) {
      dot = dot_avx2;
      norm = squared_norm_avx2;
      name = "avx2";
    }
#endif
  }
};

const Dispatch& dispatch() {
  static const Dispatch d;
  return d;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  return dispatch().dot(a, b);
}

double squared_norm(std::span<const double> a) { return dispatch().norm(a); }

double cosine_dense(std::span<const double> a, std::span<const double> b) {
  const double na = squared_norm(a);
  const double nb = squared_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (std::sqrt(na) * std::sqrt(nb));
}

const std::string& active_kernel() { return dispatch().name; }

}  // namespace csp::vecops
