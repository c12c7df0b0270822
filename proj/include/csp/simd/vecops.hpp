#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace csp::vecops {

// Dense double kernels behind the embedding ranker. A scalar reference
// implementation always exists; an AVX2 variant is selected at runtime
// when the CPU supports it. Both accumulate in the same order within a
// lane pattern and are equivalence-tested against each other.

double dot_scalar(std::span<const double> a, std::span<const double> b);
double squared_norm_scalar(std::span<const double> a);

// Dispatched entry points.
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);

// Cosine of two dense vectors; 0 when either norm is 0.
double cosine_dense(std::span<const double> a, std::span<const double> b);

// "scalar" or "avx2"; which kernel the dispatcher picked.
const std::string& active_kernel();

#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(std::span<const double> a, std::span<const double> b);
double squared_norm_avx2(std::span<const double> a);
#endif

}  // namespace csp::vecops
