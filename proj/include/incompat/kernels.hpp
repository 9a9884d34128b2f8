#pragma once

// Dense double-precision vector kernels used in the interior-point inner
// loops. Each kernel has a portable scalar reference implementation and, on
// x86-64, an AVX2/FMA variant. The variant is chosen once at startup from the
// CPU feature flags; setting INCOMPAT_KERNELS=scalar in the environment
// forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace incompat::kernels {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y <- x + beta * y
  void (*xpby)(const double* x, double beta, double* y, std::size_t n);
  void (*scale)(double alpha, double* x, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the binary was built without the AVX2 variant or the CPU
// does not support it.
const KernelTable* avx2_table();

// The table selected at startup.
const KernelTable& active();
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void xpby(std::span<const double> x, double beta, std::span<double> y) {
  active().xpby(x.data(), beta, y.data(), x.size());
}
inline void scale(double alpha, std::span<double> x) {
  active().scale(alpha, x.data(), x.size());
}

namespace detail {
const KernelTable& scalar_impl();
const KernelTable* avx2_impl();
}  // namespace detail

}  // namespace incompat::kernels
