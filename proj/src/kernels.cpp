#include "incompat/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace incompat::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* env = std::getenv("INCOMPAT_KERNELS")) {
    if (std::string_view(env) == "scalar") return detail::scalar_impl();
  }
  if (const KernelTable* t = avx2_table()) return *t;
  return detail::scalar_impl();
}

}  // namespace

const KernelTable& scalar_table() { return detail::scalar_impl(); }

const KernelTable* avx2_table() {
  static const bool supported = cpu_has_avx2();
  return supported ? detail::avx2_impl() : nullptr;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace incompat::kernels
