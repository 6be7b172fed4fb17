#include <atomic>
#include <cstdlib>
#include <cstring>

#include "qcw/kernels.hpp"

namespace qcw::kern {
namespace {

bool avx2_usable() {
#ifdef QCW_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* lookup(const char* name) {
  if (std::strcmp(name, "scalar") == 0) return &scalar_kernels();
#ifdef QCW_HAVE_AVX2
  if (std::strcmp(name, "avx2") == 0 && avx2_usable()) return &avx2_kernels();
#endif
  return nullptr;
}

const KernelTable* detect() {
  if (const char* env = std::getenv("QCW_KERNEL")) {
    if (const KernelTable* t = lookup(env)) return t;
  }
#ifdef QCW_HAVE_AVX2
  if (avx2_usable()) return &avx2_kernels();
#endif
  return &scalar_kernels();
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    t = detect();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

bool select(const std::string& name) {
  if (const KernelTable* t = lookup(name.c_str())) {
    g_active.store(t, std::memory_order_release);
    return true;
  }
  return false;
}

std::vector<std::string> available() {
  std::vector<std::string> out{"scalar"};
  if (avx2_usable()) out.push_back("avx2");
  return out;
}

}  // namespace qcw::kern
