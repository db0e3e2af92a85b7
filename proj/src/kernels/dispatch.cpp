// Backend selection. No intrinsics in this file.

#include <atomic>
#include <cstdlib>
#include <string>

#include "hamrec/error.hpp"
#include "hamrec/kernels.hpp"

namespace hamrec::kernels {
namespace {

constexpr KernelTable kScalar{Backend::scalar, scalar::popcount, scalar::xor_popcount,
                              scalar::and_popcount};
#ifdef HAMREC_HAVE_AVX2
constexpr KernelTable kAvx2{Backend::avx2, avx2::popcount, avx2::xor_popcount, avx2::and_popcount};
#endif
#ifdef HAMREC_HAVE_NEON
constexpr KernelTable kNeon{Backend::neon, neon::popcount, neon::xor_popcount, neon::and_popcount};
#endif

const KernelTable* detect() noexcept {
  if (const char* env = std::getenv("HAMREC_KERNELS"); env && std::string(env) == "scalar") {
    return &kScalar;
  }
#ifdef HAMREC_HAVE_AVX2
  if (available(Backend::avx2)) return &kAvx2;
#endif
#ifdef HAMREC_HAVE_NEON
  if (available(Backend::neon)) return &kNeon;
#endif
  return &kScalar;
}

std::atomic<const KernelTable*> g_selected{nullptr};

}  // namespace

std::string_view name(Backend backend) noexcept {
  switch (backend) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

bool available(Backend backend) noexcept {
  switch (backend) {
    case Backend::scalar: return true;
    case Backend::avx2:
#if defined(HAMREC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
    case Backend::neon:
#ifdef HAMREC_HAVE_NEON
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
    if (available(b)) out.push_back(b);
  }
  return out;
}

const KernelTable& table(Backend backend) {
  require(available(backend), ErrorKind::resource,
          "kernel backend '" + std::string(name(backend)) + "' is not available");
  switch (backend) {
#ifdef HAMREC_HAVE_AVX2
    case Backend::avx2: return kAvx2;
#endif
#ifdef HAMREC_HAVE_NEON
    case Backend::neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& active() noexcept {
  const KernelTable* t = g_selected.load(std::memory_order_acquire);
  if (!t) {
    t = detect();
    g_selected.store(t, std::memory_order_release);
  }
  return *t;
}

void force(Backend backend) { g_selected.store(&table(backend), std::memory_order_release); }

void reset_selection() noexcept { g_selected.store(nullptr, std::memory_order_release); }

}  // namespace hamrec::kernels
