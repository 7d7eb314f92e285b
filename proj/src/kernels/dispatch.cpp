#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace dfpcrc::kernels {

namespace {

constexpr KernelTable kScalarTable{scalar::dot,          scalar::axpy,
                                   scalar::scale,        scalar::sum,
                                   scalar::max_abs_diff, scalar::sparse_dot};

#if defined(DFPCRC_HAVE_AVX2_TU)
constexpr KernelTable kAvx2Table{avx2::dot,          avx2::axpy,
                                 avx2::scale,        avx2::sum,
                                 avx2::max_abs_diff, avx2::sparse_dot};
#endif

bool probe_avx2() noexcept {
#if defined(DFPCRC_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool cpu_has_avx2() noexcept {
  static const bool has = probe_avx2();
  return has;
}

Isa detect_default() noexcept {
  if (const char* forced = std::getenv("DFPCRC_SIMD")) {
    if (auto isa = parse_isa(forced); isa && isa_supported(*isa)) return *isa;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{detect_default()};
  return slot;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernels: length mismatch");
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("kernels: ISA " + std::string(isa_name(isa)) +
                                " not supported on this CPU");
  }
#if defined(DFPCRC_HAVE_AVX2_TU)
  if (isa == Isa::avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

Isa active_isa() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  (void)table(isa);
  active_slot().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

std::optional<Isa> parse_isa(std::string_view name) noexcept {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  return std::nullopt;
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return table(active_isa()).dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
  table(active_isa()).axpy(alpha, x.data(), y.data(), x.size());
}

void scale(double alpha, std::span<double> x) {
  table(active_isa()).scale(alpha, x.data(), x.size());
}

double sum(std::span<const double> x) { return table(active_isa()).sum(x.data(), x.size()); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return table(active_isa()).max_abs_diff(a.data(), b.data(), a.size());
}

double sparse_dot(std::span<const double> values, std::span<const std::uint32_t> index,
                  std::span<const double> x) {
  check_sizes(values.size(), index.size());
  return table(active_isa()).sparse_dot(values.data(), index.data(), x.data(), values.size());
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace dfpcrc::kernels
