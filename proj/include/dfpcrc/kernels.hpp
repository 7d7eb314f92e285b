#pragma once

// Dense and sparse double-precision vector kernels used by the hub/authority
// iteration. Each kernel has a scalar reference and an AVX2 variant; the
// variant is chosen once at startup from the CPU features and may be forced
// with DFPCRC_SIMD=scalar|avx2 or set_active_isa().

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace dfpcrc::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*scale)(double alpha, double* x, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
  // sum_k values[k] * x[index[k]]
  double (*sparse_dot)(const double* values, const std::uint32_t* index, const double* x,
                       std::size_t nnz);
};

bool isa_supported(Isa isa) noexcept;

/// Kernel table for a specific ISA. Throws std::invalid_argument if the ISA is
/// not available on this CPU or was not compiled in.
const KernelTable& table(Isa isa);

Isa active_isa() noexcept;
void set_active_isa(Isa isa);

std::string_view isa_name(Isa isa) noexcept;
std::optional<Isa> parse_isa(std::string_view name) noexcept;

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);
double sum(std::span<const double> x);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double sparse_dot(std::span<const double> values, std::span<const std::uint32_t> index,
                  std::span<const double> x);
double norm2(std::span<const double> x);

}  // namespace dfpcrc::kernels
