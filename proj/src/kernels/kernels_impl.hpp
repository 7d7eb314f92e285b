#pragma once

#include "dfpcrc/kernels.hpp"

namespace dfpcrc::kernels {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
double sum(const double* x, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
double sparse_dot(const double* values, const std::uint32_t* index, const double* x,
                  std::size_t nnz);
}  // namespace scalar

#if defined(DFPCRC_HAVE_AVX2_TU)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
double sum(const double* x, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
double sparse_dot(const double* values, const std::uint32_t* index, const double* x,
                  std::size_t nnz);
}  // namespace avx2
#endif

}  // namespace dfpcrc::kernels
