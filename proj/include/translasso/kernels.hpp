#pragma once

#include <cstddef>

// Dense inner-loop kernels used by the solvers. A scalar reference
// implementation is always available; an AVX2/FMA variant is selected at
// runtime when the CPU supports it. force_scalar() pins the reference path
// (used by the equivalence tests).
namespace translasso::kernels {

double dot(const double* a, const double* b, std::size_t n);

// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

double sumsq(const double* a, std::size_t n);

enum class Backend { scalar, avx2 };

Backend active_backend();
void force_scalar(bool on);

// Reference implementations, exposed for tests.
double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
double sumsq_scalar(const double* a, std::size_t n);

}  // namespace translasso::kernels
