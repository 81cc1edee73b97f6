#ifndef HELMFCI_CORE_VECTOR_HPP
#define HELMFCI_CORE_VECTOR_HPP

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace helmfci
{

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using ConstVectorView = std::span<const Complex>;
using VectorView = std::span<Complex>;

using namespace std::complex_literals;

namespace blas
{

// y <- a x + y
void axpy(Complex a, ConstVectorView x, VectorView y);

// y <- x + b y
void xpby(ConstVectorView x, Complex b, VectorView y);

void scale(Complex a, VectorView x);

void copy(ConstVectorView x, VectorView y);

void fill(VectorView x, Complex value);

// <x, y> = sum conj(x_i) y_i, accumulated pairwise in a fixed order so that repeated
// calls are bitwise reproducible.
Complex dot(ConstVectorView x, ConstVectorView y);

double norm2(ConstVectorView x);

bool all_finite(ConstVectorView x);

// Throws NonFiniteError naming `where` if x contains NaN or Inf.
void require_finite(ConstVectorView x, std::string_view where);

// Throws DimensionError if the sizes differ.
void require_same_size(std::size_t a, std::size_t b, std::string_view where);

}  // namespace blas

}  // namespace helmfci

#endif  // HELMFCI_CORE_VECTOR_HPP
