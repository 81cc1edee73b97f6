#include "helmfci/core/vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include "helmfci/core/error.hpp"

namespace helmfci::blas
{

namespace
{

constexpr std::size_t kPairwiseBlock = 128;

Complex dot_pairwise(const Complex *x, const Complex *y, std::size_t n)
{
  if (n <= kPairwiseBlock)
  {
    // Split real/imag accumulation; std::complex operator* would add
    // NaN-recovery branches we do not want in the hot loop.
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; i++)
    {
      const double xr = x[i].real(), xi = x[i].imag();
      const double yr = y[i].real(), yi = y[i].imag();
      re += xr * yr + xi * yi;
      im += xr * yi - xi * yr;
    }
    return {re, im};
  }
  const std::size_t half = n / 2;
  return dot_pairwise(x, y, half) + dot_pairwise(x + half, y + half, n - half);
}

}  // namespace

void require_same_size(std::size_t a, std::size_t b, std::string_view where)
{
  if (a != b)
  {
    throw DimensionError(std::string(where) + ": size mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

void axpy(Complex a, ConstVectorView x, VectorView y)
{
  require_same_size(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); i++)
  {
    y[i] += a * x[i];
  }
}

void xpby(ConstVectorView x, Complex b, VectorView y)
{
  require_same_size(x.size(), y.size(), "xpby");
  for (std::size_t i = 0; i < x.size(); i++)
  {
    y[i] = x[i] + b * y[i];
  }
}

void scale(Complex a, VectorView x)
{
  for (auto &v : x)
  {
    v *= a;
  }
}

void copy(ConstVectorView x, VectorView y)
{
  require_same_size(x.size(), y.size(), "copy");
  std::copy(x.begin(), x.end(), y.begin());
}

void fill(VectorView x, Complex value)
{
  std::fill(x.begin(), x.end(), value);
}

Complex dot(ConstVectorView x, ConstVectorView y)
{
  require_same_size(x.size(), y.size(), "dot");
  if (x.empty())
  {
    return 0.0;
  }
  return dot_pairwise(x.data(), y.data(), x.size());
}

double norm2(ConstVectorView x)
{
  return std::sqrt(dot(x, x).real());
}

bool all_finite(ConstVectorView x)
{
  for (const auto &v : x)
  {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    {
      return false;
    }
  }
  return true;
}

void require_finite(ConstVectorView x, std::string_view where)
{
  if (!all_finite(x))
  {
    throw NonFiniteError(std::string(where) + ": non-finite entry");
  }
}

}  // namespace helmfci::blas
