#ifndef HELMFCI_TESTS_SUPPORT_RANDOM_HPP
#define HELMFCI_TESTS_SUPPORT_RANDOM_HPP

#include <random>
#include "helmfci/core/vector.hpp"

namespace helmfci::testing
{

inline ComplexVector random_vector(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexVector v(n);
  for (auto &c : v)
  {
    c = {normal(rng), normal(rng)};
  }
  return v;
}

inline double relative_error(ConstVectorView a, ConstVectorView b)
{
  ComplexVector d(a.begin(), a.end());
  blas::axpy(-1.0, b, d);
  const double nb = blas::norm2(b);
  return nb > 0.0 ? blas::norm2(d) / nb : blas::norm2(d);
}

}  // namespace helmfci::testing

#endif  // HELMFCI_TESTS_SUPPORT_RANDOM_HPP
