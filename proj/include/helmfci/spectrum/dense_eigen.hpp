#ifndef HELMFCI_SPECTRUM_DENSE_EIGEN_HPP
#define HELMFCI_SPECTRUM_DENSE_EIGEN_HPP

#include <cstddef>
#include <vector>
#include "helmfci/core/operator.hpp"

namespace helmfci
{

inline constexpr std::size_t kDenseEigenMaxDim = 2000;

// Column-major dense copy of op, built from dim() applications to unit vectors.
// Throws DimensionError above kDenseEigenMaxDim.
std::vector<Complex> materialize(const LinearOperator &op);

// All eigenvalues of op (nonsymmetric QR), sorted by real then imaginary part.
std::vector<Complex> dense_eigenvalues(const LinearOperator &op);

}  // namespace helmfci

#endif  // HELMFCI_SPECTRUM_DENSE_EIGEN_HPP
