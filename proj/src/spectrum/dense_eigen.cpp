#include "helmfci/spectrum/dense_eigen.hpp"

#include <algorithm>
#include <Eigen/Eigenvalues>
#include "helmfci/core/error.hpp"

namespace helmfci
{

std::vector<Complex> materialize(const LinearOperator &op)
{
  const std::size_t n = op.dim();
  if (n > kDenseEigenMaxDim)
  {
    throw DimensionError("dense oracle limited to dimension " + std::to_string(kDenseEigenMaxDim));
  }
  std::vector<Complex> a(n * n);
  ComplexVector e(n, 0.0);
  for (std::size_t j = 0; j < n; j++)
  {
    e[j] = 1.0;
    op.apply(e, VectorView(a.data() + j * n, n));
    e[j] = 0.0;
  }
  return a;
}

std::vector<Complex> dense_eigenvalues(const LinearOperator &op)
{
  const auto n = static_cast<Eigen::Index>(op.dim());
  auto a = materialize(op);
  const Eigen::Map<Eigen::MatrixXcd> m(a.data(), n, n);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success)
  {
    throw NonFiniteError("dense eigenvalue iteration failed to converge");
  }
  std::vector<Complex> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(ev.begin(), ev.end(), [](Complex x, Complex y)
            { return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag()); });
  return ev;
}

}  // namespace helmfci
