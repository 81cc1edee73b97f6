#ifndef HELMFCI_OPERATORS_SPARSE_HPP
#define HELMFCI_OPERATORS_SPARSE_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>
#include "helmfci/core/operator.hpp"
#include "helmfci/operators/grid.hpp"

namespace helmfci
{

// Compressed sparse rows with column indices sorted within each row.
struct CsrMatrix
{
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> cols;
  ComplexVector vals;

  std::size_t nnz() const noexcept { return cols.size(); }
  void multiply(ConstVectorView x, VectorView y) const;
  // Position of (i, j) in vals, if stored.
  std::optional<std::size_t> find(std::size_t i, std::size_t j) const;
  Complex at(std::size_t i, std::size_t j) const;
  std::vector<std::size_t> diagonal_positions() const;
};

// Returns a + diag(d) on the pattern of a (the diagonal must be stored).
CsrMatrix add_diagonal(const CsrMatrix &a, ConstVectorView d);

class CsrOperator : public LinearOperator
{
public:
  CsrOperator(CsrMatrix a, OperatorKind kind);
  const CsrMatrix &matrix() const noexcept { return a_; }

protected:
  void apply_impl(ConstVectorView x, VectorView y) const override;

private:
  CsrMatrix a_;
};

enum class Closure
{
  Dirichlet,  // homogeneous Dirichlet one node outside the grid
  Periodic
};

//
// Seven-point negative Laplacian scaled by (l_min / 2 pi)^2 (unit spacing), so that
// its eigenvalues are (l_min / 2 pi)^2 sum_j 2 (1 - cos theta_j). Unit axes are skipped
// (2D/1D analogs); other axes need at least 3 points.
//
CsrMatrix assemble_fd7_laplacian(const Grid3 &grid, Closure closure = Closure::Dirichlet);
std::shared_ptr<CsrOperator> build_fd7_laplacian(const Grid3 &grid,
                                                 Closure closure = Closure::Dirichlet);

//
// ILU(0): L (unit lower) and U share the sparsity pattern of the input exactly and
// are stored in one CSR array. A zero pivot triggers one retry with the diagonal
// shifted by 1e-8 * max|a_ii|; a second failure throws ConfigurationError.
//
class Ilu0Preconditioner : public LinearOperator
{
public:
  explicit Ilu0Preconditioner(const CsrMatrix &a);

  const CsrMatrix &factors() const noexcept { return lu_; }
  double applied_shift() const noexcept { return shift_; }

protected:
  void apply_impl(ConstVectorView x, VectorView y) const override;

private:
  CsrMatrix lu_;
  std::vector<std::size_t> diag_pos_;
  double shift_ = 0.0;
};

std::shared_ptr<Ilu0Preconditioner> build_ilu0_precond(const CsrMatrix &a);

}  // namespace helmfci

#endif  // HELMFCI_OPERATORS_SPARSE_HPP
