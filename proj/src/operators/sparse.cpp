#include "helmfci/operators/sparse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include "helmfci/core/error.hpp"

namespace helmfci
{

void CsrMatrix::multiply(ConstVectorView x, VectorView y) const
{
  for (std::size_t i = 0; i < rows; i++)
  {
    Complex s = 0.0;
    for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; p++)
    {
      s += vals[p] * x[cols[p]];
    }
    y[i] = s;
  }
}

std::optional<std::size_t> CsrMatrix::find(std::size_t i, std::size_t j) const
{
  const auto first = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  const auto last = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j)
  {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - cols.begin());
}

Complex CsrMatrix::at(std::size_t i, std::size_t j) const
{
  const auto p = find(i, j);
  return p ? vals[*p] : Complex(0.0);
}

std::vector<std::size_t> CsrMatrix::diagonal_positions() const
{
  std::vector<std::size_t> pos(rows);
  for (std::size_t i = 0; i < rows; i++)
  {
    const auto p = find(i, i);
    if (!p)
    {
      throw ConfigurationError("CSR row " + std::to_string(i) + " has no diagonal entry");
    }
    pos[i] = *p;
  }
  return pos;
}

CsrMatrix add_diagonal(const CsrMatrix &a, ConstVectorView d)
{
  blas::require_same_size(d.size(), a.rows, "add_diagonal");
  CsrMatrix b = a;
  const auto pos = b.diagonal_positions();
  for (std::size_t i = 0; i < b.rows; i++)
  {
    b.vals[pos[i]] += d[i];
  }
  return b;
}

CsrOperator::CsrOperator(CsrMatrix a, OperatorKind kind)
  : LinearOperator(a.rows, kind), a_(std::move(a))
{
}

void CsrOperator::apply_impl(ConstVectorView x, VectorView y) const
{
  a_.multiply(x, y);
}

CsrMatrix assemble_fd7_laplacian(const Grid3 &grid, Closure closure)
{
  grid.validate();
  const auto dims = grid.dims();
  for (int n : dims)
  {
    if (n != 1 && n < 3)
    {
      throw ConfigurationError("seven-point stencil needs at least 3 points per axis");
    }
  }
  const double c = (grid.l_min / (2.0 * std::numbers::pi)) * (grid.l_min / (2.0 * std::numbers::pi));
  CsrMatrix a;
  a.rows = grid.size();
  a.row_ptr.reserve(a.rows + 1);
  a.row_ptr.push_back(0);
  std::vector<std::pair<std::size_t, double>> row;
  for (int i3 = 0; i3 < grid.n3; i3++)
  {
    for (int i2 = 0; i2 < grid.n2; i2++)
    {
      for (int i1 = 0; i1 < grid.n1; i1++)
      {
        row.clear();
        int active_axes = 0;
        std::array<int, 3> idx{i1, i2, i3};
        for (int axis = 0; axis < 3; axis++)
        {
          const int n = dims[axis];
          if (n == 1)
          {
            continue;
          }
          active_axes++;
          for (int step : {-1, 1})
          {
            auto nb = idx;
            nb[axis] += step;
            if (nb[axis] < 0 || nb[axis] >= n)
            {
              if (closure == Closure::Dirichlet)
              {
                continue;
              }
              nb[axis] = (nb[axis] + n) % n;
            }
            row.emplace_back(grid.index(nb[0], nb[1], nb[2]), -c);
          }
        }
        row.emplace_back(grid.index(i1, i2, i3), 2.0 * active_axes * c);
        std::sort(row.begin(), row.end());
        for (const auto &[col, val] : row)
        {
          a.cols.push_back(col);
          a.vals.emplace_back(val);
        }
        a.row_ptr.push_back(a.cols.size());
      }
    }
  }
  return a;
}

std::shared_ptr<CsrOperator> build_fd7_laplacian(const Grid3 &grid, Closure closure)
{
  return std::make_shared<CsrOperator>(assemble_fd7_laplacian(grid, closure),
                                       OperatorKind::Fd7Laplacian);
}

namespace
{

// In-place IKJ ILU(0). Returns false on a (numerically) zero pivot.
bool factor_ilu0(CsrMatrix &lu, const std::vector<std::size_t> &diag_pos, double pivot_floor)
{
  const std::size_t n = lu.rows;
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> where(n, unset);
  for (std::size_t i = 0; i < n; i++)
  {
    for (std::size_t p = lu.row_ptr[i]; p < lu.row_ptr[i + 1]; p++)
    {
      where[lu.cols[p]] = p;
    }
    for (std::size_t p = lu.row_ptr[i]; p < lu.row_ptr[i + 1] && lu.cols[p] < i; p++)
    {
      const std::size_t k = lu.cols[p];
      const Complex pivot = lu.vals[diag_pos[k]];
      if (std::abs(pivot) <= pivot_floor)
      {
        return false;
      }
      lu.vals[p] /= pivot;
      const Complex lik = lu.vals[p];
      for (std::size_t q = diag_pos[k] + 1; q < lu.row_ptr[k + 1]; q++)
      {
        const std::size_t target = where[lu.cols[q]];
        if (target != unset)
        {
          lu.vals[target] -= lik * lu.vals[q];
        }
      }
    }
    for (std::size_t p = lu.row_ptr[i]; p < lu.row_ptr[i + 1]; p++)
    {
      where[lu.cols[p]] = unset;
    }
    if (std::abs(lu.vals[diag_pos[i]]) <= pivot_floor)
    {
      return false;
    }
  }
  return true;
}

}  // namespace

Ilu0Preconditioner::Ilu0Preconditioner(const CsrMatrix &a)
  : LinearOperator(a.rows, OperatorKind::Ilu0Precond), lu_(a), diag_pos_(a.diagonal_positions())
{
  double diag_max = 0.0;
  for (std::size_t i = 0; i < a.rows; i++)
  {
    diag_max = std::max(diag_max, std::abs(a.vals[diag_pos_[i]]));
  }
  const double floor = 1e-14 * diag_max;
  if (factor_ilu0(lu_, diag_pos_, floor))
  {
    return;
  }
  shift_ = 1e-8 * diag_max;
  lu_ = a;
  for (std::size_t i = 0; i < a.rows; i++)
  {
    lu_.vals[diag_pos_[i]] += shift_;
  }
  if (!factor_ilu0(lu_, diag_pos_, floor))
  {
    throw ConfigurationError("ILU(0) hit a zero pivot even after a diagonal shift");
  }
}

void Ilu0Preconditioner::apply_impl(ConstVectorView x, VectorView y) const
{
  const std::size_t n = lu_.rows;
  // L y = x, unit diagonal
  for (std::size_t i = 0; i < n; i++)
  {
    Complex s = x[i];
    for (std::size_t p = lu_.row_ptr[i]; p < diag_pos_[i]; p++)
    {
      s -= lu_.vals[p] * y[lu_.cols[p]];
    }
    y[i] = s;
  }
  // U y = y
  for (std::size_t i = n; i-- > 0;)
  {
    Complex s = y[i];
    for (std::size_t p = diag_pos_[i] + 1; p < lu_.row_ptr[i + 1]; p++)
    {
      s -= lu_.vals[p] * y[lu_.cols[p]];
    }
    y[i] = s / lu_.vals[diag_pos_[i]];
  }
}

std::shared_ptr<Ilu0Preconditioner> build_ilu0_precond(const CsrMatrix &a)
{
  return std::make_shared<Ilu0Preconditioner>(a);
}

}  // namespace helmfci
