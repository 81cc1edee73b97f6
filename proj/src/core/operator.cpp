#include "helmfci/core/operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include "helmfci/core/error.hpp"

namespace helmfci
{

std::string_view to_string(OperatorKind kind)
{
  switch (kind)
  {
    case OperatorKind::SpectralLaplacian:
      return "spectral-laplacian";
    case OperatorKind::Fd7Laplacian:
      return "fd7-laplacian";
    case OperatorKind::Diagonal:
      return "diagonal";
    case OperatorKind::HelmholtzComposite:
      return "helmholtz-composite";
    case OperatorKind::Doubled:
      return "doubled";
    case OperatorKind::Shifted:
      return "shifted";
    case OperatorKind::Ilu0Precond:
      return "ilu0-precond";
    case OperatorKind::InvLapPrecond:
      return "invlap-precond";
    case OperatorKind::DenseTest:
      return "dense-test";
  }
  return "unknown";
}

bool is_preconditioner_kind(OperatorKind kind)
{
  return kind == OperatorKind::Ilu0Precond || kind == OperatorKind::InvLapPrecond;
}

LinearOperator::LinearOperator(std::size_t dim, OperatorKind kind) : dim_(dim), kind_(kind)
{
  if (dim == 0)
  {
    throw DimensionError("operator dimension must be positive");
  }
}

void LinearOperator::apply(ConstVectorView x, VectorView y) const
{
  blas::require_same_size(x.size(), dim_, to_string(kind_));
  blas::require_same_size(y.size(), dim_, to_string(kind_));
  apply_impl(x, y);
  if (is_preconditioner())
  {
    precond_applies_.fetch_add(1, std::memory_order_relaxed);
  }
  else
  {
    matvecs_.fetch_add(1, std::memory_order_relaxed);
  }
  blas::require_finite(y, to_string(kind_));
}

ComplexVector LinearOperator::apply(ConstVectorView x) const
{
  ComplexVector y(dim_);
  apply(x, y);
  return y;
}

void LinearOperator::reset_counters() const noexcept
{
  matvecs_.store(0);
  precond_applies_.store(0);
}

DiagonalOperator::DiagonalOperator(ComplexVector diag, OperatorKind kind)
  : LinearOperator(diag.size(), kind), diag_(std::move(diag))
{
}

std::shared_ptr<DiagonalOperator> DiagonalOperator::from_real(const std::vector<double> &diag)
{
  return std::make_shared<DiagonalOperator>(ComplexVector(diag.begin(), diag.end()));
}

double DiagonalOperator::max_abs() const
{
  double m = 0.0;
  for (const auto &d : diag_)
  {
    m = std::max(m, std::abs(d));
  }
  return m;
}

void DiagonalOperator::apply_impl(ConstVectorView x, VectorView y) const
{
  for (std::size_t i = 0; i < diag_.size(); i++)
  {
    y[i] = diag_[i] * x[i];
  }
}

ShiftedOperator::ShiftedOperator(OperatorPtr base, Complex shift)
  : LinearOperator(base->dim(), OperatorKind::Shifted), base_(std::move(base)), shift_(shift)
{
}

void ShiftedOperator::apply_impl(ConstVectorView x, VectorView y) const
{
  base_->apply(x, y);
  if (shift_ != 0.0)
  {
    blas::axpy(-shift_, x, y);
  }
}

DenseOperator::DenseOperator(std::size_t n, ComplexVector row_major)
  : LinearOperator(n, OperatorKind::DenseTest), a_(std::move(row_major))
{
  blas::require_same_size(a_.size(), n * n, "DenseOperator");
}

void DenseOperator::apply_impl(ConstVectorView x, VectorView y) const
{
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; i++)
  {
    Complex s = 0.0;
    const Complex *row = a_.data() + i * n;
    for (std::size_t j = 0; j < n; j++)
    {
      s += row[j] * x[j];
    }
    y[i] = s;
  }
}

}  // namespace helmfci
