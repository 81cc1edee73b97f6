#ifndef HELMFCI_CORE_OPERATOR_HPP
#define HELMFCI_CORE_OPERATOR_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>
#include "helmfci/core/vector.hpp"

namespace helmfci
{

enum class OperatorKind
{
  SpectralLaplacian,
  Fd7Laplacian,
  Diagonal,
  HelmholtzComposite,
  Doubled,
  Shifted,
  Ilu0Precond,
  InvLapPrecond,
  DenseTest
};

std::string_view to_string(OperatorKind kind);

bool is_preconditioner_kind(OperatorKind kind);

//
// Matrix-free complex linear operator. apply() validates sizes and finiteness and keeps
// a tally of applications; subclasses only implement apply_impl(). All operator state
// is read-only during application, so one instance may be applied concurrently from
// several threads.
//
class LinearOperator
{
public:
  virtual ~LinearOperator() = default;
  LinearOperator(const LinearOperator &) = delete;
  LinearOperator &operator=(const LinearOperator &) = delete;

  std::size_t dim() const noexcept { return dim_; }
  OperatorKind kind() const noexcept { return kind_; }
  bool is_preconditioner() const noexcept { return is_preconditioner_kind(kind_); }

  // y = op * x. Throws DimensionError on size mismatch, NonFiniteError if the result
  // contains NaN/Inf.
  void apply(ConstVectorView x, VectorView y) const;
  ComplexVector apply(ConstVectorView x) const;

  std::uint64_t matvec_count() const noexcept { return matvecs_.load(); }
  std::uint64_t precond_count() const noexcept { return precond_applies_.load(); }
  void reset_counters() const noexcept;

protected:
  LinearOperator(std::size_t dim, OperatorKind kind);

  virtual void apply_impl(ConstVectorView x, VectorView y) const = 0;

private:
  std::size_t dim_;
  OperatorKind kind_;
  mutable std::atomic<std::uint64_t> matvecs_{0};
  mutable std::atomic<std::uint64_t> precond_applies_{0};
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

class DiagonalOperator : public LinearOperator
{
public:
  explicit DiagonalOperator(ComplexVector diag, OperatorKind kind = OperatorKind::Diagonal);
  static std::shared_ptr<DiagonalOperator> from_real(const std::vector<double> &diag);

  const ComplexVector &diagonal() const noexcept { return diag_; }
  // max_i |d_i|
  double max_abs() const;

protected:
  void apply_impl(ConstVectorView x, VectorView y) const override;

private:
  ComplexVector diag_;
};

// x -> A x - z x
class ShiftedOperator : public LinearOperator
{
public:
  ShiftedOperator(OperatorPtr base, Complex shift);

  const OperatorPtr &base() const noexcept { return base_; }
  Complex shift() const noexcept { return shift_; }

protected:
  void apply_impl(ConstVectorView x, VectorView y) const override;

private:
  OperatorPtr base_;
  Complex shift_;
};

// Row-major dense matrix; used for small test problems and oracles.
class DenseOperator : public LinearOperator
{
public:
  DenseOperator(std::size_t n, ComplexVector row_major);

  Complex operator()(std::size_t i, std::size_t j) const { return a_[i * dim() + j]; }

protected:
  void apply_impl(ConstVectorView x, VectorView y) const override;

private:
  ComplexVector a_;
};

}  // namespace helmfci

#endif  // HELMFCI_CORE_OPERATOR_HPP
