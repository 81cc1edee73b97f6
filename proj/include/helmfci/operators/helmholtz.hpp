#ifndef HELMFCI_OPERATORS_HELMHOLTZ_HPP
#define HELMFCI_OPERATORS_HELMHOLTZ_HPP

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>
#include "helmfci/core/operator.hpp"
#include "helmfci/operators/grid.hpp"
#include "helmfci/operators/wavespeed.hpp"

namespace helmfci
{

enum class Discretization
{
  Spectral,
  Fd7
};

std::string_view to_string(Discretization d);

//
// Sign of the damping term. LowerHalfPlane: A = (S - M) - i D, spectrum in the lower
// half plane. UpperHalfPlane: A = (S - M) + i D, the literal test-matrix form; its
// spectrum is the complex conjugate of the lower-half-plane one.
//
enum class DampingSign
{
  LowerHalfPlane,
  UpperHalfPlane
};

// Diagonal mass matrix M_ii = l_min^2 / l_i^2; throws ModelError if any l_i < l_min.
std::shared_ptr<DiagonalOperator> build_mass(const WavespeedModel &model);

//
// Diagonal sponge damping: strength * ((width - d) / width)^2 at boundary distance
// d < width (distance measured in grid points over the non-degenerate axes), zero in
// the interior. Requires width < (smallest non-degenerate dimension) / 2.
//
std::shared_ptr<DiagonalOperator> build_sponge(const Grid3 &grid, int width, double strength);

//
// A = A1 - i A2 (or A1 + i A2) with A1 = S - M Hermitian and A2 = D >= 0 diagonal.
// Applying A costs one application of S.
//
class HelmholtzOperator : public LinearOperator
{
public:
  HelmholtzOperator(OperatorPtr laplacian, std::vector<double> mass, std::vector<double> damping,
                    Discretization discretization,
                    DampingSign sign = DampingSign::LowerHalfPlane);

  const OperatorPtr &laplacian() const noexcept { return laplacian_; }
  const std::vector<double> &mass() const noexcept { return mass_; }
  const std::vector<double> &damping() const noexcept { return damping_; }
  Discretization discretization() const noexcept { return discretization_; }
  DampingSign damping_sign() const noexcept { return sign_; }

  // The same operator with the opposite damping sign (complex conjugate matrix).
  std::shared_ptr<HelmholtzOperator> conjugate() const;

protected:
  void apply_impl(ConstVectorView x, VectorView y) const override;

private:
  OperatorPtr laplacian_;
  std::vector<double> mass_;
  std::vector<double> damping_;
  Discretization discretization_;
  DampingSign sign_;
};

std::shared_ptr<HelmholtzOperator>
assemble_helmholtz(OperatorPtr laplacian, const DiagonalOperator &mass,
                   const DiagonalOperator &damping, Discretization discretization,
                   DampingSign sign = DampingSign::LowerHalfPlane);

// x -> (S - M + shift I) x, the Hermitian part of A offset by `shift`.
class HermitianPart : public LinearOperator
{
public:
  HermitianPart(OperatorPtr laplacian, std::vector<double> mass, double shift);
  static std::shared_ptr<HermitianPart> of(const HelmholtzOperator &a, double shift = 0.0);

protected:
  void apply_impl(ConstVectorView x, VectorView y) const override;

private:
  OperatorPtr laplacian_;
  std::vector<double> mass_;
  double shift_;
};

//
// The 2n x 2n first-order form iC - I with C = [[0, I], [-(A1 + I), -A2]], applied
// blockwise without forming C: one A1 application per matvec. A2 may be null (zero).
// (iC - I) (i u; u) = (0; (A1 - i A2) u).
//
class DoubledOperator : public LinearOperator
{
public:
  DoubledOperator(OperatorPtr hermitian_part, std::shared_ptr<const DiagonalOperator> skew_part);

  std::size_t half_dim() const noexcept { return dim() / 2; }
  // f -> (0; f)
  ComplexVector embed(ConstVectorView f) const;
  // (i u; u) -> u
  ComplexVector extract(ConstVectorView y) const;

protected:
  void apply_impl(ConstVectorView x, VectorView y) const override;

private:
  OperatorPtr a1_;
  std::shared_ptr<const DiagonalOperator> a2_;
};

std::shared_ptr<DoubledOperator> assemble_doubled(const HelmholtzOperator &a);
std::shared_ptr<DoubledOperator>
assemble_doubled(OperatorPtr hermitian_part, std::shared_ptr<const DiagonalOperator> skew_part);

struct RhoEstimate
{
  double value = 0.0;
  int iterations = 0;
  bool approximate = false;  // power iteration hit max_its before tol
};

//
// Spectral radius of a Hermitian operator. Diagonal operators return the exact max |d_i|;
// everything else runs power iteration from a seeded random start, using ||A v|| for unit
// v (which converges to rho for Hermitian A of either sign) and stopping when the relative
// change drops below tol.
//
RhoEstimate estimate_rho(const LinearOperator &op, double tol = 1e-10, int max_its = 5000,
                         std::uint64_t seed = 20190612);

}  // namespace helmfci

#endif  // HELMFCI_OPERATORS_HELMHOLTZ_HPP
