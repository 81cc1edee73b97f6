#ifndef HELMFCI_FCI_SETUP_HPP
#define HELMFCI_FCI_SETUP_HPP

#include "helmfci/fci/fci.hpp"
#include "helmfci/operators/helmholtz.hpp"
#include "helmfci/operators/wavespeed.hpp"
#include "helmfci/spectrum/box.hpp"

namespace helmfci
{

struct ProblemOptions
{
  Discretization discretization = Discretization::Spectral;
  Formulation formulation = Formulation::Single;
  DampingSign damping_sign = DampingSign::LowerHalfPlane;
  int sponge_width = -1;  // < 0: default_sponge_width(grid)
  double sponge_strength = 0.9;
  double rho_tol = 1e-8;
};

//
// Discrete Helmholtz problem ready for FCI. The working operator always uses the
// lower-half-plane sign; an upper-half-plane problem A' u = f is solved as
// conj(A') conj(u) = conj(f), which is exact because S, M and D are real.
//
struct HelmholtzProblem
{
  Grid3 grid;
  ProblemOptions options;
  std::shared_ptr<HelmholtzOperator> helmholtz;  // lower-half-plane sign
  std::shared_ptr<DoubledOperator> doubled;      // only for the doubled formulation
  OperatorPtr system;                            // helmholtz or doubled
  SpectralRadii radii;
  SpectralBox box;                               // box of `system`
  OperatorPtr laplacian_precond;                 // invlap or ILU(0) of S + I, dimension n
  Preconditioner inner_precond;                  // for `system`

  bool conjugated() const noexcept
  {
    return options.damping_sign == DampingSign::UpperHalfPlane;
  }
  // Maps a user right-hand side to the system right-hand side and back.
  ComplexVector to_system(ConstVectorView f) const;
  ComplexVector from_system(ConstVectorView y) const;
  // Operator with the user's sign convention.
  std::shared_ptr<HelmholtzOperator> user_operator() const;
};

// 3/8 of the smallest non-degenerate dimension (6 at 16^3), so the sponge covers a fixed
// fraction of the domain as the grid is refined at constant sampling rate.
int default_sponge_width(const Grid3 &grid);

HelmholtzProblem build_problem(const WavespeedModel &model, const ProblemOptions &options);

//
// Block preconditioner for iC - I from an approximate inverse P of A. Eliminating the
// first block gives A b = r2 - i (A1 + I) r1 and a = i b - r1; here A1 + I is replaced
// by the Laplacian S and A^{-1} by P.
//
class DoubledBlockPreconditioner : public LinearOperator
{
public:
  DoubledBlockPreconditioner(OperatorPtr laplacian, OperatorPtr inverse);

protected:
  void apply_impl(ConstVectorView x, VectorView y) const override;

private:
  OperatorPtr laplacian_;
  OperatorPtr inverse_;
};

struct ContourOptions
{
  int count = 6;
  double t = 0.1;
  double eps = 0.0;  // > 0 overrides eps_coefficient / omega
  double eps_coefficient = kDefaultEpsCoefficient;
};

Contour contour_for_problem(const HelmholtzProblem &problem, const ContourOptions &options);

// Contour, tuned node schemes and inner preconditioner for `problem`.
FciConfig make_fci_config(const HelmholtzProblem &problem, const ContourOptions &contour,
                          const TuneOptions &tune = {}, int inner_its = 10,
                          double node_reduction = 0.2);

}  // namespace helmfci

#endif  // HELMFCI_FCI_SETUP_HPP
