#ifndef HELMFCI_OPERATORS_SPECTRAL_HPP
#define HELMFCI_OPERATORS_SPECTRAL_HPP

#include <memory>
#include <vector>
#include "helmfci/core/operator.hpp"
#include "helmfci/operators/grid.hpp"

namespace helmfci
{

//
// x -> F^{-1} diag(symbol) F x for the 3D DFT F on the grid. The FFTW plan is created
// once; every application uses its own aligned scratch buffer, so apply() is reentrant.
//
class FourierMultiplier : public LinearOperator
{
public:
  FourierMultiplier(const Grid3 &grid, std::vector<double> symbol, OperatorKind kind);
  ~FourierMultiplier() override;

  const Grid3 &grid() const noexcept { return grid_; }
  // Symbol indexed like grid vectors (x-fastest over the frequency multi-index).
  const std::vector<double> &symbol() const noexcept { return symbol_; }

protected:
  void apply_impl(ConstVectorView x, VectorView y) const override;

private:
  struct Plans;
  Grid3 grid_;
  std::vector<double> symbol_;
  std::unique_ptr<Plans> plans_;
};

// Eigenvalue of the spectral negative Laplacian at frequency multi-index (i1, i2, i3):
// l_min^2 * sum_j (min(i_j, N_j - i_j) / N_j)^2. For a cube this is
// (l_min / N)^2 sum_j min(i_j^2, (N - i_j)^2).
double spectral_laplacian_eigenvalue(const Grid3 &grid, int i1, int i2, int i3);
std::vector<double> spectral_laplacian_eigenvalues(const Grid3 &grid);

// Requires even (or unit) dims; throws ConfigurationError otherwise.
std::shared_ptr<FourierMultiplier> build_spectral_laplacian(const Grid3 &grid);

// Regularised inverse Laplacian, symbol 1 / max(lambda_i, 1).
std::shared_ptr<FourierMultiplier> build_invlap_precond(const Grid3 &grid);

// Number of threads FFTW may use inside one transform (default 1).
void set_fft_threads(int threads);

}  // namespace helmfci

#endif  // HELMFCI_OPERATORS_SPECTRAL_HPP
