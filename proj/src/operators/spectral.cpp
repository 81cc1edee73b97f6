#include "helmfci/operators/spectral.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>
#include <fftw3.h>
#include "helmfci/core/error.hpp"

namespace helmfci
{

namespace
{

// The FFTW planner is not thread-safe; execution of an existing plan is.
std::mutex &planner_mutex()
{
  static std::mutex m;
  return m;
}

int &fft_threads()
{
  static int threads = 1;
  return threads;
}

struct FftwBuffer
{
  explicit FftwBuffer(std::size_t n)
    : data(static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * n)))
  {
    if (!data)
    {
      throw std::bad_alloc();
    }
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer &) = delete;
  FftwBuffer &operator=(const FftwBuffer &) = delete;
  fftw_complex *data;
};

}  // namespace

struct FourierMultiplier::Plans
{
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans()
  {
    std::lock_guard lock(planner_mutex());
    if (forward)
    {
      fftw_destroy_plan(forward);
    }
    if (backward)
    {
      fftw_destroy_plan(backward);
    }
  }
};

void set_fft_threads(int threads)
{
  std::lock_guard lock(planner_mutex());
  static bool initialised = false;
  if (!initialised)
  {
    fftw_init_threads();
    initialised = true;
  }
  fft_threads() = std::max(1, threads);
  fftw_plan_with_nthreads(fft_threads());
}

FourierMultiplier::FourierMultiplier(const Grid3 &grid, std::vector<double> symbol,
                                     OperatorKind kind)
  : LinearOperator(grid.size(), kind), grid_(grid), symbol_(std::move(symbol)),
    plans_(std::make_unique<Plans>())
{
  blas::require_same_size(symbol_.size(), grid.size(), "FourierMultiplier symbol");
  FftwBuffer scratch(grid.size());
  std::lock_guard lock(planner_mutex());
  // FFTW is row-major with the last index fastest, so the x axis goes last.
  plans_->forward = fftw_plan_dft_3d(grid.n3, grid.n2, grid.n1, scratch.data, scratch.data,
                                     FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_3d(grid.n3, grid.n2, grid.n1, scratch.data, scratch.data,
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->backward)
  {
    throw ConfigurationError("FFTW plan creation failed");
  }
}

FourierMultiplier::~FourierMultiplier() = default;

void FourierMultiplier::apply_impl(ConstVectorView x, VectorView y) const
{
  const std::size_t n = dim();
  FftwBuffer work(n);
  static_assert(sizeof(fftw_complex) == sizeof(Complex));
  std::memcpy(work.data, x.data(), n * sizeof(Complex));
  fftw_execute_dft(plans_->forward, work.data, work.data);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; i++)
  {
    const double s = symbol_[i] * inv_n;
    work.data[i][0] *= s;
    work.data[i][1] *= s;
  }
  fftw_execute_dft(plans_->backward, work.data, work.data);
  std::memcpy(static_cast<void *>(y.data()), work.data, n * sizeof(Complex));
}

double spectral_laplacian_eigenvalue(const Grid3 &grid, int i1, int i2, int i3)
{
  auto term = [](int i, int n)
  {
    const double k = std::min(i, n - i);
    return (k / n) * (k / n);
  };
  return grid.l_min * grid.l_min * (term(i1, grid.n1) + term(i2, grid.n2) + term(i3, grid.n3));
}

std::vector<double> spectral_laplacian_eigenvalues(const Grid3 &grid)
{
  std::vector<double> lambda(grid.size());
  for (int i3 = 0; i3 < grid.n3; i3++)
  {
    for (int i2 = 0; i2 < grid.n2; i2++)
    {
      for (int i1 = 0; i1 < grid.n1; i1++)
      {
        lambda[grid.index(i1, i2, i3)] = spectral_laplacian_eigenvalue(grid, i1, i2, i3);
      }
    }
  }
  return lambda;
}

namespace
{

void require_even_dims(const Grid3 &grid)
{
  for (int n : grid.dims())
  {
    if (n != 1 && n % 2 != 0)
    {
      throw ConfigurationError("spectral discretization requires even grid dimensions, got " +
                               std::to_string(n));
    }
  }
}

}  // namespace

std::shared_ptr<FourierMultiplier> build_spectral_laplacian(const Grid3 &grid)
{
  grid.validate();
  require_even_dims(grid);
  return std::make_shared<FourierMultiplier>(grid, spectral_laplacian_eigenvalues(grid),
                                             OperatorKind::SpectralLaplacian);
}

std::shared_ptr<FourierMultiplier> build_invlap_precond(const Grid3 &grid)
{
  grid.validate();
  require_even_dims(grid);
  auto symbol = spectral_laplacian_eigenvalues(grid);
  for (auto &s : symbol)
  {
    s = 1.0 / std::max(s, 1.0);
  }
  return std::make_shared<FourierMultiplier>(grid, std::move(symbol),
                                             OperatorKind::InvLapPrecond);
}

}  // namespace helmfci
