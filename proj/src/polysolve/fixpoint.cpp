#include "helmfci/polysolve/fixpoint.hpp"

#include <cmath>
#include "helmfci/core/error.hpp"

namespace helmfci
{

namespace
{

constexpr int kDivergenceSweeps = 3;

}  // namespace

FixpointResult fixpoint_solve(const LinearOperator &a, ConstVectorView f, const PolyScheme &scheme,
                              const FixpointStop &stop, ConstVectorView y0)
{
  const std::size_t n = a.dim();
  blas::require_same_size(f.size(), n, "fixpoint_solve rhs");
  blas::require_finite(f, "fixpoint_solve rhs");
  if (scheme.q < 1 || scheme.q > kMaxPolyDegree || stop.max_sweeps < 0)
  {
    throw ConfigurationError("fixpoint_solve: invalid scheme degree or sweep budget");
  }
  const Complex pz = taylor_exp(scheme.q, scheme.delta, scheme.z0, scheme.z);
  if (std::abs(pz) == 0.0)
  {
    throw ConfigurationError("degenerate scheme: p(z) = 0");
  }
  const Complex mid = -1i * scheme.delta;
  const Complex ratio = mid * (scheme.z - scheme.z0);
  const double fnorm = blas::norm2(f);

  Stopwatch clock;
  FixpointResult out;
  out.y.assign(n, 0.0);
  bool have_ay = true;  // (A - z0) y is known to be zero for y = 0
  if (!y0.empty())
  {
    blas::require_same_size(y0.size(), n, "fixpoint_solve initial guess");
    blas::copy(y0, out.y);
    have_ay = blas::norm2(y0) == 0.0;
  }
  if (fnorm == 0.0)
  {
    out.y.assign(n, 0.0);
    out.stats.converged = true;
    out.stats.record(0, 0.0);
    return out;
  }

  ComplexVector ay(n, 0.0), r(n), k(n), tmp(n), sum(n);
  auto apply_shifted = [&](ConstVectorView x, VectorView y)
  {
    a.apply(x, y);
    blas::axpy(-scheme.z0, x, y);
    out.stats.mvs++;
  };

  double prev = 0.0;
  int growth = 0;
  double growth_factor = 1.0;
  for (int sweep = 0;; sweep++)
  {
    if (!have_ay)
    {
      apply_shifted(out.y, ay);
    }
    // r = f - (A - z0) y + (z - z0) y
    for (std::size_t i = 0; i < n; i++)
    {
      r[i] = f[i] - ay[i] + (scheme.z - scheme.z0) * out.y[i];
    }
    const double rel = blas::norm2(r) / fnorm;
    out.stats.its = sweep;
    out.stats.seconds = clock.seconds();
    out.stats.record(sweep, rel);
    if (sweep > 0)
    {
      const double factor = prev > 0.0 ? rel / prev : 0.0;
      out.sweep_factors.push_back(factor);
      if (factor > 1.0)
      {
        growth++;
        growth_factor *= factor;
        if (growth >= kDivergenceSweeps)
        {
          throw DivergenceError("fixed-point residual grew over " +
                                    std::to_string(kDivergenceSweeps) + " consecutive sweeps",
                                std::pow(growth_factor, 1.0 / growth));
        }
      }
      else
      {
        growth = 0;
        growth_factor = 1.0;
      }
    }
    prev = rel;
    if (stop.tol > 0.0 && rel <= stop.tol)
    {
      out.stats.converged = true;
      break;
    }
    if (sweep == stop.max_sweeps)
    {
      break;
    }

    // k_1 = -i delta ((A - z0) y - f)
    for (std::size_t i = 0; i < n; i++)
    {
      k[i] = mid * (ay[i] - f[i]);
    }
    blas::copy(k, sum);
    Complex c = 1.0;
    for (int j = 2; j <= scheme.q; j++)
    {
      c *= ratio / double(j - 1);
      apply_shifted(k, tmp);
      const Complex s = mid / double(j);
      for (std::size_t i = 0; i < n; i++)
      {
        k[i] = s * (tmp[i] - c * f[i]);
      }
      blas::axpy(1.0, k, sum);
    }
    const Complex inv = 1.0 / pz;
    for (std::size_t i = 0; i < n; i++)
    {
      out.y[i] = (out.y[i] + sum[i]) * inv;
    }
    blas::require_finite(out.y, "fixpoint_solve iterate");
    have_ay = false;
  }
  out.stats.seconds = clock.seconds();
  return out;
}

}  // namespace helmfci
