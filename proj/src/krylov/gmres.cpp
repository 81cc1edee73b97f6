#include "helmfci/krylov/gmres.hpp"

#include <cmath>
#include "helmfci/core/error.hpp"

namespace helmfci
{

namespace
{

constexpr double kReorthogonalize = 0.7071;

// Givens rotation zeroing b in (a, b).
void make_rotation(Complex a, Complex b, double &c, Complex &s)
{
  const double aa = std::abs(a), bb = std::abs(b);
  if (bb == 0.0)
  {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (aa == 0.0)
  {
    c = 0.0;
    s = std::conj(b) / bb;
    return;
  }
  const double nrm = std::hypot(aa, bb);
  c = aa / nrm;
  s = (a / aa) * std::conj(b) / nrm;
}

}  // namespace

Preconditioner as_preconditioner(OperatorPtr m)
{
  return [m = std::move(m)](ConstVectorView r, VectorView z) { m->apply(r, z); };
}

StepResult optimal_step(ConstVectorView aw, ConstVectorView f)
{
  blas::require_same_size(aw.size(), f.size(), "optimal_step");
  const double den = std::real(blas::dot(aw, aw));
  if (den == 0.0)
  {
    return {0.0, true};
  }
  return {blas::dot(aw, f) / den, false};
}

GmresResult gmres(const LinearOperator &a, ConstVectorView f, ConstVectorView x0,
                  const KrylovConfig &config, const Preconditioner &precond,
                  const GmresMonitor &monitor)
{
  const std::size_t n = a.dim();
  blas::require_same_size(f.size(), n, "gmres rhs");
  blas::require_finite(f, "gmres rhs");
  if (config.restart < 1 || config.max_its < 0 || !(config.tol > 0.0 && config.tol < 1.0))
  {
    throw ConfigurationError("gmres needs restart >= 1, max_its >= 0 and tol in (0, 1)");
  }
  Stopwatch clock;
  GmresResult out;
  out.x.assign(n, 0.0);
  bool zero_guess = true;
  if (!x0.empty())
  {
    blas::require_same_size(x0.size(), n, "gmres initial guess");
    blas::copy(x0, out.x);
    zero_guess = blas::norm2(x0) == 0.0;
  }
  const double fnorm = blas::norm2(f);
  if (fnorm == 0.0)
  {
    out.x.assign(n, 0.0);
    out.stats.converged = true;
    out.stats.record(0, 0.0);
    return out;
  }

  const int m = config.restart;
  const bool use_m = static_cast<bool>(precond);
  std::vector<ComplexVector> v(static_cast<std::size_t>(m) + 1, ComplexVector(n));
  std::vector<ComplexVector> z;
  if (use_m && config.flexible)
  {
    z.assign(static_cast<std::size_t>(m), ComplexVector(n));
  }
  // Column-major (m + 1) x m Hessenberg matrix.
  std::vector<Complex> h(static_cast<std::size_t>((m + 1) * m));
  auto hij = [&](int i, int j) -> Complex & { return h[std::size_t(j) * (m + 1) + i]; };
  std::vector<double> cs(m);
  std::vector<Complex> sn(m), g(m + 1), y(m);
  ComplexVector w(n), tmp(n);

  auto apply_precond = [&](ConstVectorView in, VectorView result)
  {
    precond(in, result);
    out.stats.precond_applies++;
    blas::require_finite(result, "gmres preconditioner output");
  };

  int total = 0;
  bool first = true;
  for (;;)
  {
    // r = f - A x
    ComplexVector &r = v[0];
    if (first && zero_guess)
    {
      blas::copy(f, r);
    }
    else
    {
      a.apply(out.x, r);
      out.stats.mvs++;
      blas::xpby(f, -1.0, r);
    }
    const double beta = blas::norm2(r);
    if (first)
    {
      out.stats.record(0, beta / fnorm);
      first = false;
    }
    if (beta <= config.tol * fnorm)
    {
      out.stats.converged = true;
      break;
    }
    if (total >= config.max_its)
    {
      break;
    }
    blas::scale(1.0 / beta, r);
    std::fill(g.begin(), g.end(), Complex(0.0));
    g[0] = beta;

    int k = 0;  // columns built in this cycle
    bool done = false;
    while (k < m && total < config.max_its)
    {
      const int j = k;
      // w = A M v_j
      if (use_m)
      {
        VectorView target = config.flexible ? VectorView(z[j]) : VectorView(tmp);
        apply_precond(v[j], target);
        a.apply(target, w);
      }
      else
      {
        a.apply(v[j], w);
      }
      out.stats.mvs++;

      const double before = blas::norm2(w);
      for (int i = 0; i <= j; i++)
      {
        hij(i, j) = blas::dot(v[i], w);
        blas::axpy(-hij(i, j), v[i], w);
      }
      double after = blas::norm2(w);
      if (after < kReorthogonalize * before)
      {
        for (int i = 0; i <= j; i++)
        {
          const Complex c = blas::dot(v[i], w);
          hij(i, j) += c;
          blas::axpy(-c, v[i], w);
        }
        after = blas::norm2(w);
      }
      if (!std::isfinite(after))
      {
        throw NonFiniteError("gmres: non-finite Arnoldi vector");
      }
      hij(j + 1, j) = after;
      const bool happy = after <= 1e-14 * before;
      if (!happy)
      {
        blas::copy(w, v[j + 1]);
        blas::scale(1.0 / after, v[j + 1]);
      }

      for (int i = 0; i < j; i++)
      {
        const Complex t = cs[i] * hij(i, j) + sn[i] * hij(i + 1, j);
        hij(i + 1, j) = -std::conj(sn[i]) * hij(i, j) + cs[i] * hij(i + 1, j);
        hij(i, j) = t;
      }
      make_rotation(hij(j, j), hij(j + 1, j), cs[j], sn[j]);
      hij(j, j) = cs[j] * hij(j, j) + sn[j] * hij(j + 1, j);
      hij(j + 1, j) = 0.0;
      g[j + 1] = -std::conj(sn[j]) * g[j];
      g[j] = cs[j] * g[j];

      k++;
      total++;
      const double rel = std::abs(g[j + 1]) / fnorm;
      out.stats.its = total;
      out.stats.seconds = clock.seconds();
      out.stats.record(total, rel);
      const bool stop_requested = monitor && !monitor(total, rel);
      if (happy)
      {
        out.breakdown = true;
        done = true;
        break;
      }
      if (rel <= config.tol || stop_requested)
      {
        done = true;
        break;
      }
    }

    // Back substitution on the k x k triangle.
    for (int i = k - 1; i >= 0; i--)
    {
      Complex s = g[i];
      for (int l = i + 1; l < k; l++)
      {
        s -= hij(i, l) * y[l];
      }
      y[i] = s / hij(i, i);
    }
    if (use_m && config.flexible)
    {
      for (int i = 0; i < k; i++)
      {
        blas::axpy(y[i], z[i], out.x);
      }
    }
    else
    {
      blas::fill(w, 0.0);
      for (int i = 0; i < k; i++)
      {
        blas::axpy(y[i], v[i], w);
      }
      if (use_m)
      {
        apply_precond(w, tmp);
        blas::axpy(1.0, tmp, out.x);
      }
      else
      {
        blas::axpy(1.0, w, out.x);
      }
    }
    blas::require_finite(out.x, "gmres iterate");
    if (done)
    {
      out.stats.converged = out.stats.final_residual() <= config.tol || out.breakdown;
      break;
    }
  }
  out.stats.seconds = clock.seconds();
  return out;
}

}  // namespace helmfci
