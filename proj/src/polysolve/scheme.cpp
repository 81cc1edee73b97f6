#include "helmfci/polysolve/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include "helmfci/core/error.hpp"

namespace helmfci
{

namespace
{

constexpr double kGolden = 0.6180339887498949;

// Minimizes a unimodal f on [a, b].
template <typename F>
double golden_section(F &&f, double a, double b, double tol, double &fmin)
{
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b)))
  {
    if (f1 <= f2)
    {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
    else
    {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  fmin = std::min(f1, f2);
  return f1 <= f2 ? x1 : x2;
}

void check_degree(int q)
{
  if (q < 1 || q > kMaxPolyDegree)
  {
    throw ConfigurationError("polynomial degree q must lie in [1, " +
                             std::to_string(kMaxPolyDegree) + "]");
  }
}

}  // namespace

double PolyScheme::nu_per_matvec() const
{
  return std::pow(nu, 1.0 / q);
}

Complex taylor_exp(int q, double delta, Complex z0, Complex lambda)
{
  const Complex x = -1i * delta * (lambda - z0);
  Complex s = 1.0;
  for (int j = q; j >= 1; j--)
  {
    s = 1.0 + s * x / double(j);
  }
  return s;
}

Complex residual_poly_eval(const PolyScheme &scheme, Complex lambda)
{
  check_degree(scheme.q);
  const Complex pz = taylor_exp(scheme.q, scheme.delta, scheme.z0, scheme.z);
  if (std::abs(pz) == 0.0)
  {
    throw ConfigurationError("degenerate scheme: p(z) = 0");
  }
  return taylor_exp(scheme.q, scheme.delta, scheme.z0, lambda) / pz;
}

double scheme_rate(int q, double delta, Complex z0, Complex z, const std::vector<Complex> &samples)
{
  const double pz = std::abs(taylor_exp(q, delta, z0, z));
  if (pz == 0.0)
  {
    return std::numeric_limits<double>::infinity();
  }
  double m = 0.0;
  for (Complex l : samples)
  {
    m = std::max(m, std::abs(taylor_exp(q, delta, z0, l)));
  }
  return m / pz;
}

Complex default_center(const SpectralBox &box, Complex z)
{
  return {0.5 * (box.b1 + box.b2), z.imag()};
}

int predicted_matvecs(int q, double nu, double target)
{
  if (!(nu < 1.0) || !(target < 1.0))
  {
    return -1;
  }
  if (nu <= 0.0)
  {
    return q;
  }
  return q * int(std::ceil(std::log(target) / std::log(nu) - 1e-12));
}

PolyScheme tune_fixed_q(const SpectralBox &box, Complex z, int q, const TuneOptions &options)
{
  box.validate();
  check_degree(q);
  if (options.boundary_samples < 512 || options.scan_points < 8)
  {
    throw ConfigurationError("tuning needs >= 512 boundary samples and >= 8 scan points");
  }
  const auto samples = box.boundary_samples(options.boundary_samples);
  const Complex z0 = default_center(box, z);
  // delta Im(lambda - z0) < 0 on the box: positive delta for shifts above it, negative below.
  const double sign = z.imag() < -0.5 * box.depth ? -1.0 : 1.0;
  auto rate = [&](double d) { return scheme_rate(q, sign * d, z0, z, samples); };
  const double extent = std::max(box.width(), box.depth);
  const double hi = extent > 0.0 ? 8.0 / extent : 8.0;

  double best_d = 0.0, best = std::numeric_limits<double>::infinity();
  if (options.delta_step > 0.0)
  {
    const int n = std::max(1, int(std::ceil(hi / options.delta_step)));
    for (int k = 1; k <= n; k++)
    {
      const double d = k * options.delta_step;
      const double v = rate(d);
      if (v < best)
      {
        best = v;
        best_d = d;
      }
    }
  }
  else
  {
    const int n = options.scan_points;
    const double h = hi / n;
    int best_k = 1;
    for (int k = 1; k <= n; k++)
    {
      const double v = rate(k * h);
      if (v < best)
      {
        best = v;
        best_k = k;
      }
    }
    double refined = best;
    const double d = golden_section(rate, (best_k - 1) * h, (best_k + 1) * h, 1e-10, refined);
    best_d = best_k * h;
    if (refined < best)
    {
      best = refined;
      best_d = d;
    }
  }
  PolyScheme s;
  s.q = q;
  s.delta = sign * best_d;
  s.z0 = z0;
  s.z = z;
  s.nu = best;
  s.box = box;
  s.predicted_mvs = predicted_matvecs(q, best, options.target);
  return s;
}

std::vector<PolyScheme> tune_all(const SpectralBox &box, Complex z, const TuneOptions &options)
{
  if (options.q_max < 1 || options.q_max > kMaxPolyDegree)
  {
    throw ConfigurationError("q_max out of range");
  }
  std::vector<PolyScheme> out;
  for (int q = 1; q <= options.q_max; q++)
  {
    out.push_back(tune_fixed_q(box, z, q, options));
  }
  return out;
}

PolyScheme tune_scheme(const SpectralBox &box, Complex z, const TuneOptions &options)
{
  if (z.imag() >= -box.depth && z.imag() <= 0.0)
  {
    throw ConfigurationError("shift lies in the spectral strip; choose Im(z) > 0 or < -depth");
  }
  const auto all = tune_all(box, z, options);
  const PolyScheme *best = nullptr;
  for (const auto &s : all)
  {
    if (s.nu < 1.0 && (!best || s.nu_per_matvec() < best->nu_per_matvec()))
    {
      best = &s;
    }
  }
  if (!best)
  {
    throw ConfigurationError("no convergent scheme up to q_max; enlarge |Im z| or q_max");
  }
  return *best;
}

bool richardson_closed_form_applies(const SpectralBox &box, Complex z)
{
  if (z.imag() >= -box.depth && z.imag() <= 0.0)
  {
    return false;
  }
  const double radius = 0.5 * std::hypot(box.width(), box.depth);
  return std::abs(z - box.center()) < radius;
}

double richardson_rate(const SpectralBox &box, Complex z, Complex p)
{
  double m = 0.0;
  for (Complex v : box.vertices())
  {
    m = std::max(m, std::abs(1.0 - (v - z) * p));
  }
  return m;
}

RichardsonParam richardson_optimal(const SpectralBox &box, Complex z)
{
  box.validate();
  RichardsonParam out;
  const auto v = box.vertices();
  const bool single_point = box.width() == 0.0 && box.depth == 0.0;
  if (single_point || richardson_closed_form_applies(box, z))
  {
    if (z.imag() > 0.0 || single_point)
    {
      out.alpha1 = v[0] - z;
      out.alpha2 = v[1] - z;
    }
    else
    {
      out.alpha1 = v[3] - z;
      out.alpha2 = v[2] - z;
    }
    const double a1 = std::abs(out.alpha1), a2 = std::abs(out.alpha2);
    if (a1 == 0.0 || a2 == 0.0)
    {
      throw ConfigurationError("shift coincides with a box vertex");
    }
    out.p_star = (a1 / out.alpha1 + a2 / out.alpha2) / (a1 + a2);
    out.rate = std::abs(out.alpha1 - out.alpha2) / (a1 + a2);
    return out;
  }
  // The vertex maximum is convex in p, so nested golden sections find the minimum.
  out.fallback = true;
  double dmin = std::numeric_limits<double>::infinity();
  for (Complex c : v)
  {
    dmin = std::min(dmin, std::abs(c - z));
  }
  if (dmin == 0.0)
  {
    throw ConfigurationError("shift coincides with a box vertex");
  }
  const double bound = 4.0 / dmin;
  double best_im = 0.0;
  auto inner = [&](double re)
  {
    double fm = 0.0;
    best_im = golden_section([&](double im) { return richardson_rate(box, z, {re, im}); }, -bound,
                             bound, 1e-13, fm);
    return fm;
  };
  double fmin = 0.0;
  const double re = golden_section(inner, -bound, bound, 1e-13, fmin);
  inner(re);
  out.p_star = {re, best_im};
  out.rate = richardson_rate(box, z, out.p_star);
  return out;
}

}  // namespace helmfci
