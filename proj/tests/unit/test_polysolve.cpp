#include "doctest.h"

#include <cmath>
#include <random>
#include "helmfci/core/error.hpp"
#include "helmfci/polysolve/fixpoint.hpp"
#include "helmfci/polysolve/scheme.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace helmfci;

namespace
{

const SpectralBox kRefBox{-1.0, 2.8, 0.65};

std::vector<Complex> sample_box(const SpectralBox &box, std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(box.b1, box.b2), im(-box.depth, 0.0);
  std::vector<Complex> out(n);
  for (auto &l : out)
  {
    l = {re(rng), im(rng)};
  }
  return out;
}

}  // namespace

TEST_CASE("residual polynomial")
{
  PolyScheme s;
  s.q = 3;
  s.delta = 0.7;
  s.z = 1i;
  s.z0 = default_center(kRefBox, s.z);
  CHECK(std::abs(residual_poly_eval(s, s.z) - 1.0) < 1e-15);
  // direct power sum against Horner
  const Complex l(0.3, -0.2);
  Complex direct = 0.0, term = 1.0;
  for (int j = 0; j <= 3; j++)
  {
    direct += term;
    term *= -1i * s.delta * (l - s.z0) / double(j + 1);
  }
  CHECK(std::abs(taylor_exp(3, 0.7, s.z0, l) - direct) < 1e-15);
  s.q = 0;
  CHECK_THROWS_AS(residual_poly_eval(s, l), ConfigurationError);
  CHECK(predicted_matvecs(2, 0.5, 1e-2) == 14);
  CHECK(predicted_matvecs(2, 1.0, 1e-2) == -1);
}

TEST_CASE("richardson closed form")
{
  const auto r = richardson_optimal(kRefBox, 1i);
  CHECK(!r.fallback);
  CHECK(r.rate == doctest::Approx(0.866).epsilon(0.001));
  CHECK(richardson_rate(kRefBox, 1i, r.p_star) == doctest::Approx(r.rate));

  const SpectralBox point{2.0, 2.0, 0.0};
  const auto p = richardson_optimal(point, 0.5i);
  CHECK(p.rate == 0.0);
  CHECK(std::abs(p.p_star - 1.0 / (2.0 - 0.5i)) < 1e-15);

  SUBCASE("vertex maximum equals dense boundary maximum")
  {
    const auto samples = kRefBox.boundary_samples(4096);
    for (Complex pp : {r.p_star, Complex(0.3, 0.1), Complex(-0.2, 0.4)})
    {
      double dense = 0.0;
      for (Complex l : samples)
      {
        dense = std::max(dense, std::abs(1.0 - (l - 1i) * pp));
      }
      CHECK(std::abs(dense - richardson_rate(kRefBox, 1i, pp)) < 1e-12);
    }
  }
  SUBCASE("fallback when the shift is outside the circumcircle")
  {
    const Complex z(0.9, 3.0);
    CHECK(!richardson_closed_form_applies(kRefBox, z));
    const auto f = richardson_optimal(kRefBox, z);
    CHECK(f.fallback);
    const auto v = kRefBox.vertices();
    const double brute =
        testing::brute_force_richardson({v.begin(), v.end()}, z, f.p_star, 0.05, 81, 3);
    CHECK(f.rate <= brute + 1e-6);
  }
  SUBCASE("closed form against brute force")
  {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int done = 0;
    while (done < 5)
    {
      const SpectralBox box{-1.0, -1.0 + 1.0 + 6.0 * u(rng), 0.2 + 1.5 * u(rng)};
      const Complex z(box.b1 + box.width() * u(rng), 0.1 + 2.0 * u(rng));
      if (!richardson_closed_form_applies(box, z))
      {
        continue;
      }
      const auto cf = richardson_optimal(box, z);
      const auto v = box.vertices();
      const double brute = testing::brute_force_richardson({v.begin(), v.end()}, z, cf.p_star,
                                                           2.0 * std::abs(cf.p_star), 120, 2);
      CHECK(std::abs(cf.rate - brute) < 1e-3);
      done++;
    }
  }
}

TEST_CASE("tuning reproduces the lattice table")
{
  TuneOptions opt;
  opt.delta_step = 1.0 / 16.0;
  const auto rows = tune_all(kRefBox, 1i, opt);
  const double delta[] = {0.250, 0.688, 0.750, 0.750, 0.938};
  const double nu[] = {0.866, 0.537, 0.530, 0.547, 0.416};
  for (int q = 0; q < 5; q++)
  {
    CHECK(std::abs(rows[q].delta - delta[q]) <= 0.02);
    CHECK(std::abs(rows[q].nu - nu[q]) <= 0.01);
  }
  CHECK(tune_scheme(kRefBox, 1i, opt).q == 2);
}

TEST_CASE("q = 1 tuning matches richardson")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int done = 0;
  while (done < 10)
  {
    const SpectralBox box{-1.0, 1.0 + 8.0 * u(rng), 0.1 + 1.0 * u(rng)};
    const Complex z(0.5 * (box.b1 + box.b2), 0.1 + 1.5 * u(rng));
    if (!richardson_closed_form_applies(box, z))
    {
      continue;
    }
    const auto rich = richardson_optimal(box, z);
    const auto s = tune_fixed_q(box, z, 1);
    CHECK(std::abs(rich.rate - s.nu) < 5e-3);
    done++;
  }
}

TEST_CASE("nu is non-increasing in |Im z|")
{
  for (int q : {1, 2, 3})
  {
    double prev = 2.0;
    for (double im : {0.1, 0.2, 0.4, 0.8, 1.6})
    {
      const double nu = tune_fixed_q(kRefBox, Complex(0.0, im), q).nu;
      CHECK(nu <= prev + 1e-9);
      prev = nu;
    }
  }
  CHECK_THROWS_AS(tune_scheme(kRefBox, -0.3i), ConfigurationError);
}

TEST_CASE("fixed-point iteration")
{
  const auto scheme = tune_fixed_q(kRefBox, 1i, 2);

  SUBCASE("exact solution is a fixed point")
  {
    const auto eig = sample_box(kRefBox, 50, 3);
    DiagonalOperator a(ComplexVector(eig.begin(), eig.end()));
    const auto y = testing::random_vector(50, 4);
    ComplexVector f(50);
    for (std::size_t i = 0; i < 50; i++)
    {
      f[i] = (eig[i] - scheme.z) * y[i];
    }
    const auto res = fixpoint_solve(a, f, scheme, {0.0, 1}, y);
    CHECK(testing::relative_error(res.y, y) < 1e-12);
  }
  SUBCASE("scalar systems follow |R(lambda)|^m")
  {
    for (Complex l : {Complex(-1.0, 0.0), Complex(1.3, -0.3), Complex(2.8, -0.65)})
    {
      DiagonalOperator a(ComplexVector{l});
      const auto res = fixpoint_solve(a, ComplexVector{1.0}, scheme, {0.0, 6});
      const double rl = std::abs(residual_poly_eval(scheme, l));
      for (const auto &h : res.stats.residual_history)
      {
        CHECK(std::abs(h.relative_residual - std::pow(rl, h.iteration)) < 1e-12);
      }
    }
  }
  SUBCASE("error bound on a normal instance")
  {
    const auto eig = sample_box(kRefBox, 200, 6);
    DiagonalOperator a(ComplexVector(eig.begin(), eig.end()));
    const auto f = testing::random_vector(200, 7);
    ComplexVector exact(200);
    double rmax = 0.0;
    for (std::size_t i = 0; i < 200; i++)
    {
      exact[i] = f[i] / (eig[i] - scheme.z);
      rmax = std::max(rmax, std::abs(residual_poly_eval(scheme, eig[i])));
    }
    const double e0 = blas::norm2(exact);
    for (int m = 1; m <= 5; m++)
    {
      const auto res = fixpoint_solve(a, f, scheme, {0.0, m});
      ComplexVector err(res.y);
      blas::axpy(-1.0, exact, err);
      CHECK(blas::norm2(err) <= std::pow(rmax, m) * e0 * (1.0 + 1e-12));
    }
  }
  SUBCASE("matvec accounting and contraction")
  {
    const auto eig = sample_box(kRefBox, 300, 8);
    DiagonalOperator a(ComplexVector(eig.begin(), eig.end()));
    const auto f = testing::random_vector(300, 9);
    const auto res = fixpoint_solve(a, f, scheme, {1e-8, 1000});
    CHECK(res.stats.converged);
    CHECK(res.stats.mvs == std::uint64_t(scheme.q * res.stats.its));
    CHECK(a.matvec_count() == res.stats.mvs);
    for (double factor : res.sweep_factors)
    {
      CHECK(factor <= scheme.nu + 0.02);
    }
  }
  SUBCASE("divergence is reported")
  {
    DiagonalOperator a(ComplexVector{Complex(20.0, 0.0)});
    try
    {
      fixpoint_solve(a, ComplexVector{1.0}, scheme, {1e-8, 100});
      FAIL("expected divergence");
    }
    catch (const DivergenceError &e)
    {
      CHECK(e.factor() > 1.0);
    }
  }
  SUBCASE("zero right-hand side")
  {
    DiagonalOperator a(ComplexVector{1.0, 2.0});
    const auto res = fixpoint_solve(a, ComplexVector(2, 0.0), scheme, {1e-8, 10});
    CHECK(blas::norm2(res.y) == 0.0);
    CHECK(res.stats.mvs == 0);
  }
}
