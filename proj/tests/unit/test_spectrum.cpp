#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include "helmfci/core/error.hpp"
#include "helmfci/operators/helmholtz.hpp"
#include "helmfci/operators/spectral.hpp"
#include "helmfci/operators/wavespeed.hpp"
#include "helmfci/spectrum/box.hpp"
#include "helmfci/spectrum/contour.hpp"
#include "helmfci/spectrum/dense_eigen.hpp"
#include "helmfci/spectrum/impedance.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace helmfci;

TEST_CASE("spectral box")
{
  const SpectralBox box{-1.0, 2.8, 0.65};
  const auto pts = box.boundary_samples(512);
  CHECK(pts.size() >= 512);
  for (Complex v : box.vertices())
  {
    CHECK(std::count(pts.begin(), pts.end(), v) == 1);
  }
  for (Complex p : pts)
  {
    CHECK(box.contains(p, 1e-14));
  }
  CHECK(!box.contains({0.0, 0.1}));
  CHECK_THROWS_AS((SpectralBox{1.0, 0.0, 0.0}.validate()), ConfigurationError);

  const Grid3 g{16, 16, 16, 2.25};
  auto s = build_spectral_laplacian(g);
  auto m = build_mass(WavespeedModel::uniform(g));
  auto none = build_sponge(g, 0, 0.0);
  auto a = assemble_helmholtz(s, *m, *none, Discretization::Spectral);
  const auto b = box_from_operator(*a);
  CHECK(b.depth == 0.0);
  CHECK(b.b1 == -1.0);
  // A1 + I = S, rho(S) = 3/4 l_min^2
  CHECK(b.b2 == doctest::Approx(kBoxInflation * 0.75 * 2.25 * 2.25 - 1.0).epsilon(1e-6));

  CHECK(doubled_radius_bound(4.0, 0.0) == 2.0);
  const auto db = doubled_box_from_radii({4.0, 0.0, false}, 1.0);
  CHECK(db.b1 == -3.0);
  CHECK(db.b2 == 1.0);
}

TEST_CASE("contour formulas")
{
  SUBCASE("weights sum to zero, nodes in the left half plane outside the strip")
  {
    for (int J : {2, 4, 6, 8, 16})
    {
      const auto c = make_contour(SpectralBox{-1.0, 10.0, 0.9}, J, 0.1, 0.3);
      Complex sum = 0.0;
      for (Complex w : c.weights)
      {
        sum += w;
      }
      CHECK(std::abs(sum) < 1e-13 * c.r);
      for (Complex z : c.nodes)
      {
        CHECK(z.real() <= 0.0);
        CHECK(std::abs(z.imag() + 0.45) >= 0.45 + 0.3 - 1e-12);
      }
      CHECK(c.encloses(0.0));
    }
  }
  SUBCASE("odd J places one node at mid-strip height")
  {
    const auto c = make_contour_for_depth(0.9, 3, 0.1, 0.3);
    CHECK(c.nodes[1].imag() == doctest::Approx(-0.45));
    CHECK(c.nodes[1].real() < 0.0);
  }
  SUBCASE("J = 2 puts both nodes on the imaginary axis")
  {
    const auto c = make_contour_for_depth(0.5, 2, 0.3, 0.2);
    CHECK(std::abs(c.nodes[0].real()) < 1e-15);
    CHECK(std::abs(c.nodes[1].real()) < 1e-15);
    CHECK(c.nodes[0].imag() == doctest::Approx(0.45 - 0.25));
    CHECK(c.nodes[1].imag() == doctest::Approx(-0.45 - 0.25));
  }
  SUBCASE("published node set")
  {
    // fitted: rho2 = 0.904, eps = 0.8, hence r = 2.504
    const auto c = make_contour_for_depth(0.904, 6, 0.1, 0.8);
    CHECK(c.r == doctest::Approx(2.504));
    const Complex expect[] = {{0.00, 0.80},  {-0.22, 2.05},  {-0.43, 0.80},
                              {-0.43, -1.70}, {-0.22, -2.96}, {0.00, -1.70}};
    for (int j = 0; j < 6; j++)
    {
      CHECK(std::abs(c.nodes[j].real() - expect[j].real()) <= 0.005 + 1e-12);
      CHECK(std::abs(c.nodes[j].imag() - expect[j].imag()) <= 0.005 + 1e-12);
    }
  }
  CHECK_THROWS_AS(make_contour_for_depth(0.5, 1, 0.1, 0.1), ConfigurationError);
  CHECK_THROWS_AS(make_contour_for_depth(0.5, 6, 1.5, 0.1), ConfigurationError);
  CHECK_THROWS_AS(make_contour_for_depth(0.5, 6, 0.1, 0.0), ConfigurationError);
}

TEST_CASE("filtered inverse oracle and quadrature")
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-1.0, 8.0), im(-0.5, 0.0);
  const auto c16 = make_ellipse_contour({0.0, -0.25}, 1.0, 1.0, 16);
  testing::NormalMatrix a;
  while (a.eigs.size() < 200)
  {
    const Complex l(re(rng), im(rng));
    const double rad = std::abs(l - c16.center) / c16.r;
    if (rad < 0.6 || rad > 1.5)
    {
      a.eigs.push_back(l);
    }
  }
  const auto f = testing::random_vector(200, 8);

  SUBCASE("all outside gives the inverse, all inside gives zero")
  {
    const auto far = make_ellipse_contour({-100.0, 0.0}, 1.0, 1.0, 8);
    const auto x = testing::filtered_inverse_oracle(a, far, f);
    for (std::size_t i = 0; i < 200; i++)
    {
      CHECK(std::abs(x[i] - f[i] / a.eigs[i]) < 1e-14 * std::abs(x[i]));
    }
    const auto big = make_ellipse_contour({3.0, 0.0}, 1.0, 50.0, 8);
    CHECK(blas::norm2(testing::filtered_inverse_oracle(a, big, f)) == 0.0);
  }
  SUBCASE("error decreases as J doubles")
  {
    double prev = 1e300;
    for (int J : {8, 16, 32, 64})
    {
      const auto c = make_ellipse_contour({0.0, -0.25}, 1.0, 1.0, J);
      const auto exact = testing::filtered_inverse_oracle(a, c, f);
      const double err = testing::relative_error(testing::quadrature_inverse(a, c, f), exact);
      CHECK(err < prev);
      if (J == 16)
      {
        CHECK(err < 1e-2);
      }
      prev = err;
    }
  }
  SUBCASE("eigenvalue on the contour is refused")
  {
    testing::NormalMatrix on;
    on.eigs = {Complex(1.0, -0.25)};
    CHECK_THROWS(testing::filtered_inverse_oracle(on, c16, ComplexVector{1.0}));
  }
}

TEST_CASE("dense oracle containment on a small 2D problem")
{
  const Grid3 g{20, 20, 1, 3.0};
  auto s = build_spectral_laplacian(g);
  auto m = build_mass(WavespeedModel::eight_anomaly(g));
  auto d = build_sponge(g, 4, 1.3);
  auto a = assemble_helmholtz(s, *m, *d, Discretization::Spectral);
  const auto radii = estimate_radii(*a, 1e-12);
  CHECK(radii.rho2 == 1.3);
  for (Complex l : dense_eigenvalues(*a))
  {
    CHECK(l.real() >= -1.0 - 1e-10);
    CHECK(l.real() <= radii.rho1 - 1.0 + 1e-10);
    CHECK(l.imag() >= -radii.rho2 - 1e-10);
    CHECK(l.imag() <= 1e-10);
  }
  CHECK_THROWS_AS(materialize(*build_spectral_laplacian(Grid3{64, 64, 1, 3.0})), DimensionError);
}

TEST_CASE("impedance roots")
{
  const double omega = 10.0 * std::numbers::pi;
  const auto r = impedance_phase_roots(omega, 20);
  CHECK(r.complete);
  REQUIRE(r.roots.size() == 20);
  for (std::size_t i = 0; i < r.roots.size(); i++)
  {
    const Complex z = r.roots[i];
    CHECK(impedance_residual(omega, z, r.branch[i]) < 1e-10);
    CHECK(!(z.real() > 0.0 && z.imag() > 0.0));
    CHECK(z.imag() <= 1e-12);
    if (i > 0)
    {
      CHECK(std::abs(z - r.roots[i - 1]) > 1e-6);
    }
  }

  SUBCASE("no converged root deep in the lower half plane")
  {
    const double w = 100.0;
    for (double a : {0.0, 20.0, 60.0, 100.0, 150.0})
    {
      for (double b : {0.5 * w, 0.8 * w, 1.5 * w})
      {
        if (b < 0.5 * a)
        {
          continue;
        }
        for (int sign : {1, -1})
        {
          Complex z;
          const bool ok = impedance_newton(w, sign, {a, -b}, z);
          const bool deep = -z.imag() >= 0.5 * w && -z.imag() >= 0.5 * z.real();
          CHECK(!(ok && deep));
        }
      }
    }
  }
  CHECK_THROWS_AS(impedance_phase_roots(-1.0, 3), ConfigurationError);
}
