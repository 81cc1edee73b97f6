#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include "helmfci/core/error.hpp"
#include "helmfci/operators/grid.hpp"
#include "helmfci/operators/helmholtz.hpp"
#include "helmfci/operators/sparse.hpp"
#include "helmfci/operators/spectral.hpp"
#include "helmfci/operators/wavespeed.hpp"
#include "helmfci/spectrum/dense_eigen.hpp"
#include "support/random.hpp"

using namespace helmfci;

namespace
{

ComplexVector fourier_mode(const Grid3 &g, int k1, int k2, int k3)
{
  ComplexVector v(g.size());
  for (int i3 = 0; i3 < g.n3; i3++)
    for (int i2 = 0; i2 < g.n2; i2++)
      for (int i1 = 0; i1 < g.n1; i1++)
      {
        const double phase = 2.0 * std::numbers::pi *
                             (double(k1 * i1) / g.n1 + double(k2 * i2) / g.n2 + double(k3 * i3) / g.n3);
        v[g.index(i1, i2, i3)] = std::polar(1.0, phase);
      }
  return v;
}

// Direct evaluation of (l_min / N)^2 sum_j min(i_j, N_j - i_j)^2.
double direct_eigenvalue(const Grid3 &g, int k1, int k2, int k3)
{
  const double l = g.l_min;
  auto t = [&](int k, int n) { return std::pow(l * std::min(k, n - k) / n, 2); };
  return t(k1, g.n1) + t(k2, g.n2) + t(k3, g.n3);
}

}  // namespace

TEST_CASE("grid validation")
{
  CHECK(Grid3{16, 16, 16, 2.25}.validate().empty());
  CHECK(Grid3{16, 16, 16, 2.1}.validate().size() == 1);
  CHECK_THROWS_AS(Grid3({16, 16, 16, 2.0}).validate(), ConfigurationError);
  CHECK_THROWS_AS(Grid3({0, 16, 16, 3.0}).validate(), ConfigurationError);
  CHECK_THROWS_AS(Grid3({1024, 1024, 1024, 3.0}).validate(), ConfigurationError);
  const Grid3 g{4, 5, 6, 3.0};
  CHECK(g.index(3, 4, 5) == g.size() - 1);
  CHECK(g.index(1, 0, 0) == 1);
}

TEST_CASE("spectral laplacian")
{
  const Grid3 g{16, 16, 16, 2.25};
  auto s = build_spectral_laplacian(g);

  CHECK(blas::norm2(s->apply(ComplexVector(g.size(), 1.0))) < 1e-12);

  const auto ev = spectral_laplacian_eigenvalues(g);
  const double rho = *std::max_element(ev.begin(), ev.end());
  CHECK(rho <= 0.75 * g.l_min * g.l_min + 1e-12);
  CHECK(rho == doctest::Approx(0.75 * g.l_min * g.l_min));

  for (auto [k1, k2, k3] : {std::array{1, 0, 0}, std::array{3, 7, 11}, std::array{8, 8, 8},
                            std::array{15, 2, 9}})
  {
    const auto v = fourier_mode(g, k1, k2, k3);
    auto expect = v;
    blas::scale(direct_eigenvalue(g, k1, k2, k3), expect);
    CHECK(testing::relative_error(s->apply(v), expect) < 1e-12);
  }

  const auto est = estimate_rho(*s, 1e-12);
  CHECK(std::abs(est.value - rho) <= 1e-6 * rho);

  CHECK_THROWS_AS(build_spectral_laplacian(Grid3{15, 16, 16, 2.25}), ConfigurationError);
}

TEST_CASE("inverse laplacian preconditioner")
{
  const Grid3 g{16, 16, 1, 2.25};
  auto p = build_invlap_precond(g);
  CHECK(p->is_preconditioner());
  // lambda(1, 0) = (2.25 / 16)^2 < 1: identity action
  const auto low = fourier_mode(g, 1, 0, 0);
  CHECK(testing::relative_error(p->apply(low), low) < 1e-12);
  const auto high = fourier_mode(g, 8, 8, 0);
  auto expect = high;
  blas::scale(1.0 / direct_eigenvalue(g, 8, 8, 0), expect);
  CHECK(testing::relative_error(p->apply(high), expect) < 1e-12);
  CHECK(p->precond_count() == 2);
  CHECK(p->matvec_count() == 0);
}

TEST_CASE("fd7 laplacian assembly")
{
  const Grid3 g{6, 5, 4, 3.0};
  const double c = std::pow(g.l_min / (2.0 * std::numbers::pi), 2);

  SUBCASE("periodic rows sum to zero")
  {
    const auto a = assemble_fd7_laplacian(g, Closure::Periodic);
    for (std::size_t i = 0; i < a.rows; i++)
    {
      Complex sum = 0.0;
      for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; k++)
      {
        sum += a.vals[k];
      }
      CHECK(std::abs(sum) < 1e-14);
    }
    auto op = build_fd7_laplacian(g, Closure::Periodic);
    CHECK(blas::norm2(op->apply(ComplexVector(g.size(), 1.0))) < 1e-13);
  }
  SUBCASE("dirichlet stencil weights")
  {
    const auto a = assemble_fd7_laplacian(g, Closure::Dirichlet);
    CHECK(a.at(g.index(2, 2, 2), g.index(2, 2, 2)) == Complex(6.0 * c));
    CHECK(a.at(g.index(2, 2, 2), g.index(3, 2, 2)) == Complex(-c));
    CHECK(a.at(g.index(2, 2, 2), g.index(2, 2, 1)) == Complex(-c));
    // corner row: 3 neighbours missing
    const auto corner = g.index(0, 0, 0);
    CHECK(a.row_ptr[corner + 1] - a.row_ptr[corner] == 4);
    CHECK(!a.find(corner, g.index(5, 0, 0)).has_value());
  }
  SUBCASE("spectral radius bound")
  {
    const Grid3 big{24, 24, 24, 2.25};
    auto s = build_fd7_laplacian(big);
    const auto est = estimate_rho(*s, 1e-12);
    CHECK(est.value <= 3.0 / (std::numbers::pi * std::numbers::pi) * big.l_min * big.l_min + 1e-8);
  }
  SUBCASE("1D eigenvalues against dense oracle")
  {
    const int n = 48;
    const Grid3 line{n, 1, 1, 4.0};
    const double cl = std::pow(line.l_min / (2.0 * std::numbers::pi), 2);
    auto s = build_fd7_laplacian(line);
    const auto ev = dense_eigenvalues(*s);
    for (int m = 1; m <= n; m++)
    {
      const double expect = cl * 2.0 * (1.0 - std::cos(m * std::numbers::pi / (n + 1)));
      CHECK(std::abs(ev[m - 1] - expect) < 1e-10);
    }
  }
}

TEST_CASE("ilu0")
{
  SUBCASE("diagonal matrix is inverted exactly")
  {
    CsrMatrix d;
    d.rows = 4;
    d.row_ptr = {0, 1, 2, 3, 4};
    d.cols = {0, 1, 2, 3};
    d.vals = {2.0, Complex(0, 3), -1.0, 0.5};
    auto p = build_ilu0_precond(d);
    const auto y = p->apply(ComplexVector{2.0, Complex(0, 3), -1.0, 0.5});
    for (auto v : y)
    {
      CHECK(std::abs(v - 1.0) < 1e-15);
    }
  }
  SUBCASE("LU matches A on the pattern")
  {
    const Grid3 g{7, 6, 5, 3.0};
    auto a = assemble_fd7_laplacian(g);
    ComplexVector shift(g.size());
    for (std::size_t i = 0; i < shift.size(); i++)
    {
      shift[i] = Complex(-0.3 + 0.01 * double(i % 7), -0.4);
    }
    a = add_diagonal(a, shift);
    const Ilu0Preconditioner p(a);
    const auto &lu = p.factors();
    CHECK(lu.cols == a.cols);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows; i++)
    {
      for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; k++)
      {
        const std::size_t j = a.cols[k];
        Complex sum = 0.0;
        for (std::size_t m = 0; m <= std::min(i, j); m++)
        {
          const Complex l = (m == i) ? Complex(1.0) : lu.at(i, m);
          const Complex u = (m <= j) ? lu.at(m, j) : Complex(0.0);
          sum += l * u;
        }
        worst = std::max(worst, std::abs(sum - a.vals[k]));
      }
    }
    CHECK(worst < 1e-12);
  }
  SUBCASE("zero pivot triggers a single shifted retry")
  {
    CsrMatrix z;
    z.rows = 2;
    z.row_ptr = {0, 1, 2};
    z.cols = {0, 1};
    z.vals = {0.0, 1.0};
    const Ilu0Preconditioner p(z);
    CHECK(p.applied_shift() > 0.0);
  }
}

TEST_CASE("mass and sponge")
{
  const Grid3 g{16, 16, 16, 3.0};
  auto m = build_mass(WavespeedModel::uniform(g));
  CHECK(m->max_abs() == 1.0);

  WavespeedModel half{g, std::vector<double>(g.size(), 2.0 * g.l_min)};
  half.sampling_rate[0] = g.l_min;
  const auto mh = build_mass(half);
  CHECK(mh->diagonal()[1] == Complex(0.25));

  auto eight = build_mass(WavespeedModel::eight_anomaly(g));
  int ones = 0, quarters = 0;
  for (auto v : eight->diagonal())
  {
    ones += v == 1.0;
    quarters += std::abs(v - 0.25) < 1e-15;
  }
  CHECK(ones + quarters == int(g.size()));
  CHECK(quarters > 0);

  WavespeedModel bad{g, std::vector<double>(g.size(), g.l_min)};
  bad.sampling_rate[5] = 0.5 * g.l_min;
  CHECK_THROWS_AS(build_mass(bad), ModelError);

  CHECK(build_sponge(g, 0, 2.0)->max_abs() == 0.0);
  auto d = build_sponge(g, 4, 1.3);
  CHECK(d->diagonal()[g.index(0, 0, 0)] == Complex(1.3));
  CHECK(d->diagonal()[g.index(8, 8, 8)] == Complex(0.0));
  CHECK(d->diagonal()[g.index(1, 8, 8)].real() == doctest::Approx(1.3 * 9.0 / 16.0));
  CHECK(estimate_rho(*d).value == 1.3);
  CHECK_THROWS_AS(build_sponge(g, 8, 1.0), ConfigurationError);
}

TEST_CASE("wavespeed raw round trip")
{
  const auto dir = std::filesystem::temp_directory_path() / "helmfci_ws_test";
  std::filesystem::create_directories(dir);
  const Grid3 g{4, 3, 2, 3.0};
  std::vector<double> c(g.size(), 1500.0);
  c[7] = 3000.0;
  for (const char *dtype : {"float32", "float64"})
  {
    WavespeedSidecar sc;
    sc.dims = {4, 3, 2};
    sc.dtype = dtype;
    sc.c_min = 1500.0;
    sc.c_max = 3000.0;
    write_wavespeed_raw(dir / "c.bin", sc, c);
    write_sidecar(dir / "c.json", sc);
    const auto m = load_wavespeed_model(dir / "c.bin", dir / "c.json", 3.0);
    CHECK(m.sampling_rate[7] == 6.0);
    CHECK(m.sampling_rate[0] == 3.0);
  }
  CHECK_THROWS(read_sidecar(dir / "missing.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("helmholtz composite and doubled system")
{
  const Grid3 g{8, 8, 1, 2.5};
  auto s = build_spectral_laplacian(g);
  auto m = build_mass(WavespeedModel::eight_anomaly(g));
  auto d = build_sponge(g, 2, 0.9);
  auto a = assemble_helmholtz(s, *m, *d, Discretization::Spectral);

  const auto x = testing::random_vector(g.size(), 11);
  auto expect = s->apply(x);
  for (std::size_t i = 0; i < x.size(); i++)
  {
    expect[i] += (-m->diagonal()[i] - 1i * d->diagonal()[i]) * x[i];
  }
  CHECK(testing::relative_error(a->apply(x), expect) < 1e-14);

  auto conj = a->conjugate();
  const auto ax = a->apply(x), cx = conj->apply(x);
  for (std::size_t i = 0; i < x.size(); i++)
  {
    expect[i] = ax[i] + 2.0i * d->diagonal()[i] * x[i];
  }
  CHECK(testing::relative_error(cx, expect) < 1e-14);

  auto dbl = assemble_doubled(*a);
  CHECK(dbl->dim() == 2 * g.size());
  CHECK(blas::norm2(dbl->apply(ComplexVector(dbl->dim(), 0.0))) == 0.0);
  const auto e = dbl->embed(x);
  CHECK(blas::norm2(ConstVectorView(e).subspan(0, g.size())) == 0.0);
  CHECK(dbl->extract(e) == x);

  SUBCASE("(iu; u) maps to (0; A u)")
  {
    ComplexVector w(dbl->dim());
    for (std::size_t i = 0; i < x.size(); i++)
    {
      w[i] = 1i * x[i];
      w[i + x.size()] = x[i];
    }
    const auto y = dbl->apply(w);
    CHECK(blas::norm2(ConstVectorView(y).subspan(0, x.size())) < 1e-13);
    CHECK(testing::relative_error(dbl->extract(y), a->apply(x)) < 1e-13);
  }
}

TEST_CASE("doubled eigenvalues without damping")
{
  // M = 0.75 I keeps A1 + I definite; with M = I the zero Fourier mode makes C a Jordan block.
  const Grid3 g{8, 6, 1, 2.5};
  auto s = build_spectral_laplacian(g);
  auto a1 = std::make_shared<HermitianPart>(s, std::vector<double>(g.size(), 0.75), 0.0);
  const auto mu = dense_eigenvalues(*assemble_doubled(a1, nullptr));
  // eig(C) = +-i sqrt(lambda), lambda = eig(A1 + I), so eig(iC - I) = -1 -+ sqrt(lambda).
  std::vector<double> expect;
  for (double l : spectral_laplacian_eigenvalues(g))
  {
    expect.push_back(-1.0 - std::sqrt(l + 0.25));
    expect.push_back(-1.0 + std::sqrt(l + 0.25));
  }
  std::sort(expect.begin(), expect.end());
  REQUIRE(mu.size() == expect.size());
  for (std::size_t i = 0; i < mu.size(); i++)
  {
    CHECK(std::abs(mu[i] - expect[i]) < 1e-10);
  }
}

TEST_CASE("estimate_rho")
{
  const DiagonalOperator d(ComplexVector{1.0, 2.0, 3.0});
  const auto est = estimate_rho(d);
  CHECK(est.value == 3.0);
  CHECK(!est.approximate);
}
