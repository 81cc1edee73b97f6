#include "doctest.h"

#include <cmath>
#include <random>
#include "helmfci/core/error.hpp"
#include "helmfci/krylov/gmres.hpp"
#include "support/random.hpp"

using namespace helmfci;

namespace
{

std::shared_ptr<DenseOperator> random_dense(std::size_t n, std::uint64_t seed)
{
  auto a = testing::random_vector(n * n, seed);
  blas::scale(0.3 / std::sqrt(double(n)), a);
  for (std::size_t i = 0; i < n; i++)
  {
    a[i * n + i] += 2.0;
  }
  return std::make_shared<DenseOperator>(n, std::move(a));
}

void check_monotone(const SolveStats &st)
{
  for (std::size_t i = 1; i < st.residual_history.size(); i++)
  {
    CHECK(st.residual_history[i].relative_residual <=
          st.residual_history[i - 1].relative_residual * (1.0 + 1e-12));
  }
}

}  // namespace

TEST_CASE("gmres basics")
{
  const auto f = testing::random_vector(30, 1);
  SUBCASE("identity in one step")
  {
    DiagonalOperator id(ComplexVector(30, 1.0));
    const auto res = gmres(id, f, {}, {});
    CHECK(res.stats.its == 1);
    CHECK(testing::relative_error(res.x, f) < 1e-14);
    CHECK(res.stats.residual_history.front().relative_residual == 1.0);
  }
  SUBCASE("two distinct eigenvalues need two steps")
  {
    ComplexVector d(30);
    for (std::size_t i = 0; i < 30; i++)
    {
      d[i] = (i % 2) ? Complex(3.0, -1.0) : Complex(-0.5, 0.2);
    }
    DiagonalOperator a(d);
    KrylovConfig cfg;
    cfg.tol = 1e-13;
    const auto res = gmres(a, f, {}, cfg);
    CHECK(res.stats.its == 2);
    CHECK(res.stats.final_residual() < 1e-12);
  }
  SUBCASE("dense systems terminate within n steps")
  {
    for (std::size_t n : {5u, 17u, 50u})
    {
      auto a = random_dense(n, 10 + n);
      const auto b = testing::random_vector(n, 20 + n);
      KrylovConfig cfg;
      cfg.tol = 1e-10;
      cfg.restart = int(n);
      const auto res = gmres(*a, b, {}, cfg);
      CHECK(res.stats.converged);
      CHECK(res.stats.its <= int(n));
      auto r = a->apply(res.x);
      blas::xpby(b, -1.0, r);
      CHECK(blas::norm2(r) / blas::norm2(b) < 1e-9);
      check_monotone(res.stats);
    }
  }
  SUBCASE("restarts keep the residual non-increasing")
  {
    auto a = random_dense(60, 3);
    const auto b = testing::random_vector(60, 4);
    KrylovConfig cfg;
    cfg.restart = 5;
    cfg.tol = 1e-10;
    a->reset_counters();
    const auto res = gmres(*a, b, {}, cfg);
    CHECK(res.stats.converged);
    check_monotone(res.stats);
    CHECK(a->matvec_count() == res.stats.mvs);
    // one true-residual product per restart
    CHECK(res.stats.mvs == std::uint64_t(res.stats.its + (res.stats.its - 1) / 5));
  }
  SUBCASE("zero right-hand side")
  {
    DiagonalOperator id(ComplexVector(30, 1.0));
    const auto res = gmres(id, ComplexVector(30, 0.0), {}, {});
    CHECK(blas::norm2(res.x) == 0.0);
    CHECK(res.stats.its == 0);
  }
  CHECK_THROWS_AS(gmres(DiagonalOperator(ComplexVector(3, 1.0)), f, {}, {}), DimensionError);
}

TEST_CASE("flexible with a fixed preconditioner matches right preconditioning")
{
  auto a = random_dense(40, 7);
  ComplexVector md(40);
  for (std::size_t i = 0; i < 40; i++)
  {
    md[i] = 1.0 / (1.0 + 0.05 * double(i));
  }
  auto m = std::make_shared<DiagonalOperator>(md, OperatorKind::InvLapPrecond);
  const auto b = testing::random_vector(40, 8);
  KrylovConfig cfg;
  cfg.tol = 1e-10;
  cfg.restart = 8;
  const auto right = gmres(*a, b, {}, cfg, as_preconditioner(m));
  cfg.flexible = true;
  const auto flex = gmres(*a, b, {}, cfg, as_preconditioner(m));
  REQUIRE(right.stats.residual_history.size() == flex.stats.residual_history.size());
  for (std::size_t i = 0; i < right.stats.residual_history.size(); i++)
  {
    CHECK(std::abs(right.stats.residual_history[i].relative_residual -
                   flex.stats.residual_history[i].relative_residual) < 1e-10);
  }
  CHECK(testing::relative_error(flex.x, right.x) < 1e-10);
  CHECK(flex.stats.precond_applies == std::uint64_t(flex.stats.its));
}

TEST_CASE("optimal step")
{
  const auto aw = testing::random_vector(20, 1);
  CHECK(std::abs(optimal_step(aw, aw).d - 1.0) < 1e-15);

  // e orthogonal to aw
  auto e = testing::random_vector(20, 2);
  blas::axpy(-blas::dot(aw, e) / blas::dot(aw, aw), aw, e);
  CHECK(std::abs(optimal_step(aw, e).d) < 1e-14);

  ComplexVector f(e);
  blas::axpy(Complex(2.0, 1.0), aw, f);
  const auto s = optimal_step(aw, f);
  CHECK(std::abs(s.d - Complex(2.0, 1.0)) < 1e-12);
  ComplexVector r(f);
  blas::axpy(-s.d, aw, r);
  CHECK(std::abs(blas::dot(aw, r)) < 1e-12 * blas::norm2(aw) * blas::norm2(f));
  CHECK(blas::norm2(r) <= blas::norm2(f));

  const auto z = optimal_step(ComplexVector(20, 0.0), f);
  CHECK(z.degenerate);
  CHECK(z.d == 0.0);
}

TEST_CASE("elman bound on normal instances")
{
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int inst = 0; inst < 5; inst++)
  {
    const double omega = 5.0 + 20.0 * u(rng), s = 0.2 + 0.8 * u(rng), rho = 0.5 + u(rng);
    ComplexVector lam(300);
    for (auto &l : lam)
    {
      do
      {
        l = Complex((2.0 * u(rng) - 1.0) * rho * omega * omega, -(s * omega + u(rng) * rho * omega * omega));
      } while (std::abs(l) > rho * omega * omega);
    }
    DiagonalOperator a(lam);
    const double mu = std::sqrt(1.0 - s * s / (rho * rho * omega * omega));
    KrylovConfig cfg;
    cfg.restart = 60;
    cfg.max_its = 60;
    cfg.tol = 1e-12;
    const auto res = gmres(a, testing::random_vector(300, 100 + inst), {}, cfg);
    for (const auto &h : res.stats.residual_history)
    {
      CHECK(h.relative_residual <= 1.05 * std::pow(mu, h.iteration));
    }
  }
}
