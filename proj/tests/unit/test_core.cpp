#include "doctest.h"

#include <cmath>
#include <thread>
#include "helmfci/core/error.hpp"
#include "helmfci/core/operator.hpp"
#include "helmfci/core/solve_stats.hpp"
#include "helmfci/operators/grid.hpp"
#include "helmfci/operators/spectral.hpp"
#include "support/random.hpp"

using namespace helmfci;

TEST_CASE("blas kernels")
{
  const ComplexVector x{1.0, 1i};
  CHECK(blas::dot(x, x) == Complex(2.0));
  CHECK(blas::dot(ComplexVector{1i}, ComplexVector{1.0}) == Complex(0.0, -1.0));

  ComplexVector y{3.0, 4.0};
  blas::axpy(0.0, x, y);
  CHECK(y == ComplexVector{3.0, 4.0});
  blas::axpy(2.0, x, y);
  CHECK(y == ComplexVector{5.0, Complex(4.0, 2.0)});

  CHECK(blas::norm2(ComplexVector(4, 1.0)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(blas::dot(x, ComplexVector(3)), DimensionError);
  CHECK_THROWS_AS(blas::require_finite(ComplexVector{std::nan("")}, "test"), NonFiniteError);
}

TEST_CASE("dot is deterministic and accurate on long vectors")
{
  const auto a = testing::random_vector(10007, 1), b = testing::random_vector(10007, 2);
  const Complex d1 = blas::dot(a, b), d2 = blas::dot(a, b);
  CHECK(d1 == d2);
  Complex naive = 0.0;
  for (std::size_t i = 0; i < a.size(); i++)
  {
    naive += std::conj(a[i]) * b[i];
  }
  CHECK(std::abs(d1 - naive) < 1e-10 * std::abs(naive));
}

TEST_CASE("apply contract")
{
  auto id = std::make_shared<DiagonalOperator>(ComplexVector(5, 1.0));
  const auto x = testing::random_vector(5, 3);
  CHECK(id->apply(x) == x);

  SUBCASE("shift by zero is the base operator")
  {
    auto d = std::make_shared<DiagonalOperator>(testing::random_vector(5, 4));
    ShiftedOperator s(d, 0.0);
    CHECK(s.apply(x) == d->apply(x));
    CHECK(s.kind() == OperatorKind::Shifted);
  }
  SUBCASE("dimension mismatch")
  {
    CHECK_THROWS_AS(id->apply(ComplexVector(4)), DimensionError);
  }
  SUBCASE("non-finite output")
  {
    DiagonalOperator bad(ComplexVector(5, std::numeric_limits<double>::infinity()));
    CHECK_THROWS_AS(bad.apply(ComplexVector(5, 1.0)), NonFiniteError);
  }
  SUBCASE("counters")
  {
    id->reset_counters();
    for (int k = 0; k < 17; k++)
    {
      id->apply(x);
    }
    CHECK(id->matvec_count() == 17);
    CHECK(id->precond_count() == 0);
    DiagonalOperator p(ComplexVector(5, 2.0), OperatorKind::InvLapPrecond);
    p.apply(x);
    CHECK(p.matvec_count() == 0);
    CHECK(p.precond_count() == 1);
  }
}

TEST_CASE("concurrent applications are counted exactly")
{
  const Grid3 g{8, 8, 8, 2.25};
  auto s = build_spectral_laplacian(g);
  const auto x = testing::random_vector(g.size(), 5);
  const auto ref = s->apply(x);
  s->reset_counters();
  std::vector<std::thread> pool;
  std::vector<int> same(4, 1);
  for (int t = 0; t < 4; t++)
  {
    pool.emplace_back([&, t]
                      {
                        for (int k = 0; k < 10; k++)
                        {
                          same[t] &= int(s->apply(x) == ref);
                        }
                      });
  }
  for (auto &th : pool)
  {
    th.join();
  }
  CHECK(s->matvec_count() == 40);
  CHECK(same == std::vector<int>(4, 1));
}

TEST_CASE("hermitian symmetry and linearity")
{
  const Grid3 g{16, 16, 16, 2.25};
  auto s = build_spectral_laplacian(g);
  auto d = DiagonalOperator::from_real(std::vector<double>(g.size(), 0.7));
  const auto x = testing::random_vector(g.size(), 6), y = testing::random_vector(g.size(), 7);
  for (const LinearOperator *op : {static_cast<const LinearOperator *>(s.get()),
                                   static_cast<const LinearOperator *>(d.get())})
  {
    const Complex lhs = blas::dot(x, op->apply(y));
    const Complex rhs = std::conj(blas::dot(y, op->apply(x)));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));

    const Complex alpha(0.3, -1.2), beta(-2.0, 0.5);
    ComplexVector comb(x);
    blas::scale(alpha, comb);
    blas::axpy(beta, y, comb);
    auto expect = op->apply(x);
    blas::scale(alpha, expect);
    blas::axpy(beta, op->apply(y), expect);
    CHECK(testing::relative_error(op->apply(comb), expect) < 1e-12);
  }
}

TEST_CASE("solve stats bookkeeping")
{
  SolveStats st;
  CHECK(st.final_residual() == 1.0);
  st.record(0, 1.0);
  st.mvs = 3;
  st.record(1, 0.5);
  CHECK(st.residual_history.size() == 2);
  CHECK(st.residual_history[1].matvecs == 3);
  CHECK(st.final_residual() == 0.5);
}
