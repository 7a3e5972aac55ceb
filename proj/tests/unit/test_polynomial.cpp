#include "doctest.h"
#include "ngd/error.hpp"
#include "ngd/polynomial.hpp"

#include <algorithm>
#include <cmath>

using namespace ngd;

TEST_CASE("construction trims trailing zeros") {
  CHECK(Polynomial{1.0, 2.0, 0.0, 0.0}.degree() == 1);
  CHECK(Polynomial{0.0, 0.0}.is_zero());
  CHECK(Polynomial{}.degree() == -1);
  CHECK(Polynomial{3.0}.degree() == 0);
  CHECK(Polynomial::monomial(3, 2.0).coeff(3) == 2.0);
  CHECK(Polynomial::monomial(3, 2.0).coeff(7) == 0.0);
}

TEST_CASE("arithmetic") {
  const Polynomial a{1.0, 0.22};
  CHECK(a * a == Polynomial{1.0, 0.44, 0.22 * 0.22});
  CHECK(a - a == Polynomial{});
  CHECK((a + Polynomial{0.0, -0.22}) == Polynomial{1.0});
  CHECK(a.pow(0) == Polynomial{1.0});
  CHECK(a.pow(3) == a * a * a);
  CHECK(Polynomial{5.0, 3.0, 2.0}.derivative() == Polynomial{3.0, 4.0});
  CHECK(Polynomial{5.0}.derivative().is_zero());
  CHECK((Polynomial{} * a).is_zero());
}

TEST_CASE("evaluation at real and imaginary points") {
  const Polynomial p{1.0, 2.0, 3.0};
  CHECK(p(2.0) == doctest::Approx(17.0));
  const auto v = p(std::complex<double>(0.0, 1.0));  // 1 + 2i - 3
  CHECK(v.real() == doctest::Approx(-2.0));
  CHECK(v.imag() == doctest::Approx(2.0));
  CHECK(p.magnitude_scale(2.0) == doctest::Approx(17.0));
}

TEST_CASE("long division") {
  const Polynomial a = Polynomial{1.0, 1.0} * Polynomial{2.0, 0.0, 1.0} + Polynomial{0.5};
  const auto [q, r] = divide(a, Polynomial{2.0, 0.0, 1.0});
  CHECK(approx_equal(q, Polynomial{1.0, 1.0}, 1e-14));
  CHECK(approx_equal(r, Polynomial{0.5}, 1e-14));
  CHECK_THROWS_AS((void)divide(a, Polynomial{}), InvalidArgument);

  const auto low = divide(Polynomial{1.0}, Polynomial{1.0, 1.0});
  CHECK(low.quotient.is_zero());
  CHECK(low.remainder == Polynomial{1.0});
}

TEST_CASE("roots: closed forms") {
  CHECK(roots(Polynomial{4.0}).empty());
  const auto r1 = roots(Polynomial{1.0, 0.22});
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].real() == doctest::Approx(-1.0 / 0.22));

  // (s - 1e-8)(s - 1e8): the cancellation-free formula keeps the small root.
  const auto r2 = roots(Polynomial{1.0, -(1e8 + 1e-8), 1.0});
  std::vector<double> re{r2[0].real(), r2[1].real()};
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(1e-8).epsilon(1e-10));
  CHECK(re[1] == doctest::Approx(1e8).epsilon(1e-10));

  const auto rc = roots(Polynomial{2.0, 2.0, 1.0});  // -1 +- i
  CHECK(rc[0].real() == doctest::Approx(-1.0));
  CHECK(std::abs(rc[0].imag()) == doctest::Approx(1.0));
  CHECK(rc[0] == std::conj(rc[1]));

  CHECK_THROWS_AS((void)roots(Polynomial{}), InvalidArgument);
}

TEST_CASE("roots: companion matrix path reproduces known factors") {
  // (1 + s)(1 + 2s)(1 - 0.5 s)(s^2 + 2s + 5)
  const Polynomial p = Polynomial{1.0, 1.0} * Polynomial{1.0, 2.0} * Polynomial{1.0, -0.5} * Polynomial{5.0, 2.0, 1.0};
  const auto r = roots(p);
  REQUIRE(r.size() == 5);
  const std::vector<std::complex<double>> expected{{-1.0, 0.0}, {-0.5, 0.0}, {2.0, 0.0}, {-1.0, 2.0}, {-1.0, -2.0}};
  for (const auto& e : expected) {
    const bool found = std::any_of(r.begin(), r.end(), [&](auto z) { return std::abs(z - e) < 1e-9; });
    CHECK_MESSAGE(found, "missing root " << e);
  }
  for (const auto& z : r) CHECK(std::abs(p(z)) < 1e-9 * p.magnitude_scale(std::abs(z)));
}
