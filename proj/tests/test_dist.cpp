#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <memory>
#include <vector>

#include "mprisk/empirical.hpp"
#include "mprisk/errors.hpp"
#include "mprisk/families.hpp"
#include "support.hpp"

using namespace mprisk;

namespace {

std::vector<std::unique_ptr<Distribution>> sample_families() {
  std::vector<std::unique_ptr<Distribution>> out;
  for (const ParametricFamily& f :
       std::vector<ParametricFamily>{UniformParams{1.0}, UniformParams{7.5}, ExponentialParams{0.3},
                                     ExponentialParams{4.0}, ParetoParams{2.1}, ParetoParams{3.0},
                                     ParetoParams{9.0}, GammaParams{0.3, 2.0}, GammaParams{2.0, 1.0},
                                     GammaParams{5.0, 0.5}, WeibullParams{0.5, 2.0},
                                     WeibullParams{1.7, 1.0}, WeibullParams{4.0, 3.0}}) {
    out.push_back(make_distribution(f));
  }
  return out;
}

// τ by direct x-space quadrature of x f(x) over (a, upper), independent of
// both the closed forms and the quantile-space fallback.
double tau_by_density(const Distribution& d, double a, double upper) {
  const auto xf = [&](double x) { return x * d.density(x); };
  return test::gauss_legendre(xf, a, upper, 20000) / d.survival(a);
}

}  // namespace

TEST_SUITE("dist") {

TEST_CASE("tail expectation reference values") {
  CHECK(Exponential(1.0).tail_expectation(3.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(Uniform(1.0).tail_expectation(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(Pareto(3.0).tail_expectation(1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(Gamma(1.0, 2.0).tail_expectation(2.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(Weibull(1.0, 2.0).tail_expectation(2.0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("closed-form tail expectation matches the quantile-integral fallback") {
  for (const auto& d : sample_families()) {
    for (double t : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999}) {
      const double a = d->quantile(t);
      const double closed = d->tail_expectation(a);
      const double numeric = numeric_tail_expectation(*d, a);
      INFO(d->name() << " a=" << a);
      CHECK(std::abs(closed - numeric) <= 1e-8 * std::abs(closed));
    }
  }
}

TEST_CASE("Gamma and Weibull tail expectation against density quadrature") {
  const Gamma g(2.5, 1.5);
  const Weibull w(2.0, 1.0);
  for (double a : {0.5, 2.0, 5.0}) {
    CHECK(g.tail_expectation(a) == doctest::Approx(tau_by_density(g, a, 120.0)).epsilon(1e-9));
  }
  for (double a : {0.2, 1.0, 2.0}) {
    CHECK(w.tail_expectation(a) == doctest::Approx(tau_by_density(w, a, 12.0)).epsilon(1e-9));
  }
}

TEST_CASE("Gamma cdf is the regularized lower incomplete gamma") {
  const Gamma g(3.3, 0.7);
  for (double x : {0.01, 0.5, 2.0, 6.0}) {
    CHECK(g.cdf(x) == doctest::Approx(boost::math::gamma_p(3.3, x / 0.7)).epsilon(1e-12));
    CHECK(g.quantile(g.cdf(x)) == doctest::Approx(x).epsilon(1e-9));
  }
}

TEST_CASE("tail identity tau*S + K = mean") {
  for (const auto& d : sample_families()) {
    for (double t : {0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 0.9999}) {
      const double a = d->quantile(t);
      INFO(d->name() << " a=" << a);
      CHECK(std::abs(d->tail_expectation(a) * d->survival(a) + d->partial_moment(a) - d->mean()) <= 1e-10 * std::max(1.0, d->mean()));
    }
  }
}

TEST_CASE("basic law invariants") {
  for (const auto& d : sample_families()) {
    INFO(d->name());
    CHECK(d->second_moment() >= d->mean() * d->mean());
    CHECK(d->cdf(-1.0) == 0.0);
    for (double t : {0.1, 0.5, 0.9, 0.999}) {
      const double a = d->quantile(t);
      CHECK(d->tail_expectation(a) > a);
    }
  }
}

TEST_CASE("quantile and cdf round trip on random grids") {
  auto gen = test::rng(101);
  for (const auto& d : sample_families()) {
    for (int i = 0; i < 200; ++i) {
      const double t = test::uniform_in(gen, 1e-6, 1.0 - 1e-6);
      const double q = d->quantile(t);
      INFO(d->name() << " t=" << t);
      CHECK(d->cdf(q) >= t * (1.0 - 1e-12));
      const double x = d->quantile(test::uniform_in(gen, 0.0, 0.999));
      CHECK(d->quantile(d->cdf(x)) <= x * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("density integrates the cdf") {
  for (const auto& d : sample_families()) {
    for (double t : {0.2, 0.5, 0.8}) {
      const double x = d->quantile(t);
      const double h = 1e-5 * std::max(1.0, x);
      INFO(d->name() << " x=" << x);
      CHECK((d->cdf(x + h) - d->cdf(x - h)) / (2.0 * h) == doctest::Approx(d->density(x)).epsilon(1e-5));
    }
  }
}

TEST_CASE("unit-shape Gamma and Weibull collapse to the exponential") {
  for (double beta : {0.5, 1.0, 3.0}) {
    const Exponential e(1.0 / beta);
    const Gamma g(1.0, beta);
    const Weibull w(1.0, beta);
    for (double t : {0.01, 0.3, 0.5, 0.9, 0.9999}) {
      const double x = e.quantile(t);
      CHECK(g.cdf(x) == doctest::Approx(e.cdf(x)).epsilon(1e-9));
      CHECK(w.cdf(x) == doctest::Approx(e.cdf(x)).epsilon(1e-9));
      CHECK(g.quantile(t) == doctest::Approx(x).epsilon(1e-9));
      CHECK(w.quantile(t) == doctest::Approx(x).epsilon(1e-9));
      CHECK(g.tail_expectation(x) == doctest::Approx(e.tail_expectation(x)).epsilon(1e-9));
      CHECK(w.tail_expectation(x) == doctest::Approx(e.tail_expectation(x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("Pareto survival and quantile") {
  const Pareto p(3.0);
  CHECK(p.survival(1.0) == doctest::Approx(0.125));
  CHECK(p.quantile(0.875) == doctest::Approx(1.0));
  CHECK(p.quantile(0.5) == doctest::Approx(std::pow(0.5, -1.0 / 3.0) - 1.0));
  CHECK(p.mean() == doctest::Approx(0.5));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(make_distribution(ParetoParams{2.0}), InvalidArgument);
  CHECK_THROWS_WITH(make_distribution(ParetoParams{1.5}), "theta must exceed 2");
  CHECK_THROWS_AS(make_distribution(UniformParams{0.0}), InvalidArgument);
  CHECK_THROWS_AS(make_distribution(ExponentialParams{-1.0}), InvalidArgument);
  CHECK_THROWS_AS(make_distribution(GammaParams{1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(make_distribution(WeibullParams{std::nan(""), 1.0}), InvalidArgument);
}

TEST_CASE("tail expectation beyond the support") {
  CHECK_THROWS_AS(Uniform(1.0).tail_expectation(1.0), DomainError);
  CHECK_THROWS_AS(Uniform(1.0).tail_expectation(2.0), DomainError);
  const auto s = make_empirical({0.0, 2.0});
  CHECK_THROWS_AS(s.tail_expectation(2.0), DomainError);
}

TEST_CASE("empirical construction") {
  const auto s = make_empirical({2.0, 0.0});
  CHECK(s.mean() == 1.0);
  CHECK(s.second_moment() == 2.0);
  CHECK(s.values()[0] == 0.0);
  CHECK_THROWS_AS(make_empirical({5.0}), InvalidArgument);
  CHECK_THROWS_AS(make_empirical({1.0, -2.0}), InvalidArgument);
  CHECK_THROWS_AS(make_empirical({1.0, std::nan("")}), InvalidArgument);
  CHECK(make_empirical({0.0, 10.0}, std::vector<double>{0.9, 0.1}).mean() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(make_empirical({0.0, 10.0}, std::vector<double>{0.9, 0.2}), InvalidArgument);
  CHECK_THROWS_AS(make_empirical({0.0, 10.0}, std::vector<double>{1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(make_empirical({0.0, 10.0}, std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("empirical step functions and strict tail") {
  const auto s = make_empirical({4.0, 1.0, 3.0, 2.0});
  CHECK(s.cdf(2.0) == doctest::Approx(0.5));
  CHECK(s.cdf(1.999) == doctest::Approx(0.25));
  CHECK(s.quantile(0.5) == 2.0);
  CHECK(s.quantile(0.5000001) == 3.0);
  CHECK(s.quantile(0.0) == 1.0);
  CHECK(s.survival(2.0) == doctest::Approx(0.5));
  CHECK(s.point_mass(3.0) == doctest::Approx(0.25));
  CHECK(s.tail_expectation(2.0) == doctest::Approx(3.5));  // strict: 2 excluded
  CHECK(s.tail_expectation(1.5) == doctest::Approx(3.0));
  CHECK(s.partial_moment(2.0) == doctest::Approx(0.75));

  const auto pair = make_empirical({0.0, 2.0});
  CHECK(pair.tail_expectation(0.0) == 2.0);
  CHECK(pair.tail_expectation(1.0) == 2.0);
}

TEST_CASE("weighted empirical tail") {
  const auto s = make_empirical({0.0, 1000.0}, std::vector<double>{0.9, 0.1});
  CHECK(s.survival(500.0) == doctest::Approx(0.1));
  CHECK(s.tail_expectation(0.0) == doctest::Approx(1000.0));
  CHECK(s.quantile(0.9) == 0.0);
  CHECK(s.quantile(0.95) == 1000.0);
}

}
