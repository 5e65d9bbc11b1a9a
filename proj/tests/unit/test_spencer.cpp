#include <doctest.h>

#include "dopalg/catalog.hpp"
#include "dopalg/errors.hpp"
#include "dopalg/spencer.hpp"

using namespace dopalg;

TEST_SUITE("spencer") {
  TEST_CASE("multi-indices and binomials") {
    CHECK(multi_indices(3, 2).size() == 6);
    CHECK(multi_indices(4, 0).size() == 1);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(2, 5) == 0);
  }

  TEST_CASE("full symbols have no cohomology") {
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t q = 1; q <= 2; ++q) {
        auto rep = delta_complex(full_symbol(n, q), n);
        CHECK(rep.delta_squared_zero);
        for (auto h : rep.cohomology) CHECK(h == 0);
      }
  }

  TEST_CASE("killing symbols") {
    for (std::size_t n = 2; n <= 4; ++n) {
      auto g = killing_symbol(MetricSpec::euclidean(n));
      CHECK(g.dim() == n * (n - 1) / 2);
      CHECK(prolong(g).dim() == 0);
      auto m = killing_symbol(MetricSpec::minkowski(n));
      CHECK(m.dim() == g.dim());
      CHECK(delta_complex(m, n).cohomology == delta_complex(g, n).cohomology);
    }
  }

  TEST_CASE("symbols read off a system agree with the dedicated builders") {
    for (std::size_t n = 2; n <= 4; ++n) {
      auto a = symbol_of(killing(MetricSpec::euclidean(n)).matrix);
      auto b = killing_symbol(MetricSpec::euclidean(n));
      CHECK(a.dim() == b.dim());
      CHECK(delta_complex(a, n).cohomology == delta_complex(b, n).cohomology);
    }
    auto c = symbol_of(conformal_killing(MetricSpec::euclidean(3)).matrix);
    CHECK(c.dim() == conformal_symbol(MetricSpec::euclidean(3)).dim());
    CHECK_THROWS_AS(symbol_of(vessiot(std::nullopt).matrix), Error);
  }

  TEST_CASE("lanczos spaces") {
    CHECK(lanczos_space(2).dim == 2);
    CHECK(lanczos_space(3).dim == 8);
    auto l4 = lanczos_space(4);
    CHECK(l4.ambient == 24);
    CHECK(l4.rank == 4);
    CHECK(l4.dim == 20);
    CHECK_THROWS_AS(lanczos_space(1), UnsupportedDimension);
  }

  TEST_CASE("degree range") {
    CHECK_THROWS_AS(delta_complex(full_symbol(2, 1), 3), Error);
    CHECK_THROWS_AS(full_symbol(9, 1), UnsupportedDimension);
  }
}
