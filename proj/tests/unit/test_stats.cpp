#include <doctest.h>

#include <vector>

#include "rcxi/error.hpp"
#include "rcxi/stats.hpp"

using namespace rcxi;

TEST_CASE("mean and population variance") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(mean(v) == 2.5);
  CHECK(variance(v) == 1.25);
}

TEST_CASE("type-7 quantiles") {
  const std::vector<double> v{4, 1, 3, 2, 5};
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 1.0) == 5.0);
  CHECK(quantile(v, 0.5) == 3.0);
  CHECK(quantile(v, 0.1) == doctest::Approx(1.4));
  CHECK(median(std::vector<double>{1, 2, 3, 4}) == 2.5);
  CHECK(quantile(std::vector<double>{7}, 0.3) == 7.0);
}

TEST_CASE("quantile of nothing is an error") {
  CHECK_THROWS_AS(quantile(std::vector<double>{}, 0.5), rcxi::Error);
}
