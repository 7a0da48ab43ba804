#include "phi43/config.hpp"
#include "phi43/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace phi43;

TEST_CASE("config text round trip") {
  ExperimentConfig c;
  c.cutoff = 16;
  c.dt = 1.0 / 128;
  c.diagrams = {"30", "22p"};
  c.lags = {0, 3};
  c.probes = "1,0,0;2,1,0";
  const auto text = to_text(c);
  const auto back = parse_config(text);
  CHECK(to_text(back) == text);
  CHECK(config_hash(back) == config_hash(c));
  auto d = c;
  d.threads = 4;
  d.out = "elsewhere";
  CHECK(config_hash(d) == config_hash(c));
  d.seed += 1;
  CHECK(config_hash(d) != config_hash(c));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("no_such_key = 3\n"), ConfigError);
  ExperimentConfig c;
  CHECK_THROWS_AS(set_key(c, "cutoff", "eight"), ConfigError);
  c.cutoff = -1;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = ExperimentConfig{};
  c.diagrams = {"9"};
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK(parse_frequency_list("1,0,0;2,1,0", 3).size() == 2);
  CHECK_THROWS(parse_frequency_list("1,0", 3));
}

TEST_CASE("estimates") {
  const auto e = mean_se({1.0, 2.0, 3.0, 4.0});
  CHECK(e.mean == 2.5);
  CHECK(e.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  std::vector<double> x(100);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = double(i % 10);
  const auto b = batch_means(x, 10);
  CHECK(b.mean == doctest::Approx(4.5));
  CHECK(b.se == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.95) == doctest::Approx(1.959963985));
  CHECK(bonferroni_z(1, 0.05) == doctest::Approx(1.959963985));
  CHECK(bonferroni_z(10, 0.0027) > bonferroni_z(1, 0.0027));
}

TEST_CASE("line fit") {
  std::vector<double> x{0, 1, 2, 3, 4}, y;
  for (double v : x) y.push_back(2.0 - 3.0 * v);
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-3.0));
  CHECK(f.intercept == doctest::Approx(2.0));
  CHECK(f.lower <= f.slope);
  CHECK(f.upper >= f.slope);
  CHECK_THROWS(fit_line({0, 1}, {0, 1}));
}
