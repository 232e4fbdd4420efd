#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "wordgroup/compnet.hpp"

using namespace wordgroup;
using Vec = std::vector<double>;

namespace {

NetworkConfig config(std::size_t k, double first, double last,
                     WinnerRule rule = WinnerRule::kEuclidean) {
  NetworkConfig c;
  c.num_units = k;
  c.learning_rate_initial = first;
  c.learning_rate_final = last;
  c.winner_rule = rule;
  return c;
}

InputVector in(const Vec& v) { return InputVector::from_dense(v); }

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(config(2, 0.3, 0.01).validate());
  CHECK_NOTHROW(config(2, 0.3, 0.0).validate());
  CHECK_THROWS_AS(config(1, 0.3, 0.01).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(2, 0.0, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(2, 1.5, 0.1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(2, 0.3, 0.5).validate(), std::invalid_argument);
  auto c = config(2, 0.3, 0.01);
  c.epochs = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(parse_winner_rule("dot") == WinnerRule::kDotProduct);
  CHECK_THROWS(parse_winner_rule("cosine"));
}

TEST_CASE("encode_occurrences") {
  const TokenStream tokens{"a", "b", "a", "c", "a", "b"};
  const auto occ = encode_occurrences(tokens, {"a", "b"}, {"a", "b", "c"}, {1, 0});
  REQUIRE(occ.size() == 5);  // c is not a target
  CHECK(occ[0].position == 0);
  CHECK(occ[0].word == 0);
  // word block a, context {b}
  CHECK(occ[0].input.to_dense(5) == Vec{1, 0, 0, 1, 0});
  // position 2: context {b, c}
  CHECK(occ[2].input.to_dense(5) == Vec{1, 0, 0, 0.5, 0.5});
  // position 5 (b): context {a}
  CHECK(occ[4].input.to_dense(5) == Vec{0, 1, 1, 0, 0});

  const auto lonely = encode_occurrences({"a"}, {"a"}, {"a"}, {2, 0});
  REQUIRE(lonely.size() == 1);
  CHECK(lonely[0].input.to_dense(2) == Vec{1, 0});
}

TEST_CASE("init") {
  const std::vector<InputVector> two{in({1, 0}), in({0, 1})};
  const auto net = CompetitiveNetwork::init(config(2, 0.5, 0.5), 2, two);
  const auto& w = net.weights();
  CHECK(((w[0] == Vec{1, 0} && w[1] == Vec{0, 1}) || (w[0] == Vec{0, 1} && w[1] == Vec{1, 0})));
  CHECK(CompetitiveNetwork::init(config(2, 0.5, 0.5), 2, two).weights() == w);
  CHECK_THROWS_AS(CompetitiveNetwork::init(config(3, 0.5, 0.5), 2, two), std::invalid_argument);

  // Distinct values are preferred over repeated samples.
  const std::vector<InputVector> dupes{in({1, 0}), in({1, 0}), in({1, 0}), in({0, 1})};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto c = config(2, 0.5, 0.5);
    c.seed = seed;
    const auto n = CompetitiveNetwork::init(c, 2, dupes);
    CHECK(n.weights()[0] != n.weights()[1]);
  }
  const std::vector<InputVector> same{in({1, 0}), in({1, 0})};
  CHECK(CompetitiveNetwork::init(config(2, 0.5, 0.5), 2, same).weights()[1] == Vec{1, 0});
}

TEST_CASE("winner, euclidean rule") {
  auto net = CompetitiveNetwork::from_weights(config(2, 0.5, 0.5), {{0, 0}, {1, 1}});
  CHECK(net.winner(in({0.9, 0.9})) == 1);
  CHECK(net.winner(in({1, 1})) == 1);
  CHECK(net.winner(in({0.5, 0.5})) == 0);
  CHECK(net.winner(in({0, 0})) == 0);
  CHECK_THROWS_AS(net.winner(in({0, 0, 1})), std::invalid_argument);
}

TEST_CASE("winner, dot product rule") {
  auto net = CompetitiveNetwork::from_weights(config(2, 0.5, 0.5, WinnerRule::kDotProduct),
                                              {{0, 0}, {1, 1}});
  CHECK(net.winner(in({0.9, 0.9})) == 1);
  auto tied = CompetitiveNetwork::from_weights(config(2, 0.5, 0.5, WinnerRule::kDotProduct),
                                               {{1, 0}, {0, 1}});
  CHECK(tied.winner(in({0.5, 0.5})) == 0);
  CHECK(tied.winner(in({0.2, 0.7})) == 1);
}

TEST_CASE("train_step") {
  SUBCASE("half step") {
    auto net = CompetitiveNetwork::from_weights(config(2, 0.5, 0.5), {{0, 0}, {5, 5}});
    CHECK(net.train_step(in({1, 0})) == 0);
    CHECK(net.weights()[0] == Vec{0.5, 0});
    CHECK(net.weights()[1] == Vec{5, 5});
    CHECK(net.step() == 1);
  }
  SUBCASE("full step and zero update") {
    auto net = CompetitiveNetwork::from_weights(config(2, 1.0, 1.0), {{0.25, 0}, {5, 5}});
    net.train_step(in({0.3, 0.2}));
    CHECK(net.weights()[0] == Vec{0.3, 0.2});
    net.train_step(in({0.3, 0.2}));
    CHECK(net.weights()[0] == Vec{0.3, 0.2});
  }
}

TEST_CASE("train_step contracts the winner and leaves others bitwise unchanged") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (WinnerRule rule : {WinnerRule::kEuclidean, WinnerRule::kDotProduct}) {
    std::vector<std::vector<double>> w(4, Vec(6));
    for (auto& row : w) {
      for (auto& x : row) x = u(rng);
    }
    auto net = CompetitiveNetwork::from_weights(config(4, 0.7, 0.1, rule), w);
    net.schedule(200);
    for (int t = 0; t < 200; ++t) {
      Vec x(6);
      for (auto& v : x) v = u(rng);
      const auto before = net.weights();
      const double rate = net.learning_rate();
      const auto input = in(x);
      const std::size_t k = net.winner(input);
      const double d_before = std::sqrt(net.squared_distance(k, input));
      CHECK(net.train_step(input) == k);
      CHECK(std::sqrt(net.squared_distance(k, input)) ==
            doctest::Approx((1.0 - rate) * d_before).epsilon(1e-12));
      for (std::size_t j = 0; j < 4; ++j) {
        if (j != k) CHECK(net.weights()[j] == before[j]);
      }
    }
  }
}

TEST_CASE("learning rate decays linearly over the schedule") {
  auto net = CompetitiveNetwork::from_weights(config(2, 0.3, 0.1), {{0}, {1}});
  net.schedule(5);
  std::vector<double> seen;
  for (int t = 0; t < 6; ++t) {
    seen.push_back(net.learning_rate());
    net.train_step(in({0.0}));
  }
  CHECK(seen[0] == doctest::Approx(0.3));
  CHECK(seen[1] == doctest::Approx(0.25));
  CHECK(seen[2] == doctest::Approx(0.2));
  CHECK(seen[4] == doctest::Approx(0.1));
  CHECK(seen[5] == doctest::Approx(0.1));
}

TEST_CASE("train and classify") {
  const std::vector<InputVector> one{in({1, 0})};
  auto net = CompetitiveNetwork::from_weights(config(2, 0.5, 0.5), {{0, 0}, {1, 1}});
  const auto log = train(net, one, 1);
  REQUIRE(log.winners.size() == 1);
  CHECK(log.winners[0][0] + log.winners[0][1] == 1);
  CHECK(log.snapshots.size() == 1);
  CHECK_THROWS_AS(train(net, std::vector<InputVector>{}, 1), std::invalid_argument);
  CHECK_THROWS_AS(train(net, one, 0), std::invalid_argument);

  CHECK(classify(net, std::vector<InputVector>{}).empty());
}

TEST_CASE("zero final rate freezes the last epoch") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<InputVector> stream;
  for (int i = 0; i < 50; ++i) stream.push_back(in({u(rng), u(rng), u(rng)}));
  auto c = config(3, 0.5, 0.0, WinnerRule::kDotProduct);
  auto net = CompetitiveNetwork::init(c, 3, stream);
  // Schedule over one epoch, then keep training at the final rate.
  train(net, stream, 1);
  const auto frozen = net.weights();
  const auto labels = classify(net, stream);
  for (const auto& x : stream) net.train_step(x);
  CHECK(net.weights() == frozen);
  CHECK(classify(net, stream) == labels);
}

TEST_CASE("two separated clusters end up one per unit") {
  std::mt19937 rng(5);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<InputVector> stream;
  std::vector<int> truth;
  for (int i = 0; i < 200; ++i) {
    const int c = static_cast<int>(rng() % 2);
    const double cx = c ? 1.0 : 0.0;
    stream.push_back(in({cx + noise(rng), cx + noise(rng), 0.5 + noise(rng)}));
    truth.push_back(c);
  }
  {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto c = config(2, 0.3, 0.01, WinnerRule::kEuclidean);
      c.seed = seed;
      auto net = CompetitiveNetwork::init(c, 3, stream);
      train(net, stream, 3);
      const auto labels = classify(net, stream);
      // Nearest-centroid labeling with the true class means as the oracle.
      Vec m0(3, 0.0), m1(3, 0.0);
      double n0 = 0, n1 = 0;
      for (std::size_t i = 0; i < stream.size(); ++i) {
        const auto x = stream[i].to_dense(3);
        for (int d = 0; d < 3; ++d) (truth[i] ? m1 : m0)[d] += x[d];
        (truth[i] ? n1 : n0) += 1;
      }
      for (int d = 0; d < 3; ++d) m0[d] /= n0, m1[d] /= n1;
      const auto oracle = CompetitiveNetwork::from_weights(config(2, 0.5, 0.5), {m0, m1});
      const auto expected = classify(oracle, stream);
      const bool same = labels == expected;
      std::vector<std::size_t> flipped(expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i) flipped[i] = 1 - expected[i];
      CHECK((same || labels == flipped));
    }
  }
}

TEST_CASE("dot product rule separates probability vectors with disjoint support") {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<InputVector> stream;
  std::vector<std::size_t> truth;
  for (int i = 0; i < 300; ++i) {
    const std::size_t c = rng() % 2;
    Vec x(6, 0.0);
    double total = 0;
    for (std::size_t d = 3 * c; d < 3 * c + 3; ++d) total += x[d] = u(rng);
    for (auto& v : x) v /= total;
    stream.push_back(in(x));
    truth.push_back(c);
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto c = config(2, 0.3, 0.01, WinnerRule::kDotProduct);
    c.seed = seed;
    auto net = CompetitiveNetwork::init(c, 6, stream);
    train(net, stream, 3);
    const auto labels = classify(net, stream);
    std::vector<std::size_t> flipped(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) flipped[i] = 1 - truth[i];
    CHECK((labels == truth || labels == flipped));
  }
}

TEST_CASE("centroid weights label by nearest centroid") {
  auto net = CompetitiveNetwork::from_weights(config(2, 0.5, 0.5), {{0.0, 0.0}, {1.0, 0.0}});
  const std::vector<InputVector> xs{in({0.1, 0.3}), in({0.9, -0.2}), in({0.49, 0.0}),
                                    in({0.51, 0.0})};
  CHECK(classify(net, xs) == std::vector<std::size_t>{0, 1, 0, 1});
  CHECK(classify(net, xs) == classify(net, xs));
}

TEST_CASE("snapshots are deterministic and round trip") {
  std::vector<InputVector> stream;
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) stream.push_back(in({u(rng), u(rng)}));
  auto c = config(2, 0.3, 0.01, WinnerRule::kDotProduct);
  c.seed = 77;
  auto a = CompetitiveNetwork::init(c, 2, stream);
  auto b = CompetitiveNetwork::init(c, 2, stream);
  const auto la = train(a, stream, 2), lb = train(b, stream, 2);
  CHECK(la.snapshots == lb.snapshots);
  CHECK(la.winners == lb.winners);
  CHECK(la.snapshots.back().rfind("{\"dims\":2,\"K\":2,\"seed\":77,\"step\":60,", 0) == 0);
  const auto back = CompetitiveNetwork::from_snapshot_json(a.snapshot_json(), c);
  CHECK(back.weights() == a.weights());
  CHECK(back.step() == a.step());
  CHECK(back.snapshot_json() == a.snapshot_json());
}
