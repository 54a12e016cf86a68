#include "memix/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "support/test_support.hpp"

using namespace memix;
using Catch::Approx;

namespace {

MeTriple exp_law(double rate) {
  RowVectorXd a(1);
  a << 1.0;
  MatrixXd T(1, 1);
  T << -rate;
  VectorXd t(1);
  t << rate;
  return MeTriple(a, T, t);
}

MeTriple random_ph(std::mt19937_64& g, int p) {
  const MatrixXd T = memix::test::random_subintensity(g, p);
  const VectorXd t = -T.rowwise().sum();
  return MeTriple(memix::test::random_simplex(g, p), T, t);
}

MmeamModel random_model(std::mt19937_64& g, int m, int L, int p) {
  std::vector<std::vector<MeTriple>> pools(m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < L; ++i) pools[j].push_back(random_ph(g, p));
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::int64_t cells = 1;
  for (int j = 0; j < m; ++j) cells *= L;
  std::vector<double> w(static_cast<std::size_t>(cells));
  double sum = 0.0;
  for (double& x : w) sum += (x = u(g));
  for (double& x : w) x /= sum;
  return MmeamModel(std::move(pools),
                    WeightTensor::dense(std::vector<int>(m, L), w));
}

bool same_model(const MmeamModel& a, const MmeamModel& b) {
  if (a.dim() != b.dim()) return false;
  for (int j = 0; j < a.dim(); ++j) {
    if (a.pool(j).size() != b.pool(j).size()) return false;
    for (std::size_t i = 0; i < a.pool(j).size(); ++i) {
      const MeTriple& x = a.pool(j)[i];
      const MeTriple& y = b.pool(j)[i];
      if (x.alpha() != y.alpha() || x.T() != y.T() || x.t() != y.t())
        return false;
    }
  }
  if (a.weights().entries() != b.weights().entries()) return false;
  return true;
}

const std::string kIndepExp2 =
    "{\"M\":2,\"pools\":[[{\"alpha\":[1.0],\"T\":[[-1.0]],\"t\":[1.0]}],"
    "[{\"alpha\":[1.0],\"T\":[[-1.0]],\"t\":[1.0]}]],"
    "\"weights\":[{\"index\":[1,1],\"p\":1.0}]}";

}  // namespace

TEST_CASE("model text round-trips bit-exactly") {
  auto g = memix::test::rng(909001);
  for (int rep = 0; rep < 8; ++rep) {
    const int m = 1 + rep % 3;
    const MmeamModel model = random_model(g, m, 1 + rep % 2 + 1, 2 + rep % 3);
    const std::string text = io::model_to_string(model);
    CHECK(text.find('\n') == std::string::npos);
    const MmeamModel back = io::model_from_string(text);
    CHECK(same_model(model, back));
    // Canonical form is a fixed point of write-then-read.
    CHECK(io::model_to_string(back) == text);
  }
}

TEST_CASE("awkward numerals survive the writer") {
  RowVectorXd a(2);
  a << 1.0 / 3.0, 2.0 / 3.0;
  MatrixXd T(2, 2);
  T << -std::sqrt(2.0), 0.1, 1e-17, -std::acos(-1.0);
  VectorXd t = -T.rowwise().sum();
  const MeTriple tr(a, T, t);
  const MmeamModel model({{tr}}, WeightTensor({1}, {{{0}, 1.0}}));
  const MmeamModel back = io::model_from_string(io::model_to_string(model));
  CHECK(back.component(0, 0).alpha() == tr.alpha());
  CHECK(back.component(0, 0).T() == tr.T());
  CHECK(back.component(0, 0).t() == tr.t());
}

TEST_CASE("shared pool form expands to every coordinate") {
  const std::string shared =
      "{\"M\":2,\"pools\":[{\"alpha\":[1.0],\"T\":[[-1.0]],\"t\":[1.0]},"
      "{\"alpha\":[1.0,0.0],\"T\":[[-2.0,2.0],[0.0,-2.0]],\"t\":[0.0,2.0]}],"
      "\"weights\":[{\"index\":[1,2],\"p\":0.5},{\"index\":[2,1],\"p\":0.5}]}";
  const MmeamModel m = io::model_from_string(shared);
  REQUIRE(m.dim() == 2);
  REQUIRE(m.pool(0).size() == 2);
  REQUIRE(m.pool(1).size() == 2);
  CHECK(m.component(0, 0).T() == m.component(1, 0).T());
  // The writer emits the expanded per-coordinate form, which is stable.
  const std::string canonical = io::model_to_string(m);
  CHECK(io::model_to_string(io::model_from_string(canonical)) == canonical);
  Eigen::VectorXd x(2);
  x << 0.3, 0.7;
  const double expect = 0.5 * std::exp(-0.3) * 4.0 * 0.7 * std::exp(-1.4) +
                        0.5 * 4.0 * 0.3 * std::exp(-0.6) * std::exp(-0.7);
  CHECK(m.joint_density(x) == Approx(expect).epsilon(1e-12));
}

TEST_CASE("independence file evaluates to the product density") {
  const MmeamModel m = io::model_from_string(kIndepExp2);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  CHECK(m.joint_density(zero) == Approx(1.0).margin(1e-15));
  Eigen::VectorXd x(2);
  x << 1.0, 2.0;
  CHECK(m.joint_density(x) == Approx(std::exp(-3.0)).epsilon(1e-12));
}

TEST_CASE("malformed files are rejected with precise diagnostics") {
  using Catch::Matchers::ContainsSubstring;

  CHECK_THROWS_AS(io::model_from_string("{"), InputError);
  CHECK_THROWS_WITH(io::model_from_string("not json at all"),
                    ContainsSubstring("parse error"));

  // Unknown keys anywhere in the document.
  CHECK_THROWS_WITH(
      io::model_from_string(
          "{\"M\":1,\"pools\":[[{\"alpha\":[1.0],\"T\":[[-1.0]],\"t\":[1.0]}]],"
          "\"weights\":[{\"index\":[1],\"p\":1.0}],\"note\":\"x\"}"),
      ContainsSubstring("unknown key \"note\""));
  CHECK_THROWS_WITH(
      io::model_from_string(
          "{\"M\":1,\"pools\":[[{\"alpha\":[1.0],\"T\":[[-1.0]],\"t\":[1.0],"
          "\"extra\":0}]],\"weights\":[{\"index\":[1],\"p\":1.0}]}"),
      ContainsSubstring("unknown key \"extra\""));
  CHECK_THROWS_WITH(
      io::model_from_string(
          "{\"M\":1,\"pools\":[[{\"alpha\":[1.0],\"T\":[[-1.0]],\"t\":[1.0]}]],"
          "\"weights\":[{\"index\":[1],\"p\":1.0,\"q\":2.0}]}"),
      ContainsSubstring("unknown key \"q\" in weights[1]"));

  // Missing keys.
  CHECK_THROWS_WITH(
      io::model_from_string("{\"M\":1,\"pools\":[[{\"alpha\":[1.0],"
                            "\"T\":[[-1.0]],\"t\":[1.0]}]]}"),
      ContainsSubstring("missing key \"weights\""));
  CHECK_THROWS_WITH(
      io::model_from_string(
          "{\"M\":1,\"pools\":[[{\"alpha\":[1.0],\"T\":[[-1.0]]}]],"
          "\"weights\":[{\"index\":[1],\"p\":1.0}]}"),
      ContainsSubstring("missing key \"t\""));

  // Structural mismatches.
  CHECK_THROWS_WITH(
      io::model_from_string(
          "{\"M\":2,\"pools\":[[{\"alpha\":[1.0],\"T\":[[-1.0]],"
          "\"t\":[1.0]}]],\"weights\":[{\"index\":[1,1],\"p\":1.0}]}"),
      ContainsSubstring("one list per coordinate"));
  CHECK_THROWS_WITH(
      io::model_from_string(
          "{\"M\":1,\"pools\":[[{\"alpha\":[1.0],\"T\":[[-1.0]],\"t\":[1.0]}]],"
          "\"weights\":[{\"index\":[0],\"p\":1.0}]}"),
      ContainsSubstring("out of range"));
  CHECK_THROWS_WITH(
      io::model_from_string(
          "{\"M\":1,\"pools\":[[{\"alpha\":[1.0],\"T\":[[-1.0]],\"t\":[1.0]}]],"
          "\"weights\":[{\"index\":[2],\"p\":1.0}]}"),
      ContainsSubstring("out of range"));
  CHECK_THROWS_WITH(
      io::model_from_string(
          "{\"M\":2,\"pools\":[{\"alpha\":[1.0],\"T\":[[-1.0]],\"t\":[1.0]}],"
          "\"weights\":[{\"index\":[1],\"p\":1.0}]}"),
      ContainsSubstring("one component per coordinate"));
  CHECK_THROWS_WITH(
      io::model_from_string(
          "{\"M\":1,\"pools\":[[{\"alpha\":[\"x\"],\"T\":[[-1.0]],"
          "\"t\":[1.0]}]],\"weights\":[{\"index\":[1],\"p\":1.0}]}"),
      ContainsSubstring("expected a number"));
  CHECK_THROWS_WITH(
      io::model_from_string(
          "{\"M\":1,\"pools\":[[{\"alpha\":[1.0,0.0],\"T\":[[-1.0,0.5],"
          "[0.0]],\"t\":[1.0,0.5]}]],\"weights\":[{\"index\":[1],"
          "\"p\":1.0}]}"),
      ContainsSubstring("ragged matrix rows"));
  CHECK_THROWS_WITH(
      io::model_from_string(
          "{\"M\":1,\"pools\":[[{\"alpha\":[1.0],\"T\":[[-1.0]],\"t\":[1.0]}]],"
          "\"weights\":[{\"index\":[1],\"p\":0.5}]}"),
      ContainsSubstring("sum"));
  CHECK_THROWS_WITH(io::model_from_string("{\"M\":0,\"pools\":[],"
                                          "\"weights\":[]}"),
                    ContainsSubstring("positive integer"));
}

TEST_CASE("files round-trip through disk") {
  namespace fs = std::filesystem;
  auto g = memix::test::rng(909002);
  const MmeamModel model = random_model(g, 2, 2, 3);
  const fs::path path = fs::temp_directory_path() / "memix_model_io_test.json";
  io::write_model_file(path.string(), model);
  const MmeamModel back = io::read_model_file(path.string());
  CHECK(same_model(model, back));
  fs::remove(path);

  const fs::path tp = fs::temp_directory_path() / "memix_triple_io_test.json";
  {
    std::ofstream out(tp);
    out << io::triple_to_string(exp_law(2.0)) << "\n";
  }
  const MeTriple tr = io::read_triple_file(tp.string());
  CHECK(tr.T()(0, 0) == -2.0);
  CHECK(tr.pdf(0.0) == Approx(2.0));
  fs::remove(tp);

  CHECK_THROWS_AS(io::read_model_file("/nonexistent/memix.json"), InputError);
}
