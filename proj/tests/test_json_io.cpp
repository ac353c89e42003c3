#include <cstring>
#include <filesystem>
#include <limits>

#include "doctest.h"
#include "qwick/json_io.hpp"
#include "qwick/random.hpp"

using namespace qwick;

namespace {

bool bit_equal(const GradedVector& a, const GradedVector& b) {
  if (!a.context().same_space(b.context())) return false;
  for (int n = 0; n <= a.max_degree(); ++n) {
    const Tensor& x = a.component(n);
    const Tensor& y = b.component(n);
    if (x.size() != y.size() || std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("graded vector round trip is bit exact") {
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng = Rng::for_trial(13, static_cast<std::uint64_t>(trial));
    const QContext ctx(rng.uniform(-0.99, 0.99), rng.integer(1, 3), rng.integer(0, 4));
    GradedVector f = random_graded(rng, ctx);
    f.component(0)[0] *= std::pow(10.0, rng.integer(-300, 300));
    const GradedVector back = graded_vector_from_json(Json::parse(to_json(f).dump()));
    CHECK(bit_equal(f, back));
    CHECK(back.context().q() == ctx.q());
  }
  const QContext ctx(0.1, 1, 2);
  GradedVector edge(ctx);
  edge.component(0)[0] = std::numeric_limits<double>::denorm_min();
  edge.component(1)[0] = -0.0;
  edge.component(2)[0] = std::numeric_limits<double>::max();
  CHECK(bit_equal(edge, graded_vector_from_json(Json::parse(to_json(edge).dump()))));
}

TEST_CASE("graded vector layout") {
  const QContext ctx(0.5, 2, 2);
  GradedVector f(ctx);
  f.component(2)[1] = 3.0;
  const Json j = to_json(f);
  CHECK(j["q"] == 0.5);
  CHECK(j["dim"] == 2);
  CHECK(j["max_degree"] == 2);
  CHECK(j["components"]["2"] == Json::array({0.0, 3.0, 0.0, 0.0}));

  const Json sparse = Json::parse(R"({"q":0.5,"dim":2,"max_degree":3,"components":{"1":[1,2]}})");
  const GradedVector g = graded_vector_from_json(sparse);
  CHECK(g.component(1) == Tensor{1.0, 2.0});
  CHECK(g.component(3) == Tensor(8, 0.0));
}

TEST_CASE("malformed graded vectors") {
  CHECK_THROWS_AS(graded_vector_from_json(Json::parse(R"({"q":0.5,"dim":2})")), ParseError);
  CHECK_THROWS_AS(graded_vector_from_json(Json::parse(R"({"q":0.5,"dim":2,"max_degree":1,"components":{"1":[1]}})")),
                  ParseError);
  CHECK_THROWS_AS(graded_vector_from_json(Json::parse(R"({"q":0.5,"dim":2,"max_degree":1,"components":{"2":[1,0,0,0]}})")),
                  ParseError);
  CHECK_THROWS_AS(graded_vector_from_json(Json::parse(R"({"q":0.5,"dim":2,"max_degree":1,"components":{"x":[1]}})")),
                  ParseError);
  CHECK_THROWS_AS(graded_vector_from_json(Json::parse(R"({"q":"a","dim":2,"max_degree":1,"components":{}})")),
                  ParseError);
  CHECK_THROWS(graded_vector_from_json(Json::parse(R"({"q":1.5,"dim":2,"max_degree":1,"components":{}})")));
}

TEST_CASE("Wick polynomial round trip") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const WickPolynomial p = random_word_polynomial(rng, 3, 3, 4);
    CHECK(wick_polynomial_from_json(Json::parse(to_json(p).dump())) == p);
  }
  CHECK(wick_polynomial_from_json(to_json(WickPolynomial())).is_zero());
  const Json j = Json::parse(R"({"terms":[{"coeff":2,"creators":[[1,0]],"annihilators":[]}]})");
  CHECK(wick_polynomial_from_json(j) == WickPolynomial::word(NormalWord{{OneParticleVector{1.0, 0.0}}, {}}, 2.0));
  CHECK_THROWS_AS(wick_polynomial_from_json(Json::parse(R"({"terms":[{"coeff":1,"creators":[[1,0],[1]]}]})")),
                  ParseError);
  CHECK_THROWS_AS(wick_polynomial_from_json(Json::parse(R"({"terms":[{"creators":[[1]]}]})")), ParseError);
}

TEST_CASE("series spec round trip") {
  const SeriesSpec spec = SeriesSpec::exponential(10, 2.5);
  const SeriesSpec back = series_spec_from_json(Json::parse(to_json(spec).dump()));
  CHECK(back.coefficients == spec.coefficients);
  CHECK(back.radius == spec.radius);
  CHECK_THROWS_AS(series_spec_from_json(Json::parse(R"({"radius":1})")), ParseError);
}

TEST_CASE("files") {
  const auto path = std::filesystem::temp_directory_path() / "qwick_json_io_test.json";
  const QContext ctx(-0.25, 2, 3);
  Rng rng(19);
  const GradedVector f = random_graded(rng, ctx);
  write_json_file(path, to_json(f));
  CHECK(bit_equal(graded_vector_from_json(read_json_file(path)), f));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_json_file(path), ParseError);
}
