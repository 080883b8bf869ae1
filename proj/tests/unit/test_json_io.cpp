#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "lightray/errors.hpp"
#include "lightray/json_io.hpp"

using namespace lightray;
using nlohmann::json;

TEST_SUITE("json_io") {

TEST_CASE("tensor round trip") {
  std::mt19937_64 rng(1);
  auto t = testing::random_tensor(3, 3, rng);
  t.at({0, 1, 2}) = 0.0;
  auto j = tensor_to_json(t);
  CHECK_FALSE(j["components"].contains("0,1,2"));
  auto back = real_tensor_from_json(j);
  CHECK(testing::max_diff(back, t) == 0.0);

  ComplexTensor c = to_complex(t);
  c[3] = {1.5, -2.0};
  auto cj = tensor_to_json(c);
  auto cback = complex_tensor_from_json(cj);
  CHECK(cback[3] == std::complex<double>(1.5, -2.0));
}

TEST_CASE("keys are canonicalised and duplicates rejected") {
  json j = {{"n", 3}, {"m", 2}, {"components", {{"1,0", 2.0}}}};
  auto t = real_tensor_from_json(j);
  CHECK(t.at({0, 1}) == 2.0);
  CHECK(index_key(t.table().index(t.table().offset(std::vector<int>{1, 0}))) == "0,1");

  json dup = {{"n", 3}, {"m", 2}, {"components", {{"1,0", 2.0}, {"0,1", 1.0}}}};
  CHECK_THROWS_AS(real_tensor_from_json(dup), SchemaError);
  json bad = {{"n", 3}, {"m", 2}, {"components", {{"0,7", 2.0}}}};
  CHECK_THROWS_AS(real_tensor_from_json(bad), SchemaError);
}

TEST_CASE("phantom documents") {
  std::mt19937_64 rng(2);
  RandomPhantomOptions opts;
  opts.m = 2;
  auto f = random_phantom(opts, rng);
  auto j = phantom_to_json(f);
  CHECK(j["version"] == kPhantomVersion);
  auto g = phantom_from_json(j);
  REQUIRE(g.terms.size() == f.terms.size());
  for (std::size_t i = 0; i < f.terms.size(); ++i) {
    CHECK(testing::max_diff(g.terms[i].coeff, f.terms[i].coeff) == 0.0);
    CHECK((g.terms[i].center - f.terms[i].center).norm() == 0.0);
    CHECK(g.terms[i].sigma == f.terms[i].sigma);
  }
  CHECK(phantom_to_json(g).dump() == j.dump());
}

TEST_CASE("phantom schema errors name the field") {
  json minimal = {{"n", 3}, {"m", 0}, {"terms", {{{"coeff", {{"", 1.0}}}, {"center", {0, 0, 0, 0}}, {"sigma", 1.0}}}}};
  CHECK(phantom_from_json(minimal).terms.size() == 1);

  auto neg = minimal;
  neg["terms"][0]["sigma"] = -1.0;
  try {
    phantom_from_json(neg);
    FAIL("accepted a negative width");
  } catch (const SchemaError& e) {
    CHECK(e.field().find("sigma") != std::string::npos);
  }

  auto extra = minimal;
  extra["colour"] = "red";
  CHECK_THROWS_WITH_AS(phantom_from_json(extra), doctest::Contains("colour"), SchemaError);

  auto wrong_center = minimal;
  wrong_center["terms"][0]["center"] = {0, 0};
  CHECK_THROWS_AS(phantom_from_json(wrong_center), SchemaError);

  auto wrong_version = minimal;
  wrong_version["version"] = 2;
  CHECK_THROWS_AS(phantom_from_json(wrong_version), SchemaError);
}

TEST_CASE("require_keys") {
  json obj = {{"a", 1}, {"b", 2}};
  CHECK_NOTHROW(require_keys(obj, {"a", "b"}, "root"));
  CHECK_THROWS_WITH_AS(require_keys(obj, {"a"}, "root"), doctest::Contains("root.b"), SchemaError);
  CHECK_THROWS_WITH_AS(require_keys(obj, {"a"}, ""), "b: unknown field", SchemaError);
}

}  // TEST_SUITE
