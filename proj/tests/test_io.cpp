#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "simplexstab/io.hpp"

using namespace simplexstab;

TEST_CASE("polytope json round trip") {
  const Polytope s = regular_simplex(3);
  const io::Json j = io::polytope_to_json(s);
  CHECK(j["n"] == 3);
  CHECK(j["vertices"].size() == 4);
  CHECK(j["halfspaces"][0].contains("a"));
  const Polytope back = io::polytope_from_json(io::Json::parse(io::dump(j)));
  CHECK((back.vertices() - s.vertices()).norm() == 0);
  CHECK((back.halfspaces().offsets - s.halfspaces().offsets).norm() == 0);

  io::Json only_h = j;
  only_h.erase("vertices");
  const Polytope h = io::polytope_from_json(only_h);
  CHECK_FALSE(h.has_vertices());
  CHECK(polytope_volume(h) == doctest::Approx(simplex_volume(3)).epsilon(1e-12));
}

TEST_CASE("measure and ellipsoid round trip") {
  const DiscreteMeasure mu = simplex_measure(2);
  const DiscreteMeasure back = io::measure_from_json(io::measure_to_json(mu));
  CHECK((back.points() - mu.points()).norm() == 0);
  CHECK((back.weights() - mu.weights()).norm() == 0);

  Ellipsoid e{Vector::Ones(2), Matrix::Identity(2, 2)};
  e.shape(0, 1) = e.shape(1, 0) = 0.25;
  const Ellipsoid eb = io::ellipsoid_from_json(io::ellipsoid_to_json(e));
  CHECK((eb.shape - e.shape).norm() == 0);
  CHECK((eb.center - e.center).norm() == 0);
}

TEST_CASE("malformed input is an io error") {
  auto code_of = [](const io::Json& j) {
    try {
      io::measure_from_json(j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kDomain;
  };
  CHECK(code_of(io::Json::parse(R"({"points": [[1, 0]], "weights": [1]})")) == ErrorCode::kIo);
  CHECK(code_of(io::Json::parse(R"({"n": 2, "points": [[1, 0, 0]], "weights": [1]})")) == ErrorCode::kIo);
  CHECK(code_of(io::Json::parse(R"({"n": 2, "points": [[1, 0]], "weights": [1, 2]})")) == ErrorCode::kIo);
  CHECK_THROWS_AS(io::read_json("/nonexistent/file.json"), Error);
}

TEST_CASE("atomic write replaces the file and leaves no temporary") {
  const auto dir = std::filesystem::temp_directory_path() / "simplexstab_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.json").string();
  io::write_atomic(path, "first\n");
  io::write_atomic(path, "second\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "second\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  CHECK_THROWS_AS(io::write_atomic((dir / "missing" / "x.json").string(), "x"), Error);
  std::filesystem::remove_all(dir);
}
