#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "ecm/curves.hpp"

using namespace ecm;

TEST_SUITE("curves") {

TEST_CASE("named curves validate") {
  for (const auto& id : named_curve_ids()) {
    const CurveParams c = named_curve(id);
    CHECK(c.name == id);
    CHECK(validate_curve(c).ok());
  }
  CHECK_THROWS_AS(named_curve("nope"), Error);
}

TEST_CASE("curve text round trip") {
  const CurveParams c = secp256k1();
  const CurveParams back = parse_curve_text(format_curve_text(c));
  CHECK(back.name == c.name);
  CHECK(back.p() == c.p());
  CHECK(back.a == c.a);
  CHECK(back.b == c.b);
  CHECK(back.g == c.g);
  CHECK(back.n == c.n);
}

TEST_CASE("curve text accepts comments, case and 0x prefixes") {
  const CurveParams c = parse_curve_text(
      "# textbook curve\n"
      "name = tiny\n"
      "P = 0x11\n"
      "a = 2\n"
      "b = 0X2\n"
      "gx = 5\n"
      "GY = 1\n"
      "n = 13\n");
  CHECK(c.name == "tiny");
  CHECK(c.p() == 17);
  CHECK(c.n == 19);
  CHECK(validate_curve(c).ok());
}

TEST_CASE("malformed curve text") {
  CHECK_THROWS_AS(parse_curve_text("p = 11\na = 1\n"), Error);
  CHECK_THROWS_AS(parse_curve_text("p = zz\na=1\nb=1\ngx=1\ngy=1\nn=1\n"), Error);
  CHECK_THROWS_AS(parse_curve_text("just words\n"), Error);
}

TEST_CASE("resolve_curve searches ECM_CURVE_PATH") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ecm_curve_path_test";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "mytoy.curve");
    out << format_curve_text(toy_curve_17());
  }
  ::setenv("ECM_CURVE_PATH", ("/does/not/exist:" + dir.string()).c_str(), 1);
  const CurveParams c = resolve_curve("mytoy");
  CHECK(c.p() == 17);
  CHECK(resolve_curve((dir / "mytoy.curve").string()).n == 19);
  CHECK(resolve_curve("toy10007").p() == 10007);
  CHECK_THROWS_AS(resolve_curve("absent-curve"), Error);
  ::unsetenv("ECM_CURVE_PATH");
  fs::remove_all(dir);
}

}  // TEST_SUITE
