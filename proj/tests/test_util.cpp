#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>

#include "doctest.h"
#include "korn/util.hpp"

using namespace korn;

TEST_SUITE("util") {

TEST_CASE("sha1 matches known vectors") {
  CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(sha1_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "84983e441c3bd26ebaae4aa1f95129e5e54670f1");
  // Exercises the multi-block path (> 64 bytes).
  CHECK(sha1_hex(std::string(1000, 'a')) ==
        "291e9a6c66994949b57ba5e650361e98fc36b1ba");
}

TEST_CASE("format17 round-trips doubles bit-exactly") {
  const double cases[] = {0.0,
                          1.0,
                          -1.0,
                          0.1,
                          1.0 / 3.0,
                          3.141592653589793,
                          1e-300,
                          -2.5e300,
                          1.5000000000000007,
                          std::numeric_limits<double>::denorm_min(),
                          std::numeric_limits<double>::max()};
  for (double x : cases) {
    const std::string s = format17(x);
    CAPTURE(s);
    const double back = parse17(s);
    CHECK(std::memcmp(&back, &x, sizeof x) == 0);
  }
}

TEST_CASE("format17 of nan and inf round-trips") {
  CHECK(std::isnan(parse17(format17(std::numeric_limits<double>::quiet_NaN()))));
  CHECK(parse17(format17(std::numeric_limits<double>::infinity())) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("parse17 rejects garbage") {
  CHECK_THROWS_AS(parse17("not-a-number"), ConfigError);
  CHECK_THROWS_AS(parse17(""), ConfigError);
  CHECK_THROWS_AS(parse17("1.5x"), ConfigError);
}

TEST_CASE("kahan summation survives adversarial cancellation") {
  // 1 + 1e16 twists a naive accumulator; the compensated sum stays exact.
  KahanSum s;
  s.add(1.0);
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == doctest::Approx(2.0).epsilon(1e-15));

  // Sum of 1e7 copies of 0.1 to full double accuracy.
  KahanSum t;
  for (int i = 0; i < 10000000; ++i) t.add(0.1);
  CHECK(std::abs(t.value() - 1e6) < 1e-7);
}

TEST_CASE("seeded rng is deterministic and seed-sensitive") {
  SeededRng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const double xa = a.unit(), xb = b.unit(), xc = c.unit();
    all_equal = all_equal && (xa == xb);
    any_diff = any_diff || (xa != xc);
    CHECK(xa >= 0.0);
    CHECK(xa < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_diff);

  SeededRng d(7);
  for (int i = 0; i < 100; ++i) {
    const double x = d.uniform(-2.0, 5.0);
    CHECK(x >= -2.0);
    CHECK(x < 5.0);
  }
}

TEST_CASE("thread cap honours the environment variable") {
  setenv("KORN_THREADS", "3", 1);
  CHECK(thread_cap() == 3);
  setenv("KORN_THREADS", "1", 1);
  CHECK(thread_cap() == 1);
  unsetenv("KORN_THREADS");
  CHECK(thread_cap() >= 1);
}

}  // TEST_SUITE("util")
