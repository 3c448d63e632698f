#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "steer/canonical_json.hpp"

using nlohmann::json;
using steer::canonical_dump;

TEST(CanonicalJson, SortsKeysAndDropsWhitespace) {
  const json doc = json::parse(R"({ "b": 1, "a": {"z": [1, 2], "y": null} })");
  EXPECT_EQ(canonical_dump(doc), R"({"a":{"y":null,"z":[1,2]},"b":1})");
}

TEST(CanonicalJson, PrintsSeventeenSignificantDigits) {
  EXPECT_EQ(canonical_dump(json(0.1)), "0.10000000000000001");
  EXPECT_EQ(canonical_dump(json(1.0)), "1");
  EXPECT_EQ(canonical_dump(json(-2.5)), "-2.5");
  EXPECT_EQ(canonical_dump(json(1e300)), "1.0000000000000001e+300");
}

TEST(CanonicalJson, NegativeZeroPrintsAsZero) { EXPECT_EQ(canonical_dump(json(-0.0)), "0"); }

TEST(CanonicalJson, NonFiniteUsesSentinels) {
  const json doc = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::quiet_NaN()};
  EXPECT_EQ(canonical_dump(doc), R"(["+inf","-inf","nan"])");
}

TEST(CanonicalJson, ReadRealInvertsSentinels) {
  EXPECT_EQ(steer::read_real(json("+inf")), std::numeric_limits<double>::infinity());
  EXPECT_EQ(steer::read_real(json("-inf")), -std::numeric_limits<double>::infinity());
  EXPECT_TRUE(std::isnan(steer::read_real(json("nan"))));
  EXPECT_EQ(steer::read_real(json(3)), 3.0);
  EXPECT_THROW(steer::read_real(json("seven")), std::exception);
}

TEST(CanonicalJson, RoundTripIsExact) {
  const double values[] = {0.1, 1.0 / 3.0, 2.0 / 7.0, 123456.789e-12, 0.74675324675324672};
  for (double v : values) {
    const json back = json::parse(canonical_dump(json(v)));
    EXPECT_EQ(back.get<double>(), v);
  }
}

TEST(CanonicalJson, SerializingTwiceIsStable) {
  const json doc = json::parse(R"({"k":[0.30000000000000004,{"b":true,"a":"x"}],"n":-7})");
  const std::string once = canonical_dump(doc);
  EXPECT_EQ(canonical_dump(json::parse(once)), once);
}

TEST(CanonicalJson, IntegersStayIntegers) {
  EXPECT_EQ(canonical_dump(json(std::uint64_t{18446744073709551615ULL})), "18446744073709551615");
  EXPECT_EQ(canonical_dump(json(-42)), "-42");
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(steer::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(steer::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
