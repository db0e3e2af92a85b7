#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hamrec/bitio.hpp"
#include "hamrec/bitstring.hpp"
#include "hamrec/error.hpp"

using namespace hamrec;

TEST_CASE("parse and print round trip") {
  for (const char* s : {"", "0", "1", "10110", "0000000000000000000000000000000000000000000000000000000000000000011"}) {
    CHECK(BitString::parse(s).to_string() == s);
  }
  CHECK(BitString::parse("10110").size() == 5);
}

TEST_CASE("parse rejects other characters") {
  try {
    BitString::parse("10a1");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
}

TEST_CASE("indexing is zero based and checked") {
  const BitString x = BitString::parse("0100");
  CHECK(x[1]);
  CHECK_FALSE(x[0]);
  CHECK(x.at(1));
  CHECK_THROWS_AS(x.at(4), Error);
}

TEST_CASE("codes map bit i to position i") {
  const BitString x = BitString::from_code(0b1101, 4);
  CHECK(x.to_string() == "1011");
  CHECK(x.to_code() == 0b1101);
  for (std::uint64_t c = 0; c < 64; ++c) CHECK(BitString::from_code(c, 6).to_code() == c);
}

TEST_CASE("tail bits stay clear through complement, resize and append") {
  BitString x(70, true);
  CHECK(x.count() == 70);
  x.resize(65);
  CHECK(x.count() == 65);
  x.resize(130);
  CHECK(x.count() == 65);
  const BitString c = BitString(3).complement();
  CHECK(c.to_string() == "111");
  CHECK(c.count() == 3);
  BitString a = BitString::parse("101");
  a.append(BitString::parse("0111"));
  CHECK(a.to_string() == "1010111");
  a.push_back(true);
  CHECK(a.count() == 6);
}

TEST_CASE("range counts match a direct scan") {
  std::mt19937_64 rng(3);
  const BitString x = BitString::random(777, rng);
  for (std::size_t b = 0; b < 777; b += 37) {
    for (std::size_t e = b; e <= 777; e += 53) {
      std::size_t expect = 0;
      for (std::size_t i = b; i < e; ++i) expect += x[i];
      REQUIRE(x.count(b, e) == expect);
    }
  }
}

TEST_CASE("slice and prefix") {
  const BitString x = BitString::parse("1100110011");
  CHECK(x.prefix(4).to_string() == "1100");
  CHECK(x.slice(2, 7).to_string() == "00110");
  CHECK(x.slice(5, 5).empty());
}

TEST_CASE("xor of unequal lengths is a dimension error") {
  BitString a(3), b(4);
  try {
    a ^= b;
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::dimension);
  }
}

TEST_CASE("ordering follows the text") {
  CHECK(BitString::parse("0011") < BitString::parse("0100"));
  CHECK(BitString::parse("1") > BitString::parse("0111"));
  CHECK(BitString::parse("01") < BitString::parse("010"));
}

TEST_CASE("random strings are reproducible") {
  std::mt19937_64 a(42), b(42);
  CHECK(BitString::random(1000, a) == BitString::random(1000, b));
}

TEST_CASE("text format round trip") {
  std::vector<BitString> v{BitString::parse("101"), BitString::parse(""), BitString::parse("1111000011110000111")};
  std::stringstream s;
  bitio::write_text(s, v);
  const auto back = bitio::read_text(s);
  // the empty string prints as a blank line, which is skipped
  REQUIRE(back.size() == 2);
  CHECK(back[0] == v[0]);
  CHECK(back[1] == v[2]);
}

TEST_CASE("packed format round trip, bit exact") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {0, 1, 7, 8, 9, 63, 64, 65, 1000}) {
    const BitString x = BitString::random(n, rng);
    std::stringstream s;
    bitio::write_packed(s, x);
    CHECK(s.str().size() == 8 + (n + 7) / 8);
    CHECK(bitio::read_packed(s) == x);
  }
}

TEST_CASE("packed layout: little-endian header, bit i in byte i/8") {
  std::stringstream s;
  bitio::write_packed(s, BitString::parse("1000000001"));
  const std::string bytes = s.str();
  REQUIRE(bytes.size() == 10);
  CHECK(static_cast<unsigned char>(bytes[0]) == 10);
  for (int i = 1; i < 8; ++i) CHECK(bytes[i] == 0);
  CHECK(static_cast<unsigned char>(bytes[8]) == 0x01);
  CHECK(static_cast<unsigned char>(bytes[9]) == 0x02);
}

TEST_CASE("packed reader rejects dirty padding and truncation") {
  std::string bad("\x03\0\0\0\0\0\0\0\xff", 9);
  std::stringstream s(bad);
  CHECK_THROWS_AS(bitio::read_packed(s), Error);
  std::string short_body("\x10\0\0\0\0\0\0\0\x01", 9);
  std::stringstream t(short_body);
  CHECK_THROWS_AS(bitio::read_packed(t), Error);
}

TEST_CASE("file save and load pick the format from the extension") {
  const auto dir = std::filesystem::temp_directory_path() / "hamrec_bitio_test";
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(9);
  const BitString x = BitString::random(300, rng);
  for (const char* name : {"x.bin", "x.txt"}) {
    bitio::save(dir / name, x);
    CHECK(bitio::load(dir / name) == x);
  }
  CHECK(bitio::guess_format(dir / "x.bin") == bitio::Format::packed);
  CHECK(bitio::guess_format(dir / "x.txt") == bitio::Format::text);
  std::filesystem::remove_all(dir);
}
