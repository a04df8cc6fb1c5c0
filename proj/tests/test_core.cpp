#include <catch2/catch_amalgamated.hpp>

#include <emlz/core.hpp>
#include <emlz/oracle.hpp>

#include "test_util.hpp"

using namespace emlz;
using testutil::bytes;
using testutil::span;

namespace {

bytes b(const char *s) { return bytes(s, s + std::string(s).size()); }

} // namespace

TEST_CASE("lz77_brute on pinned inputs") {
  SECTION("empty string") {
    REQUIRE(lz77_brute(span(b(""))).empty());
  }

  SECTION("overlapping self-copy is forced") {
    const parsing p = lz77_brute(span(b("aaaaaa")));
    REQUIRE(p == parsing{phrase::literal('a'), phrase::copy(1, 5)});
  }

  SECTION("abaab") {
    const parsing p = lz77_brute(span(b("abaab")));
    REQUIRE(p.size() == 4);
    REQUIRE(p[0] == phrase::literal('a'));
    REQUIRE(p[1] == phrase::literal('b'));
    REQUIRE(p[2] == phrase::copy(1, 1));
    REQUIRE(p[3] == phrase::copy(1, 2));
  }
}

TEST_CASE("lpf_brute on pinned inputs") {
  SECTION("abaab") {
    const auto lpf = lpf_brute(span(b("abaab")));
    const std::vector<lpf_entry> expect = {
        {0, 0}, {0, 0}, {1, 1}, {1, 2}, {2, 1}};
    REQUIRE(lpf == expect);
  }

  SECTION("aaa: lengths are unique, sources may tie") {
    const auto lpf = lpf_brute(span(b("aaa")));
    REQUIRE(lpf.size() == 3);
    REQUIRE(lpf[0].len == 0);
    REQUIRE(lpf[1] == lpf_entry{1, 2});
    REQUIRE(lpf[2].len == 1);
    REQUIRE((lpf[2].src == 1 || lpf[2].src == 2));
  }

  SECTION("single symbol") {
    const auto lpf = lpf_brute(span(b("x")));
    REQUIRE(lpf == std::vector<lpf_entry>{{0, 0}});
  }
}

TEST_CASE("ms_brute on pinned inputs") {
  SECTION("y=abab z=ba") {
    const auto ms = ms_brute(span(b("abab")), span(b("ba")));
    const std::vector<ms_entry> expect = {
        {1, 2, 1}, {2, 1, 2}, {3, 2, 1}, {4, 1, 1}};
    REQUIRE(ms == expect);
  }

  SECTION("symbol absent from z") {
    const auto ms = ms_brute(span(b("x")), span(b("ab")));
    REQUIRE(ms.size() == 1);
    REQUIRE(ms[0].len == 0);
  }

  SECTION("identity") {
    const auto ms = ms_brute(span(b("a")), span(b("a")));
    REQUIRE(ms == std::vector<ms_entry>{{1, 1, 1}});
  }
}

TEST_CASE("decode on pinned inputs") {
  SECTION("overlap decoding") {
    REQUIRE(decode({phrase::literal('a'), phrase::copy(1, 5)}) == b("aaaaaa"));
  }

  SECTION("empty") { REQUIRE(decode({}).empty()); }

  SECTION("inverse of the abaab parse") {
    REQUIRE(decode({phrase::literal('a'), phrase::literal('b'),
                    phrase::copy(1, 1), phrase::copy(1, 2)}) == b("abaab"));
  }

  SECTION("malformed parsings are rejected with the phrase index") {
    try {
      decode({phrase::literal('a'), phrase::copy(2, 3)});
      FAIL("expected decode_error");
    } catch (const decode_error &e) {
      REQUIRE(e.phrase_index() == 1);
    }
    try {
      decode({phrase::copy(1, 1)});
      FAIL("expected decode_error");
    } catch (const decode_error &e) {
      REQUIRE(e.phrase_index() == 0);
    }
  }
}

TEST_CASE("round-trip and greedy maximality over random texts") {
  std::mt19937_64 rng(42);
  for (int iter = 0; iter < 400; ++iter) {
    const std::size_t n = testutil::log_uniform(rng, 1, 600);
    const bytes text = testutil::structured_text(rng, n);
    const parsing p = lz77_brute(span(text));

    REQUIRE(decode(p) == text);
    REQUIRE(parse_cover(p) == n);
    validate_parsing(p, n);

    // Greedy maximality: no source matches one symbol longer.
    std::uint64_t pos = 1;
    for (const phrase &f : p) {
      const std::uint64_t len = f.cover();
      if (pos + len <= n) {
        for (std::uint64_t q = 1; q < pos; ++q) {
          std::uint64_t match = 0;
          while (pos + match <= n && text[q - 1 + match] == text[pos - 1 + match])
            ++match;
          REQUIRE(match <= len);
        }
      }
      pos += len;
    }
  }
}

TEST_CASE("LPF agrees with the parse and with MS") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t n = testutil::log_uniform(rng, 1, 300);
    const bytes text = testutil::structured_text(rng, n);
    const auto lpf = lpf_brute(span(text));
    const parsing p = lz77_brute(span(text));

    // Phrase at position i covers max(1, LPF[i]) symbols.
    std::uint64_t pos = 1;
    for (const phrase &f : p) {
      const lpf_entry &e = lpf[pos - 1];
      REQUIRE(f.cover() == std::max<std::uint64_t>(1, e.len));
      pos += f.cover();
    }

    // LPF invariants.
    std::array<bool, 256> seen{};
    for (std::size_t i = 1; i <= n; ++i) {
      const lpf_entry &e = lpf[i - 1];
      if (e.len == 0) {
        REQUIRE(e.src == 0);
        REQUIRE(!seen[text[i - 1]]);
      } else {
        REQUIRE(e.src < i);
        for (std::uint64_t t = 0; t < e.len; ++t)
          REQUIRE(text[e.src - 1 + t] == text[i - 1 + t]);
      }
      seen[text[i - 1]] = true;
    }

    // MS over (text, text) dominates LPF pointwise (sources may sit to the
    // right, so equality is not asserted).
    const auto ms = ms_brute(span(text), span(text));
    for (std::size_t i = 0; i < n; ++i)
      REQUIRE(ms[i].len >= lpf[i].len);
  }
}
