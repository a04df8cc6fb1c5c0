#include <catch2/catch_amalgamated.hpp>

#include <emlz/block_index.hpp>
#include <emlz/oracle.hpp>
#include <emlz/suffix_array.hpp>

#include "test_util.hpp"

using namespace emlz;
using testutil::bytes;
using testutil::span;

namespace {

bytes b(const char *s) { return bytes(s, s + std::string(s).size()); }

std::vector<std::uint32_t> sa_of(const bytes &text) {
  std::vector<std::uint32_t> sa(text.size());
  mem_tracker tr;
  build_suffix_array(span(text), sa.data(), tr);
  return sa;
}

// Interval of a pattern by scanning the naive suffix order.
sa_interval naive_interval(const bytes &block, const bytes &pattern) {
  const auto sa = testutil::naive_suffix_sort(span(block));
  sa_interval iv = sa_interval::none();
  iv.len = std::uint32_t(pattern.size());
  for (std::uint32_t r = 0; r < sa.size(); ++r) {
    const std::uint32_t s = sa[r];
    if (s + pattern.size() > block.size())
      continue;
    if (std::equal(pattern.begin(), pattern.end(), block.begin() + s)) {
      if (iv.empty())
        iv.lo = r;
      iv.hi = r;
    } else if (!iv.empty()) {
      break; // occurrences are contiguous in suffix order
    }
  }
  return iv;
}

} // namespace

TEST_CASE("suffix array and LCP on pinned blocks") {
  SECTION("aaa: end of block sorts smallest") {
    mem_tracker tr;
    block_index idx(span(b("aaa")), 1, tr);
    REQUIRE(idx.sa_at(0) == 3);
    REQUIRE(idx.sa_at(1) == 2);
    REQUIRE(idx.sa_at(2) == 1);
    REQUIRE(idx.lcp_at(0) == 0);
    REQUIRE(idx.lcp_at(1) == 1);
    REQUIRE(idx.lcp_at(2) == 2);
  }

  SECTION("single symbol") {
    mem_tracker tr;
    block_index idx(span(b("b")), 1, tr);
    REQUIRE(idx.sa_at(0) == 1);
    REQUIRE(idx.lcp_at(0) == 0);
  }

  SECTION("abaab LPF equals the oracle") {
    mem_tracker tr;
    block_index idx(span(b("abaab")), 1, tr);
    const auto expect = lpf_brute(span(b("abaab")));
    for (std::uint32_t i = 1; i <= 5; ++i) {
      REQUIRE(idx.lpf_len_local(i) == expect[i - 1].len);
      if (expect[i - 1].len == 0)
        REQUIRE(idx.lpf_src_local(i) == 0);
    }
  }
}

TEST_CASE("sa/lcp/lpf oracle equality on random blocks") {
  std::mt19937_64 rng(2024);
  const unsigned alphabets[] = {1, 2, 4, 256};
  int done = 0;
  while (done < 1000) {
    const unsigned sigma = alphabets[rng() % 4];
    const std::size_t n = testutil::log_uniform(rng, 1, 2048);
    const bytes block = testutil::random_text(rng, n, sigma);

    const auto naive_sa = testutil::naive_suffix_sort(span(block));
    const auto naive_lcp = testutil::naive_lcp(span(block), naive_sa);

    mem_tracker tr;
    block_index idx(span(block), 1, tr);
    bool ok = true;
    for (std::uint32_t r = 0; r < n; ++r)
      ok = ok && idx.sa_at(r) == naive_sa[r] + 1 && idx.lcp_at(r) == naive_lcp[r];
    REQUIRE(ok);

    const auto lpf = lpf_brute(span(block));
    for (std::uint32_t i = 1; i <= n; ++i) {
      REQUIRE(idx.lpf_len_local(i) == lpf[i - 1].len);
      const std::uint32_t src = idx.lpf_src_local(i);
      if (lpf[i - 1].len == 0) {
        REQUIRE(src == 0);
      } else {
        // Any maximal source is valid; check by substring equality.
        REQUIRE(src >= 1);
        REQUIRE(src < i);
        for (std::uint32_t t = 0; t < lpf[i - 1].len; ++t)
          REQUIRE(block[src - 1 + t] == block[i - 1 + t]);
      }
    }
    ++done;
  }
}

TEST_CASE("lpf_of_block free function matches the oracle") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 200; ++iter) {
    const bytes block = testutil::structured_text(
        rng, testutil::log_uniform(rng, 1, 512));
    const auto sa = sa_of(block);
    std::vector<std::uint32_t> lcp(block.size());
    mem_tracker tr;
    build_lcp_array(span(block), sa.data(), lcp.data(), tr);

    const auto got = lpf_of_block(sa, lcp, span(block));
    const auto expect = lpf_brute(span(block));
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i)
      REQUIRE(got[i].len == expect[i].len);
  }

  SECTION("zzzz length sequence") {
    const bytes block = b("zzzz");
    const auto sa = sa_of(block);
    std::vector<std::uint32_t> lcp(block.size());
    mem_tracker tr;
    build_lcp_array(span(block), sa.data(), lcp.data(), tr);
    const auto got = lpf_of_block(sa, lcp, span(block));
    REQUIRE(got[0].len == 0);
    REQUIRE(got[1].len == 3);
    REQUIRE(got[2].len == 2);
    REQUIRE(got[3].len == 1);
  }
}

TEST_CASE("interval_by_binary_search on pinned blocks") {
  mem_tracker tr;
  block_index idx(span(b("abaab")), 1, tr);

  SECTION("pattern a covers suffixes {1,3,4}") {
    const sa_interval iv = idx.interval_by_binary_search(span(b("a")));
    REQUIRE(!iv.empty());
    REQUIRE(iv.len == 1);
    REQUIRE(iv.count() == 3);
    for (std::uint32_t r = iv.lo; r <= iv.hi; ++r) {
      const std::uint32_t s = idx.sa_at(r);
      REQUIRE((s == 1 || s == 3 || s == 4));
    }
  }

  SECTION("empty pattern gives the full interval") {
    const sa_interval iv = idx.interval_by_binary_search(byte_span{});
    REQUIRE(iv.lo == 0);
    REQUIRE(iv.hi == 4);
    REQUIRE(iv.len == 0);
  }

  SECTION("absent pattern") {
    REQUIRE(idx.interval_by_binary_search(span(b("bb"))).empty());
  }
}

TEST_CASE("extend_left on pinned blocks") {
  SECTION("aab exists in abaab") {
    mem_tracker tr;
    block_index idx(span(b("abaab")), 1, tr);
    const sa_interval ab = idx.interval_by_binary_search(span(b("ab")));
    const sa_interval aab = idx.extend_left(ab, 'a');
    REQUIRE(!aab.empty());
    REQUIRE(aab.len == 3);
    REQUIRE(aab == idx.interval_by_binary_search(span(b("aab"))));
  }

  SECTION("absent symbol from the full interval") {
    mem_tracker tr;
    block_index idx(span(b("ab")), 1, tr);
    REQUIRE(idx.extend_left(idx.full_interval(), 'z').empty());
  }

  SECTION("aa from a in aaa") {
    mem_tracker tr;
    block_index idx(span(b("aaa")), 1, tr);
    const sa_interval a = idx.interval_by_binary_search(span(b("a")));
    const sa_interval aa = idx.extend_left(a, 'a');
    REQUIRE(aa.len == 2);
    REQUIRE(aa == idx.interval_by_binary_search(span(b("aa"))));
  }
}

TEST_CASE("extend_left is consistent with binary search everywhere") {
  std::mt19937_64 rng(99);
  const unsigned alphabets[] = {1, 2, 4, 256};
  for (int iter = 0; iter < 60; ++iter) {
    const unsigned sigma = alphabets[rng() % 4];
    const std::size_t n = testutil::log_uniform(rng, 1, 96);
    const bytes block = testutil::random_text(rng, n, sigma);
    mem_tracker tr;
    block_index idx(span(block), 1, tr);

    std::vector<std::uint8_t> symbols;
    {
      std::array<bool, 256> present{};
      for (std::uint8_t x : block)
        present[x] = true;
      for (unsigned c = 0; c < 256; ++c)
        if (present[c])
          symbols.push_back(std::uint8_t(c));
      symbols.push_back(std::uint8_t('z')); // usually absent
    }

    for (std::size_t start = 0; start < n; ++start) {
      for (std::size_t len = 0; start + len <= n && len <= 24; ++len) {
        const bytes w(block.begin() + start, block.begin() + start + len);
        const sa_interval iv = idx.interval_by_binary_search(span(w));
        REQUIRE(!iv.empty());
        for (const std::uint8_t c : symbols) {
          bytes cw;
          cw.push_back(c);
          cw.insert(cw.end(), w.begin(), w.end());
          const sa_interval got = idx.extend_left(iv, c);
          const sa_interval expect = naive_interval(block, cw);
          if (expect.empty()) {
            REQUIRE(got.empty());
          } else {
            REQUIRE(got.lo == expect.lo);
            REQUIRE(got.hi == expect.hi);
            REQUIRE(got.len == len + 1);
          }
        }
      }
    }
  }
}

TEST_CASE("match_prefix finds the longest matching prefix") {
  std::mt19937_64 rng(123);
  for (int iter = 0; iter < 300; ++iter) {
    const bytes block =
        testutil::random_text(rng, testutil::log_uniform(rng, 1, 128), 4);
    const bytes pattern =
        testutil::random_text(rng, testutil::log_uniform(rng, 1, 64), 4);
    mem_tracker tr;
    block_index idx(span(block), 1, tr);

    const sa_interval got = idx.match_prefix(
        [&](std::uint64_t t) {
          return t < pattern.size() ? int(pattern[t]) : -1;
        },
        pattern.size());

    std::size_t best = 0;
    for (std::size_t s = 0; s < block.size(); ++s) {
      std::size_t l = 0;
      while (s + l < block.size() && l < pattern.size() &&
             block[s + l] == pattern[l])
        ++l;
      best = std::max(best, l);
    }
    REQUIRE(got.len == best);
    if (best > 0) {
      const std::uint32_t s = idx.sa_at(got.lo);
      for (std::size_t t = 0; t < best; ++t)
        REQUIRE(block[s - 1 + t] == pattern[t]);
    }
  }
}

TEST_CASE("construction memory stays under the per-block budget") {
  std::mt19937_64 rng(77);
  for (const std::size_t b : {std::size_t(1) << 14, std::size_t(1) << 16}) {
    const bytes block = testutil::mutated_repeat(rng, b, b / 5, 4, 0.01);
    mem_tracker tr;
    REQUIRE(tr.current() == 0);
    {
      block_index idx(span(block), 1, tr);
      // The 29b budget covers the index plus the 9b inverted-MS arrays, so
      // the index alone must stay within 20 bytes per symbol.
      REQUIRE(tr.peak() <= 20 * b + (1 << 20));
      REQUIRE(idx.size() == b);
    }
    REQUIRE(tr.current() == 0);
  }
}

TEST_CASE("empty block is rejected") {
  mem_tracker tr;
  REQUIRE_THROWS_AS(block_index(byte_span{}, 1, tr), config_error);
}
