#include <catch2/catch_amalgamated.hpp>

#include <emlz/ms_engine.hpp>
#include <emlz/oracle.hpp>
#include <emlz/parser.hpp>

#include "test_util.hpp"

using namespace emlz;
using testutil::bytes;
using testutil::span;

namespace {

bytes b(const char *s) { return bytes(s, s + std::string(s).size()); }

bytes concat(const bytes &a, const bytes &bb) {
  bytes x(a);
  x.insert(x.end(), bb.begin(), bb.end());
  return x;
}

struct inversion_run {
  std::vector<ms_entry> ms; // final MS_{B|A}, local positions
  scan_stats stats;
  std::vector<scan_event> events;
};

// Full Step 1 + Step 2 on in-memory strings, 40-bit source array.
inversion_run run_inversion(const bytes &a, const bytes &block,
                            const std::vector<skip_phrase> &skips = {}) {
  inversion_run out;
  mem_tracker tr;
  block_index idx(span(block), a.size() + 1, tr);
  inverted_ms<uint40_array> inv(std::uint32_t(block.size()), tr);

  const bytes x = concat(a, block);
  memory_prefix_source src(span(x), a.size());

  std::size_t cursor = 0;
  skip_cursor cur([&](skip_phrase &ph) {
    if (cursor == skips.size())
      return false;
    ph = skips[cursor++];
    return true;
  });

  out.stats = scan_prefix(idx, src, a.size(), x.size(),
                          skips.empty() ? nullptr : &cur,
                          [&](const scan_event &ev) {
                            out.events.push_back(ev);
                            inv.record(ev.sa_lo, ev.pos, ev.len);
                          });
  inv.finalize(idx);
  for (std::uint32_t i = 1; i <= block.size(); ++i)
    out.ms.push_back(ms_entry{i, inv.src_at(i), inv.len_at(i)});
  return out;
}

void check_against_brute(const bytes &a, const bytes &block,
                         const inversion_run &run) {
  const bytes x = concat(a, block);
  const auto expect = testutil::ms_restricted_brute(
      span(x), a.size(), a.size() + 1, x.size());
  REQUIRE(run.ms.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    INFO("block position " << i + 1);
    REQUIRE(run.ms[i].len == expect[i].len);
    if (expect[i].len > 0) {
      // Any witness with start <= |A| reproducing the match is valid.
      const std::uint64_t src = run.ms[i].src;
      REQUIRE(src >= 1);
      REQUIRE(src <= a.size());
      const std::uint64_t abs_i = a.size() + i + 1;
      for (std::uint64_t t = 0; t < expect[i].len; ++t)
        REQUIRE(x[src - 1 + t] == x[abs_i - 1 + t]);
    }
  }
}

} // namespace

TEST_CASE("scan emits the pinned entries for A=ba B=ab") {
  const inversion_run run = run_inversion(b("ba"), b("ab"));
  REQUIRE(run.events.size() == 2);
  REQUIRE(run.events[0].pos == 2);
  REQUIRE(run.events[0].len == 1);
  REQUIRE(run.events[1].pos == 1);
  REQUIRE(run.events[1].len == 1);
  // Inverted MS: B[1]='a' matches at 2, B[2]='b' matches at 1.
  REQUIRE(run.ms[0] == ms_entry{1, 2, 1});
  REQUIRE(run.ms[1] == ms_entry{2, 1, 1});
}

TEST_CASE("empty prefix emits nothing") {
  const inversion_run run = run_inversion(bytes{}, b("abcab"));
  REQUIRE(run.events.empty());
  for (const ms_entry &e : run.ms)
    REQUIRE(e.len == 0);
}

TEST_CASE("no shared symbols gives all-zero lengths") {
  const inversion_run run = run_inversion(b("xyxy"), b("ab"));
  check_against_brute(b("xyxy"), b("ab"), run);
  for (const ms_entry &e : run.ms)
    REQUIRE(e.len == 0);
}

TEST_CASE("A equals B") {
  const bytes s = b("abracadabra");
  const inversion_run run = run_inversion(s, s);
  check_against_brute(s, s, run);
}

TEST_CASE("matches may cross the prefix/block boundary") {
  // The source at position 1 of "abcab|cabcabc" runs past |A|.
  const bytes a = b("abcab");
  const bytes block = b("cabcabc");
  const inversion_run run = run_inversion(a, block);
  check_against_brute(a, block, run);
}

TEST_CASE("oracle equivalence on random prefix/block pairs") {
  std::mt19937_64 rng(31337);
  const unsigned alphabets[] = {1, 2, 4, 256};
  int done = 0;
  while (done < 1000) {
    const unsigned sigma = alphabets[rng() % 4];
    const std::size_t na = testutil::log_uniform(rng, 1, 4096);
    const std::size_t nb = testutil::log_uniform(rng, 1, 512);
    bytes a, block;
    if (rng() % 3 == 0) {
      // Correlated pair: the block continues the prefix.
      bytes x = testutil::mutated_repeat(rng, na + nb,
                                         std::max<std::size_t>(1, (na + nb) / 6),
                                         sigma, 0.02);
      a.assign(x.begin(), x.begin() + na);
      block.assign(x.begin() + na, x.end());
    } else {
      a = testutil::random_text(rng, na, sigma);
      block = testutil::random_text(rng, nb, sigma);
    }
    const inversion_run run = run_inversion(a, block);
    check_against_brute(a, block, run);

    // Monotone emission.
    for (std::size_t k = 1; k < run.events.size(); ++k)
      REQUIRE(run.events[k].pos < run.events[k - 1].pos);
    ++done;
  }
}

TEST_CASE("streaming contract: every prefix symbol is read once") {
  std::mt19937_64 rng(4);
  for (int iter = 0; iter < 50; ++iter) {
    const bytes a = testutil::structured_text(
        rng, testutil::log_uniform(rng, 1, 2000));
    const bytes block = testutil::structured_text(
        rng, testutil::log_uniform(rng, 1, 300));

    mem_tracker tr;
    block_index idx(span(block), a.size() + 1, tr);
    inverted_ms<uint40_array> inv(std::uint32_t(block.size()), tr);
    const bytes x = concat(a, block);
    memory_prefix_source src(span(x), a.size());
    scan_prefix(idx, src, a.size(), x.size(), nullptr,
                [&](const scan_event &ev) { inv.record(ev.sa_lo, ev.pos, ev.len); });
    // No skips: no re-reads and no jumped symbols.
    REQUIRE(src.next_calls() == a.size());
    REQUIRE(src.window_reads() == 0);
  }
}

TEST_CASE("skipping trick: contained positions are jumped, evidence is kept") {
  std::mt19937_64 rng(808);
  int with_skips = 0;
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t n = testutil::log_uniform(rng, 200, 3000);
    const bytes x = testutil::mutated_repeat(
        rng, n, testutil::log_uniform(rng, 8, n / 3), 4, 0.01);
    const std::size_t nb = testutil::log_uniform(rng, 16, 256);
    if (nb >= n)
      continue;
    const bytes a(x.begin(), x.end() - nb);
    const bytes block(x.end() - nb, x.end());

    // The log holds the true LZ phrases of length >= threshold inside A,
    // exactly what the pipeline would have appended.
    const std::uint64_t threshold = 40;
    std::vector<skip_phrase> skips;
    {
      std::uint64_t pos = 1;
      for (const phrase &f : lz77_brute(span(a))) {
        if (!f.is_literal() && f.len >= threshold)
          skips.push_back(skip_phrase{pos, f.len});
        pos += f.cover();
      }
    }
    std::reverse(skips.begin(), skips.end()); // decreasing start order

    const inversion_run plain = run_inversion(a, block);
    const inversion_run skipped = run_inversion(a, block, skips);
    if (!skips.empty())
      ++with_skips;

    // Skip-neutrality at the MS level.
    check_against_brute(a, block, skipped);
    REQUIRE(plain.ms.size() == skipped.ms.size());
    for (std::size_t i = 0; i < plain.ms.size(); ++i)
      REQUIRE(plain.ms[i].len == skipped.ms[i].len);

    // Emitted set: an emitted position must not satisfy the containment
    // predicate; a suppressed one must lie inside a logged phrase.
    std::reverse(skips.begin(), skips.end()); // back to increasing
    auto phrase_of = [&](std::uint64_t j) -> const skip_phrase * {
      for (const skip_phrase &ph : skips)
        if (ph.start <= j && j < ph.start + ph.len)
          return &ph;
      return nullptr;
    };
    std::vector<std::uint64_t> true_len(a.size() + 1, 0);
    for (const scan_event &ev : plain.events)
      true_len[ev.pos] = ev.len;

    std::vector<bool> emitted(a.size() + 1, false);
    for (const scan_event &ev : skipped.events) {
      emitted[ev.pos] = true;
      const skip_phrase *ph = phrase_of(ev.pos);
      const bool contained = ph && ev.len > 0 &&
                             ev.pos + ev.len <= ph->start + ph->len;
      REQUIRE(!contained);
    }
    for (std::uint64_t j = 1; j <= a.size(); ++j)
      if (!emitted[j]) {
        const skip_phrase *ph = phrase_of(j);
        REQUIRE(ph != nullptr);
        // Either properly contained, or a zero-length corner (symbol absent
        // from B) that the jump passed over.
        const bool contained =
            true_len[j] > 0 && j + true_len[j] <= ph->start + ph->len;
        REQUIRE((contained || true_len[j] == 0));
      }
  }
  REQUIRE(with_skips > 50);
}

TEST_CASE("matching_statistics agrees with ms_brute") {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 400; ++iter) {
    const unsigned sigma = (iter % 2) ? 4 : 2;
    const bytes y = testutil::random_text(
        rng, testutil::log_uniform(rng, 1, 200), sigma);
    const bytes z = testutil::random_text(
        rng, testutil::log_uniform(rng, 1, 120), sigma);
    const auto got = matching_statistics(span(y), span(z));
    const auto expect = ms_brute(span(y), span(z));
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      REQUIRE(got[i].len == expect[i].len);
      if (expect[i].len > 0) {
        const std::uint64_t src = got[i].src;
        REQUIRE(src >= 1);
        REQUIRE(src + expect[i].len - 1 <= z.size());
        for (std::uint64_t t = 0; t < expect[i].len; ++t)
          REQUIRE(z[src - 1 + t] == y[i + t]);
      }
    }
  }
}
