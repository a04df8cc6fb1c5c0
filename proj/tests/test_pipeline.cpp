#include <catch2/catch_amalgamated.hpp>

#include <emlz/oracle.hpp>
#include <emlz/pipeline.hpp>

#include "test_util.hpp"

using namespace emlz;
using testutil::bytes;
using testutil::span;

namespace {

bytes b(const char *s) { return bytes(s, s + std::string(s).size()); }

struct run_result {
  parsing p;
  parse_stats stats;
};

run_result run_parse(const testutil::temp_dir &dir, const bytes &text,
                     std::uint64_t block_size, int mode = 40,
                     std::uint64_t skip_threshold = 40) {
  static int counter = 0;
  const std::string base = dir.file("in" + std::to_string(counter++));
  testutil::write_file(base, text);
  config cfg;
  cfg.block_size = block_size;
  cfg.mode = mode;
  cfg.skip_threshold = skip_threshold;
  run_result out;
  out.stats = parse_file(base, base, cfg);
  out.p = read_parse(base + ".lz");
  return out;
}

void check_against_oracle(const bytes &text, const parsing &got) {
  const parsing expect = lz77_brute(span(text));
  REQUIRE(testutil::phrase_shape(got) == testutil::phrase_shape(expect));
  // Sources are not compared pairwise; each copy must reproduce its phrase.
  std::uint64_t pos = 1;
  for (const phrase &f : got) {
    if (f.is_literal()) {
      REQUIRE(f.src == text[pos - 1]);
    } else {
      REQUIRE(f.src >= 1);
      REQUIRE(f.src < pos);
      for (std::uint64_t t = 0; t < f.len; ++t)
        REQUIRE(text[f.src - 1 + t] == text[pos - 1 + t]);
    }
    pos += f.cover();
  }
  REQUIRE(pos == text.size() + 1);
}

} // namespace

TEST_CASE("pipeline equals the oracle across block sizes") {
  testutil::temp_dir dir("pipe");
  std::mt19937_64 rng(1234);
  const std::uint64_t blocks[] = {16, 64, 256, 1024};
  for (int iter = 0; iter < 120; ++iter) {
    const std::size_t n = testutil::log_uniform(rng, 1, 5000);
    bytes text;
    switch (iter % 4) {
    case 0:
      text = testutil::random_text(rng, n, 256);
      break;
    case 1:
      text = testutil::all_equal(n);
      break;
    case 2:
      text = testutil::de_bruijn(n, 2 + 2 * (iter % 2), 8);
      break;
    default:
      text = testutil::mutated_repeat(rng, n,
                                      std::max<std::size_t>(1, n / 7), 4,
                                      0.01);
      break;
    }

    const parsing expect = lz77_brute(span(text));
    for (const std::uint64_t bs : blocks) {
      const run_result run = run_parse(dir, text, bs);
      INFO("n=" << n << " b=" << bs);
      REQUIRE(testutil::phrase_shape(run.p) == testutil::phrase_shape(expect));
      check_against_oracle(text, run.p);
      // Restart amortization.
      REQUIRE(run.stats.positions_parsed <= 2 * n);
    }
    // Single block (b = n).
    const run_result single =
        run_parse(dir, text, std::max<std::size_t>(16, n));
    REQUIRE(testutil::phrase_shape(single.p) ==
            testutil::phrase_shape(expect));
  }
}

TEST_CASE("empty input produces an empty parse file") {
  testutil::temp_dir dir("empty");
  const run_result run = run_parse(dir, bytes{}, 64);
  REQUIRE(run.p.empty());
  REQUIRE(run.stats.z == 0);
  REQUIRE(run.stats.n == 0);
}

TEST_CASE("invariance: block size, skip trick, and integer mode") {
  testutil::temp_dir dir("invariance");
  std::mt19937_64 rng(777);
  for (int iter = 0; iter < 25; ++iter) {
    const std::size_t n = testutil::log_uniform(rng, 500, 60000);
    const bytes text =
        (iter % 2) ? testutil::mutated_repeat(rng, n, n / 9, 4, 0.003)
                   : testutil::structured_text(rng, n);

    const run_result base = run_parse(dir, text, 256, 40, 40);
    const auto shape = testutil::phrase_shape(base.p);

    // (a) block size invariance
    for (const std::uint64_t bs : {std::uint64_t(64), std::uint64_t(1024)}) {
      const run_result r = run_parse(dir, text, bs, 40, 40);
      REQUIRE(testutil::phrase_shape(r.p) == shape);
    }
    // (b) skip trick on/off
    {
      const run_result r = run_parse(dir, text, 256, 40, 0);
      REQUIRE(testutil::phrase_shape(r.p) == shape);
    }
    // (c) 32-bit vs 40-bit mode
    {
      const run_result r = run_parse(dir, text, 256, 32, 40);
      REQUIRE(testutil::phrase_shape(r.p) == shape);
    }
    check_against_oracle(text, base.p);
  }
}

TEST_CASE("deterministic output: identical bytes across runs") {
  testutil::temp_dir dir("determinism");
  std::mt19937_64 rng(4242);
  const bytes text = testutil::mutated_repeat(rng, 40000, 5000, 4, 0.01);
  const std::string in1 = dir.file("d1"), in2 = dir.file("d2");
  testutil::write_file(in1, text);
  testutil::write_file(in2, text);
  config cfg;
  cfg.block_size = 512;
  parse_file(in1, in1, cfg);
  parse_file(in2, in2, cfg);
  REQUIRE(testutil::read_file(in1 + ".lz") == testutil::read_file(in2 + ".lz"));
}

TEST_CASE("long tails go through the handoff path and stay exact") {
  testutil::temp_dir dir("handoff");
  std::mt19937_64 rng(5);
  int handoffs_seen = 0;
  for (int iter = 0; iter < 40; ++iter) {
    // w repeated: long factors guaranteed, far beyond b/2.
    const std::size_t wlen = testutil::log_uniform(rng, 40, 400);
    const bytes w = testutil::random_text(rng, wlen, 4);
    bytes text;
    while (text.size() < wlen * (3 + rng() % 4))
      text.insert(text.end(), w.begin(), w.end());
    const bytes noise =
        testutil::random_text(rng, testutil::log_uniform(rng, 1, 200), 4);
    text.insert(text.end(), noise.begin(), noise.end());
    if (text.size() > 20000)
      continue;

    const run_result run = run_parse(dir, text, 64);
    handoffs_seen += int(run.stats.handoffs);
    check_against_oracle(text, run.p);
    REQUIRE(run.stats.long_rounds_within_bound);
  }
  REQUIRE(handoffs_seen > 10);
}

TEST_CASE("decode_file inverts parse_file") {
  testutil::temp_dir dir("decode");
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 30; ++iter) {
    const bytes text = testutil::structured_text(
        rng, testutil::log_uniform(rng, 1, 100000));
    const std::string base = dir.file("f" + std::to_string(iter));
    testutil::write_file(base, text);
    config cfg;
    cfg.block_size = std::max<std::uint64_t>(16, text.size() / 5);
    parse_file(base, base, cfg);
    decode_file(base + ".lz", base + ".out");
    REQUIRE(testutil::read_file(base + ".out") == text);
  }
}

TEST_CASE("verify_parse accepts good parses and flags bad ones") {
  testutil::temp_dir dir("verify");
  std::mt19937_64 rng(62);
  const bytes text = testutil::mutated_repeat(rng, 30000, 4000, 4, 0.01);
  const std::string base = dir.file("v");
  testutil::write_file(base, text);
  config cfg;
  cfg.block_size = 512;
  parse_file(base, base, cfg);

  SECTION("valid pair passes") {
    const verify_report rep = verify_parse(base, base + ".lz");
    REQUIRE(rep.ok());
  }

  SECTION("corrupted length fails with a phrase index") {
    parsing p = read_parse(base + ".lz");
    // Find a copy phrase and shrink it (still structurally valid, no longer
    // tiling-correct unless we pad; easier: grow a copy into its successor).
    std::size_t victim = p.size();
    for (std::size_t k = 0; k + 1 < p.size(); ++k)
      if (!p[k].is_literal() && p[k + 1].cover() > 1 && !p[k + 1].is_literal()) {
        victim = k;
        break;
      }
    REQUIRE(victim < p.size());
    p[victim].len += 1;
    p[victim + 1].len -= 1;
    write_parse(base + ".bad.lz", p, text.size(), 5);
    const verify_report rep = verify_parse(base, base + ".bad.lz");
    REQUIRE(!rep.ok());
    REQUIRE(rep.failing_phrase >= 0);
  }

  SECTION("a decodable but non-greedy parse fails maximality") {
    // Split one long copy into two shorter copies from the same source:
    // still decodes to the text, but the first part is no longer maximal.
    parsing p = read_parse(base + ".lz");
    std::size_t victim = p.size();
    for (std::size_t k = 0; k < p.size(); ++k)
      if (!p[k].is_literal() && p[k].len >= 6) {
        victim = k;
        break;
      }
    REQUIRE(victim < p.size());
    const phrase orig = p[victim];
    const std::uint64_t half = orig.len / 2;
    parsing q;
    q.insert(q.end(), p.begin(), p.begin() + victim);
    q.push_back(phrase::copy(orig.src, half));
    q.push_back(phrase::copy(orig.src + half, orig.len - half));
    q.insert(q.end(), p.begin() + victim + 1, p.end());
    write_parse(base + ".ng.lz", q, text.size(), 5);

    // Sanity: still decodes correctly.
    decode_file(base + ".ng.lz", base + ".ng.out");
    REQUIRE(testutil::read_file(base + ".ng.out") == text);

    // Exhaustive sample so the split phrase is certainly re-checked.
    const verify_report rep = verify_parse(base, base + ".ng.lz", q.size());
    REQUIRE(!rep.maximality);
  }
}

TEST_CASE("peak block memory stays under the mode budget") {
  testutil::temp_dir dir("membudget");
  std::mt19937_64 rng(91);
  const std::size_t n = 1 << 18;
  const bytes text = testutil::mutated_repeat(rng, n, n / 6, 4, 0.005);
  const std::uint64_t bs = 1 << 16;

  const run_result r40 = run_parse(dir, text, bs, 40);
  REQUIRE(r40.stats.peak_block_bytes <= 29 * bs + (1 << 20));

  const run_result r32 = run_parse(dir, text, bs, 32);
  REQUIRE(r32.stats.peak_block_bytes <= 28 * bs + (1 << 20));
}

TEST_CASE("text-scan volume follows the (d+1)/2 law") {
  testutil::temp_dir dir("iovolume");
  std::mt19937_64 rng(10101);
  const std::size_t n = 1 << 22; // 4 MiB keeps this test quick
  const bytes text = testutil::random_text(rng, n, 256);
  const std::string base = dir.file("vol");
  testutil::write_file(base, text);

  for (const std::uint64_t d : {4ull, 8ull}) {
    config cfg;
    // Block size with a small margin over n/d: boundary restarts shift the
    // grid left by a few symbols per block, and exactly d blocks must fit.
    cfg.block_size = n / d + 4096;
    access_recorder rec;
    cfg.recorder = &rec;
    const parse_stats st = parse_file(base, base, cfg);
    REQUIRE(st.blocks == d);
    const double measured = st.text_scan_bytes_per_symbol();
    const double analytic = double(d + 1) / 2.0;
    INFO("d=" << d << " measured=" << measured);
    REQUIRE(measured >= analytic * 0.85);
    REQUIRE(measured <= analytic * 1.15);

    // Forward-sequential access per scan.
    std::uint64_t prev_end = 0;
    bool in_scan = false;
    for (const access_event &ev : rec) {
      if (ev.k == access_event::kind::scan_begin) {
        prev_end = ev.offset;
        in_scan = true;
      } else if (ev.k == access_event::kind::read_main) {
        REQUIRE(in_scan);
        REQUIRE(ev.offset >= prev_end);
        prev_end = ev.offset + ev.len;
      }
    }
  }
}

TEST_CASE("config validation") {
  testutil::temp_dir dir("config");
  testutil::write_file(dir.file("x"), b("hello"));

  SECTION("tiny memory budget is rejected") {
    config cfg;
    cfg.mem_budget = 100; // derives b < 16
    REQUIRE_THROWS_AS(parse_file(dir.file("x"), dir.file("x"), cfg),
                      config_error);
  }

  SECTION("failed runs leave no partial output") {
    config cfg;
    cfg.mem_budget = 100;
    try {
      parse_file(dir.file("x"), dir.file("x"), cfg);
    } catch (const config_error &) {
    }
    REQUIRE(!file_exists(dir.file("x") + ".lz"));
  }
}
