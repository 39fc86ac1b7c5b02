#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

#include "flagtune/cache.hpp"
#include "flagtune/digest.hpp"
#include "flagtune/error.hpp"
#include "flagtune/evaluator.hpp"
#include "flagtune/external.hpp"
#include "flagtune/subprocess.hpp"
#include "flagtune/synthetic.hpp"
#include "support.hpp"

using namespace flagtune;
using flagtune::testing::TempDir;

namespace {

Benchmark bench(std::string name) {
  Benchmark b;
  b.name = std::move(name);
  return b;
}

// A "compiler" that drops -fignored/-fno-ignored, so configurations that differ only in
// that flag produce byte-identical binaries.
void write_fake_toolchain(const TempDir& dir) {
  testing::write_file(dir / "fakecc.sh", R"(out=$1; shift
for a in "$@"; do case "$a" in -fignored|-fno-ignored) ;; *) printf '%s\n' "$a";; esac; done > "$out"
)");
  testing::write_file(dir / "fakerun.sh", R"(echo run >> runs.log
n=$(grep -c -- '-fno-' "$1")
echo "starting benchmark"
echo "1.$n"
)");
}

Benchmark external_bench(const TempDir& dir, std::string run = "sh fakerun.sh {bin}") {
  Benchmark b;
  b.name = "fake";
  b.compile_command = "sh fakecc.sh {out} {flags}";
  b.run_command = std::move(run);
  b.timeout = std::chrono::duration<double>(10.0);
  b.working_dir = dir.path();
  return b;
}

std::size_t line_count(const std::filesystem::path& p) {
  if (!std::filesystem::exists(p)) return 0;
  auto text = testing::slurp(p);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("md5 digests") {
  CHECK(digest_bytes("md5", "").hex == "d41d8cd98f00b204e9800998ecf8427e");
  CHECK(digest_bytes("md5", "abc").hex == "900150983cd24fb0d6963f7d28e17f72");
  CHECK(digest_bytes("sha256", "abc").algorithm == "sha256");
  CHECK_THROWS_AS(digest_bytes("nope", "abc"), Error);
  TempDir dir;
  testing::write_file(dir / "f", "abc");
  CHECK(digest_file("md5", dir / "f") == digest_bytes("md5", "abc"));
}

TEST_CASE("evaluate_synthetic: constant model") {
  auto space = testing::make_space(3);
  BenchmarkModel m;
  m.base_time = 100;
  SyntheticModel model(space, {{"b", m}});
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::string bits;
    for (int i = 0; i < 3; ++i) bits.push_back((mask >> i) & 1 ? '1' : '0');
    auto r = evaluate_synthetic(Configuration::from_bitstring("O3", bits), "b", model);
    CHECK(r.ok());
    CHECK(*r.time == 100.0);
  }
}

TEST_CASE("evaluate_synthetic: flag deltas and pair terms") {
  auto space = testing::make_space(2);
  BenchmarkModel m;
  m.base_time = 100;
  m.flag_delta["f0"] = {10.0, 0.0};
  m.flag_delta["f1"] = {-5.0, 0.0};
  SyntheticModel model(space, {{"b", m}});
  CHECK(*evaluate_synthetic(Configuration::from_bitstring("O3", "11"), "b", model).time == 105.0);

  auto pair = testing::pair_model(space);
  CHECK(*evaluate_synthetic(Configuration::from_bitstring("O3", "00"), "cover", pair).time == 90.0);
  CHECK(*evaluate_synthetic(Configuration::from_bitstring("O3", "01"), "cover", pair).time == 105.0);
  CHECK(*evaluate_synthetic(Configuration::from_bitstring("O3", "11"), "cover", pair).time == 100.0);
  CHECK_THROWS_AS(evaluate_synthetic(Configuration::from_bitstring("O3", "11"), "other", pair), Error);
}

TEST_CASE("synthetic model agrees with the reference formula and is deterministic") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto space = testing::make_space(1 + rng() % 8);
    auto spec = testing::random_interacting(rng, space);
    spec.level_multiplier = {{"O1", 1.5}, {"O2", 1.25}};
    SyntheticModel model(space, {{"b", spec}});
    for (int k = 0; k < 20; ++k) {
      std::string bits;
      for (std::size_t i = 0; i < space.size(); ++i) bits.push_back(rng() & 1 ? '1' : '0');
      auto c = Configuration::from_bitstring(space.base_levels()[rng() % 3].name, bits);
      auto a = evaluate_synthetic(c, "b", model);
      CHECK(a == evaluate_synthetic(c, "b", model));
      CHECK(*a.time == testing::reference_time(space, spec, c));
      CHECK(*a.time >= model.lower_bound("b"));
    }
  }
}

TEST_CASE("synthetic model validation") {
  auto space = testing::make_space(2);
  BenchmarkModel m;
  m.base_time = 10;
  m.flag_delta["f0"] = {-6.0, 0.0};
  m.flag_delta["f1"] = {0.0, -4.0};
  CHECK_THROWS_AS(SyntheticModel(space, {{"b", m}}), ParseError);  // 10 - 6 - 4 = 0
  m.flag_delta["f1"] = {0.0, -3.0};
  CHECK_NOTHROW(SyntheticModel(space, {{"b", m}}));
  m.pair_delta.push_back({"f0", "f1", FlagState::enabled, FlagState::disabled, -1.0});
  CHECK_THROWS_AS(SyntheticModel(space, {{"b", m}}), ParseError);

  BenchmarkModel unknown;
  unknown.flag_delta["nope"] = {1.0, 0.0};
  CHECK_THROWS_AS(SyntheticModel(space, {{"b", unknown}}), ParseError);
  BenchmarkModel level;
  level.level_multiplier["Os"] = 1.0;
  CHECK_THROWS_AS(SyntheticModel(space, {{"b", level}}), ParseError);
  BenchmarkModel zero;
  zero.level_multiplier["O1"] = 0.0;
  CHECK_THROWS_AS(SyntheticModel(space, {{"b", zero}}), ParseError);
}

TEST_CASE("synthetic model file round-trips") {
  auto space = testing::make_space(2);
  auto model = testing::pair_model(space);
  auto again = parse_synthetic_model(serialize_synthetic_model(model), space);
  CHECK(again.specs() == model.specs());

  auto parsed = parse_synthetic_model(R"({"benchmarks": {"x": {"base_time": 50,
      "level_multiplier": {"O1": 2},
      "flag_delta": {"f0": 3, "f1": {"off": 4}},
      "pair_delta": [{"flags": ["f0", "f1"], "state": ["on", "off"], "delta": -1}]}}})",
                                      space);
  CHECK(parsed.time(Configuration::from_bitstring("O1", "10"), "x") == 100.0 + 3.0 + 4.0 - 1.0);
  CHECK_THROWS_AS(parse_synthetic_model(R"({"benchmarks": {"x": {"base_time": 5,
      "pair_delta": [{"flags": ["f0"], "state": ["on"], "delta": -1}]}}})",
                                        space),
                  ParseError);
}

TEST_CASE("caching evaluator: second evaluation is a cache hit") {
  auto space = testing::make_space(2);
  auto model = testing::pair_model(space);
  CachingEvaluator ev(space, std::make_unique<SyntheticBackend>(model));
  auto c = Configuration::from_bitstring("O3", "10");
  auto first = ev.evaluate(c, bench("cover"));
  auto second = ev.evaluate(c, bench("cover"));
  CHECK_FALSE(first.cached);
  CHECK(second.cached);
  CHECK(*second.time == *first.time);
  CHECK(second.digest == first.digest);
  CHECK(ev.stats().executions == 1);
  CHECK(ev.stats().cache_hits == 1);
  CHECK(ev.stats().evaluations == 2);
}

TEST_CASE("caching evaluator: executions equal distinct keys") {
  std::mt19937_64 rng(3);
  auto space = testing::make_space(4);
  auto spec = testing::random_interacting(rng, space);
  SyntheticModel model(space, {{"a", spec}, {"b", spec}});
  CachingEvaluator ev(space, std::make_unique<SyntheticBackend>(model));
  std::set<std::string> keys;
  for (int i = 0; i < 300; ++i) {
    std::string bits;
    for (int k = 0; k < 4; ++k) bits.push_back(rng() & 1 ? '1' : '0');
    auto c = Configuration::from_bitstring(space.base_levels()[rng() % 3].name, bits);
    auto name = rng() & 1 ? "a" : "b";
    ev.evaluate(c, bench(name));
    keys.insert(std::string(name) + "/" + c.key());
  }
  CHECK(ev.stats().executions == keys.size());
  CHECK(ev.stats().cache_hits == 300 - keys.size());
}

TEST_CASE("batch evaluation keeps submission order and deduplicates by digest") {
  auto space = testing::make_space(3);
  std::mt19937_64 rng(9);
  SyntheticModel model(space, {{"b", testing::random_interacting(rng, space)}});
  CachingEvaluator parallel(space, std::make_unique<SyntheticBackend>(model), nullptr, 4);
  CachingEvaluator serial(space, std::make_unique<SyntheticBackend>(model));
  std::vector<Configuration> configs;
  for (int i = 0; i < 24; ++i) {
    std::string bits;
    for (int k = 0; k < 3; ++k) bits.push_back(((i * 7 + k) % 5) > 1 ? '1' : '0');
    configs.push_back(Configuration::from_bitstring("O3", bits));
  }
  auto got = parallel.evaluate_batch(configs, bench("b"));
  REQUIRE(got.size() == configs.size());
  std::set<std::string> distinct;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    auto want = serial.evaluate(configs[i], bench("b"));
    CHECK(got[i] == want);
    distinct.insert(configs[i].key());
  }
  CHECK(parallel.stats().executions == distinct.size());
  CHECK(parallel.stats().compilations == configs.size());
}

TEST_CASE("eval cache persists, reloads and locks") {
  TempDir dir;
  auto path = dir / "cache.jsonl";
  auto space = testing::make_space(2);
  auto model = testing::pair_model(space);
  std::vector<CacheRecord> before;
  {
    auto cache = EvalCache::open(path);
    CHECK_THROWS_AS(EvalCache::open(path), Error);
    CachingEvaluator ev(space, std::make_unique<SyntheticBackend>(model), cache.get());
    for (auto bits : {"00", "01", "10", "11", "01"}) ev.evaluate(Configuration::from_bitstring("O2", bits), bench("cover"));
    cache->store("cover", Configuration::from_bitstring("O1", "11"), Measurement::failure(Status::compile_error));
    CHECK(cache->size() == 5);
    before = cache->records();
  }
  {
    auto cache = EvalCache::open(path);
    CHECK(cache->records() == before);
    CachingEvaluator ev(space, std::make_unique<SyntheticBackend>(model), cache.get());
    auto m = ev.evaluate(Configuration::from_bitstring("O2", "00"), bench("cover"));
    CHECK(m.cached);
    CHECK(*m.time == 90.0);
    auto f = ev.evaluate(Configuration::from_bitstring("O1", "11"), bench("cover"));
    CHECK(f.status == Status::compile_error);
    CHECK(f.cached);
    CHECK(ev.stats().executions == 0);
    CHECK(ev.stats().compilations == 1);
  }
  // A torn trailing record is dropped, earlier ones survive.
  {
    std::ofstream(path, std::ios::app) << R"({"benchmark":"cover","digest_al)";
  }
  auto cache = EvalCache::open(path);
  CHECK(cache->records() == before);
  CHECK(EvalCache::open(dir / "nested" / "deeper" / "cache.jsonl")->size() == 0);
}

TEST_CASE("subprocess capture, exit status and timeout") {
  auto r = run_shell("echo out; echo err 1>&2; exit 4", std::chrono::duration<double>(5));
  CHECK(r.exit_code == 4);
  CHECK(r.out == "out\n");
  CHECK(r.err == "err\n");
  CHECK_FALSE(r.timed_out);

  auto slow = run_shell("sleep 5", std::chrono::duration<double>(0.2));
  CHECK(slow.timed_out);
  CHECK(slow.wall_seconds < 3.0);

  CHECK(shell_quote("-O3") == "-O3");
  CHECK(shell_quote("a b") == "'a b'");
  CHECK(run_shell("printf %s " + shell_quote("it's"), std::chrono::duration<double>(5)).out == "it's");
}

TEST_CASE("external evaluation: ignored flag shares a digest and runs once") {
  TempDir dir;
  write_fake_toolchain(dir);
  FlagSpace space({{"ignored", "-fignored", "-fno-ignored"}, {"common", "-fcommon", "-fno-common"}},
                  {{"O3", "-O3"}}, "O3");
  CachingEvaluator ev(space, std::make_unique<ExternalBackend>(space, dir / "work", TimingMode::reported));
  auto b = external_bench(dir);

  auto a = ev.evaluate(Configuration::from_bitstring("O3", "11"), b);
  auto c = ev.evaluate(Configuration::from_bitstring("O3", "01"), b);
  REQUIRE(a.ok());
  CHECK(*a.time == doctest::Approx(1.0));
  CHECK(a.digest == c.digest);
  CHECK(c.cached);
  CHECK(line_count(dir / "runs.log") == 1);

  auto d = ev.evaluate(Configuration::from_bitstring("O3", "10"), b);
  CHECK_FALSE(d.cached);
  CHECK(*d.time == doctest::Approx(1.1));
  auto again = ev.evaluate(Configuration::from_bitstring("O3", "10"), b);
  CHECK(again.cached);
  CHECK(line_count(dir / "runs.log") == 2);
  CHECK(ev.stats().executions == 2);
  CHECK(std::filesystem::is_empty(dir / "work"));
}

TEST_CASE("external evaluation failures") {
  TempDir dir;
  write_fake_toolchain(dir);
  FlagSpace space({{"common", "-fcommon", "-fno-common"}}, {{"O3", "-O3"}}, "O3");
  CachingEvaluator ev(space, std::make_unique<ExternalBackend>(space, dir / "work", TimingMode::reported));
  auto cfg = Configuration::from_bitstring("O3", "1");

  SUBCASE("timeout") {
    auto b = external_bench(dir, "sleep 5");
    b.timeout = std::chrono::duration<double>(0.2);
    auto m = ev.evaluate(cfg, b);
    CHECK(m.status == Status::timeout);
    CHECK_FALSE(m.time);
    CHECK(m.digest);
    CHECK(ev.evaluate(cfg, b).cached);
  }
  SUBCASE("compile error is cached by configuration") {
    auto b = external_bench(dir);
    b.compile_command = "exit 1";
    auto m = ev.evaluate(cfg, b);
    CHECK(m.status == Status::compile_error);
    CHECK_FALSE(m.digest);
    CHECK_FALSE(m.time);
    auto again = ev.evaluate(cfg, b);
    CHECK(again.cached);
    CHECK(ev.stats().compilations == 1);
  }
  SUBCASE("nonzero exit") {
    auto m = ev.evaluate(cfg, external_bench(dir, "exit 3"));
    CHECK(m.status == Status::run_error);
  }
  SUBCASE("unparseable time") {
    auto m = ev.evaluate(cfg, external_bench(dir, "echo fast"));
    CHECK(m.status == Status::run_error);
  }
}

TEST_CASE("external evaluation aggregates repeats by minimum") {
  TempDir dir;
  write_fake_toolchain(dir);
  testing::write_file(dir / "varying.sh", R"(c=$(cat count 2>/dev/null | wc -l); echo x >> count
case $c in 0) echo 3.5;; 1) echo 1.25;; *) echo 2;; esac
)");
  FlagSpace space({{"common", "-fcommon", "-fno-common"}}, {{"O3", "-O3"}}, "O3");
  CachingEvaluator ev(space, std::make_unique<ExternalBackend>(space, dir / "work", TimingMode::reported));
  auto b = external_bench(dir, "sh varying.sh");
  b.repeat_runs = 3;
  auto m = ev.evaluate(Configuration::from_bitstring("O3", "1"), b);
  REQUIRE(m.ok());
  CHECK(*m.time == 1.25);
  CHECK(ev.stats().runs == 3);
  CHECK(ev.stats().executions == 1);
}

TEST_CASE("external timing wall-clocks the run command") {
  TempDir dir;
  write_fake_toolchain(dir);
  FlagSpace space({}, {{"O3", "-O3"}}, "O3");
  CachingEvaluator ev(space, std::make_unique<ExternalBackend>(space, dir / "work", TimingMode::external));
  auto m = ev.evaluate(Configuration("O3", {}), external_bench(dir, "sleep 0.2"));
  REQUIRE(m.ok());
  CHECK(*m.time >= 0.2);
  CHECK(*m.time < 5.0);
}

TEST_CASE("suite files") {
  auto suite = parse_suite(R"({"timing": "external", "benchmarks": [
      {"name": "a", "compile": "cc {flags} -o {out}", "run": "{bin}", "timeout": 2, "repeat_runs": 3},
      "b"]})",
                           false);
  CHECK(suite.timing == TimingMode::external);
  CHECK(suite.benchmarks[0].repeat_runs == 3);
  CHECK(suite.benchmarks[0].timeout.count() == 2.0);
  CHECK(suite.names() == std::vector<std::string>{"a", "b"});
  CHECK_THROWS_AS(parse_suite(R"({"benchmarks": ["a", "b"]})", true), ParseError);
  CHECK_THROWS_AS(parse_suite(R"({"benchmarks": ["a", "a"]})", false), ParseError);
  CHECK_THROWS_AS(parse_suite(R"({"benchmarks": [{"name": "a", "timeout": 0}]})", false), ParseError);
  CHECK_THROWS_AS(parse_suite(R"({"benchmarks": [{"name": "a", "repeat_runs": 0}]})", false), ParseError);
  CHECK_THROWS_AS(parse_suite(R"({"benchmarks": []})", false), ParseError);
  CHECK(substitute("x {flags} y {flags}", "flags", "-O3") == "x -O3 y -O3");
}
