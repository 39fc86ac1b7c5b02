#include <doctest.h>

#include <random>
#include <set>

#include "flagtune/analysis.hpp"
#include "flagtune/error.hpp"
#include "flagtune/synthetic.hpp"
#include "support.hpp"

using namespace flagtune;

namespace {

Suite synthetic_suite(const std::vector<std::string>& names) {
  Suite s;
  for (const auto& n : names) {
    Benchmark b;
    b.name = n;
    s.benchmarks.push_back(b);
  }
  return s;
}

void add(CampaignTrace& trace, const std::string& bits, std::vector<std::pair<std::string, double>> times,
         std::string note = "") {
  auto& r = trace.append(Configuration::from_bitstring("O3", bits), std::move(note));
  for (auto& [b, t] : times) r.measurements.push_back({b, Measurement::success(t, {})});
}

std::vector<std::string> names(std::size_t n, const std::string& prefix = "p") {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace

TEST_CASE("floored series examples") {
  ReferenceTimes ref{{"a", 100.0}, {"b", 100.0}};
  CampaignTrace t{"ric", "s", {}};
  add(t, "1", {{"a", 120.0}, {"b", 80.0}});
  auto s = floored_best_so_far(t, ref);
  REQUIRE(s.points.size() == 1);
  CHECK(s.points[0].first == 1);
  CHECK(s.points[0].second == 0.9);

  CampaignTrace only{"ric", "s", {}};
  add(only, "1", {{"a", 100.0}, {"b", 100.0}}, "reference");
  add(only, "1", {{"a", 100.0}, {"b", 100.0}});
  for (auto& [c, v] : floored_best_so_far(only, reference_from_traces(std::span(&only, 1))).points) CHECK(v == 1.0);

  CampaignTrace empty{"ric", "s", {}};
  CHECK_THROWS_AS(floored_best_so_far(empty, ref), std::invalid_argument);
  ReferenceTimes partial{{"a", 100.0}};
  CHECK_THROWS_AS(floored_best_so_far(t, partial), std::invalid_argument);
}

TEST_CASE("floored series of the pair-model RIC trace") {
  auto space = testing::make_space(2);
  auto model = testing::pair_model(space);
  CachingEvaluator ev(space, std::make_unique<SyntheticBackend>(model));
  auto trace = run_ric(space, synthetic_suite({"cover"}), ev, 200, 2017);
  auto ref = reference_from_traces(std::span(&trace, 1));
  CHECK(ref.at("cover") == 100.0);
  auto series = floored_best_so_far(trace, ref);
  REQUIRE(series.points.size() == trace.size());

  std::size_t first = 0;
  for (const auto& r : trace.records)
    if (r.config.bitstring() == "00") {
      first = r.sequence;
      break;
    }
  REQUIRE(first > 0);
  for (std::size_t i = 0; i < series.points.size(); ++i) {
    CHECK(series.points[i].second > 0.0);
    CHECK(series.points[i].second <= 1.0);
    if (i > 0) CHECK(series.points[i].second <= series.points[i - 1].second);
    CHECK(series.points[i].second == (i + 1 < first ? 1.0 : 0.9));
  }
}

TEST_CASE("floored series over several per-benchmark traces") {
  ReferenceTimes ref{{"a", 10.0}, {"b", 20.0}};
  CampaignTrace ta{"ce", "a", {}}, tb{"ce", "b", {}};
  add(ta, "1", {{"a", 10.0}});
  add(ta, "0", {{"a", 5.0}});
  add(tb, "1", {{"b", 20.0}});
  add(tb, "0", {{"b", 30.0}});
  add(tb, "0", {{"b", 10.0}});
  std::vector<CampaignTrace> both{ta, tb};
  auto s = floored_best_so_far(both, ref);
  REQUIRE(s.points.size() == 3);
  CHECK(s.points[0].second == 1.0);
  CHECK(s.points[1].second == 0.75);
  CHECK(s.points[2].second == 0.5);
}

TEST_CASE("compare_to_baseline") {
  ReferenceTimes ref{{"a", 100.0}, {"b", 100.0}, {"c", 50.0}};
  CampaignTrace ric{"ric", "s", {}}, ce{"ce", "s", {}};
  add(ric, "11", {{"a", 90.0}, {"b", 130.0}});
  add(ce, "01", {{"a", 87.0}, {"b", 120.0}});
  ce.append(Configuration::from_bitstring("O3", "00"), "").measurements.push_back({"c", Measurement::failure(Status::run_error)});
  std::vector<CampaignTrace> traces{ric, ce};
  auto table = compare_to_baseline(traces, ref);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0].benchmark == "a");
  CHECK(*table.rows[0].best_ratio == 0.87);
  CHECK(table.rows[0].method == "ce");
  CHECK(table.rows[0].best_config->bitstring() == "01");
  CHECK(*table.rows[1].best_ratio == 1.2);
  CHECK_FALSE(table.rows[2].best_ratio);
  CHECK(table.mean_ratio == doctest::Approx((0.87 + 1.2) / 2));
}

TEST_CASE("compare_to_baseline picks the brute-force winner between CE and RIC") {
  auto space = testing::make_space(2);
  BenchmarkModel pair = testing::pair_model(space).specs().at("cover");
  BenchmarkModel plain;
  plain.base_time = 100;
  plain.flag_delta["f0"] = {4.0, 0.0};
  SyntheticModel model(space, {{"cover", pair}, {"plain", plain}});
  CachingEvaluator ev(space, std::make_unique<SyntheticBackend>(model));
  auto suite = synthetic_suite({"cover", "plain"});
  std::vector<CampaignTrace> traces{run_ric(space, suite, ev, 50, 3)};
  for (const auto& b : suite.benchmarks) traces.push_back(run_ce(space, b, ev).trace);
  auto table = compare_to_baseline(traces, reference_from_traces(traces));
  for (const auto& row : table.rows) {
    const auto& spec = model.specs().at(row.benchmark);
    auto opt = testing::reference_optimum(space, spec, "O3");
    CHECK(*row.best_ratio == opt.time / testing::reference_time(space, spec, stock_baseline(space)));
    CHECK(testing::reference_time(space, spec, *row.best_config) == opt.time);
  }
  CHECK(table.rows[0].method == "ric");
}

TEST_CASE("make_folds") {
  SUBCASE("81 programs into 10 folds") {
    auto progs = names(81);
    auto plan = make_folds(progs, 10, 4);
    std::multiset<std::size_t> sizes;
    std::set<std::string> seen;
    for (std::size_t f = 0; f < 10; ++f) {
      auto test = plan.test_set(f);
      sizes.insert(test.size());
      for (auto& p : test) CHECK(seen.insert(p).second);
      auto train = plan.training_set(f);
      CHECK(train.size() + test.size() == 81);
      for (auto& p : train) CHECK(std::find(test.begin(), test.end(), p) == test.end());
    }
    CHECK(seen.size() == 81);
    CHECK(sizes.count(8) == 9);
    CHECK(sizes.count(9) == 1);
    CHECK(make_folds(progs, 10, 4).assignment == plan.assignment);
  }
  SUBCASE("singletons") {
    auto plan = make_folds(names(10), 10, 1);
    for (std::size_t f = 0; f < 10; ++f) CHECK(plan.test_set(f).size() == 1);
  }
  SUBCASE("errors") {
    auto progs = names(5);
    CHECK_THROWS_AS(make_folds(progs, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_folds(progs, 6, 0), std::invalid_argument);
    std::vector<std::string> dup{"a", "a", "b"};
    CHECK_THROWS_AS(make_folds(dup, 2, 0), std::invalid_argument);
  }
  SUBCASE("uniform placement") {
    // 81 programs, k = 10: fold 0 holds 9 programs, the others 8.
    auto progs = names(81);
    const int trials = 8100;
    std::vector<int> where(10), together(1);
    for (int s = 0; s < trials; ++s) {
      auto plan = make_folds(progs, 10, s);
      where[plan.assignment.at("p0")]++;
      together[0] += plan.assignment.at("p0") == plan.assignment.at("p80");
    }
    CHECK(std::abs(where[0] - 900) < 150);
    for (int f = 1; f < 10; ++f) CHECK(std::abs(where[f] - 800) < 150);
    // P(same fold) = (9*8 + 9*8*7) / (81*80)
    double expected = trials * (9.0 * 8 + 9.0 * 8 * 7) / (81.0 * 80);
    CHECK(std::abs(together[0] - expected) < 150);
  }
}

TEST_CASE("run_xval on identical benchmarks") {
  auto space = testing::make_space(3);
  std::mt19937_64 rng(8);
  auto spec = testing::random_additive(rng, space);
  auto progs = names(12);
  std::map<std::string, BenchmarkModel> specs;
  for (auto& p : progs) specs[p] = spec;
  SyntheticModel model(space, specs);
  CachingEvaluator ev(space, std::make_unique<SyntheticBackend>(model));
  auto plan = make_folds(progs, 4, 2);
  auto xval = run_xval(space, synthetic_suite(progs), ev, {0.0, std::nullopt, Aggregate::arithmetic_mean}, plan);
  REQUIRE(xval.folds.size() == 4);
  const double train_ratio = testing::reference_optimum(space, spec, "O3").time / testing::reference_time(space, spec, stock_baseline(space));
  std::set<std::string> tested;
  for (const auto& f : xval.folds) {
    REQUIRE(f.trained);
    CHECK(*f.trained == *xval.folds[0].trained);
    for (const auto& t : f.tests) {
      CHECK(*t.ratio == doctest::Approx(train_ratio).epsilon(1e-12));
      CHECK(tested.insert(t.program).second);
    }
  }
  CHECK(tested.size() == progs.size());
}

TEST_CASE("run_xval: a unique-requirement program gains nothing") {
  auto space = testing::make_space(2);
  auto progs = names(9);
  std::map<std::string, BenchmarkModel> specs;
  for (auto& p : progs) {
    BenchmarkModel m;
    m.base_time = 100;
    m.flag_delta["f0"] = {8.0, 0.0};
    specs[p] = m;
  }
  BenchmarkModel unique;
  unique.base_time = 100;
  unique.flag_delta["f1"] = {25.0, 0.0};
  specs["unique"] = unique;
  progs.push_back("unique");
  SyntheticModel model(space, specs);
  CachingEvaluator ev(space, std::make_unique<SyntheticBackend>(model));
  auto plan = make_folds(progs, 5, 13);
  auto xval = run_xval(space, synthetic_suite(progs), ev, {5.0, std::nullopt, Aggregate::arithmetic_mean}, plan);
  for (const auto& f : xval.folds) {
    auto held = plan.test_set(f.fold);
    for (const auto& name : f.trace.benchmarks()) CHECK(std::find(held.begin(), held.end(), name) == held.end());
    for (const auto& t : f.tests) {
      if (t.program == "unique") {
        CHECK(*t.ratio == 1.0);
        CHECK(f.trained->bitstring() == "01");
      } else {
        CHECK(*t.ratio == 100.0 / 108.0);
      }
    }
  }
}

TEST_CASE("feature tables") {
  auto rows = parse_feature_table("program,a,b\nx,1,2\ny,3.5,-4\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].program == "y");
  CHECK(rows[1].features == std::vector<double>{3.5, -4});
  CHECK(parse_feature_table("name\tf\nx\t1\n")[0].features == std::vector<double>{1});
  CHECK_THROWS_AS(parse_feature_table("p,a,b\nx,1\n"), ParseError);
  CHECK_THROWS_AS(parse_feature_table("p,a\nx,abc\n"), ParseError);
  CHECK_THROWS_AS(parse_feature_table("p,a\nx,inf\n"), ParseError);
  CHECK_THROWS_AS(parse_feature_table("p,a\nx,1\nx,2\n"), ParseError);
}

TEST_CASE("predict_1nn") {
  auto cfg = [](const char* bits) { return Configuration::from_bitstring("O3", bits); };
  std::vector<TrainingProgram> training{
      {{"a", {0.0, 0.0}}, {{cfg("11"), 10.0}, {cfg("01"), 8.0}, {cfg("10"), 8.0}}},
      {{"b", {2.0, 0.0}}, {{cfg("00"), 5.0}}},
      {{"c", {10.0, 10.0}}, {{cfg("10"), 3.0}}},
  };
  SUBCASE("identical vector") {
    auto p = predict_1nn({"q", {2.0, 0.0}}, training, false);
    CHECK(p.neighbor == "b");
    CHECK(p.distance == 0.0);
    CHECK(p.config == cfg("00"));
    CHECK(predict_1nn({"q", {0.0, 0.0}}, training).config == cfg("01"));
  }
  SUBCASE("nearer program") {
    auto p = predict_1nn({"q", {0.9, 0.0}}, training, false);
    CHECK(p.neighbor == "a");
    CHECK(p.distance == doctest::Approx(0.9));
    CHECK(predict_1nn({"q", {1.1, 0.0}}, training, false).neighbor == "b");
    CHECK(predict_1nn({"q", {1.0, 0.0}}, training, false).neighbor == "a");
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(predict_1nn({"q", {1.0}}, training), std::invalid_argument);
    CHECK_THROWS_AS(predict_1nn({"q", {1.0, 1.0}}, std::span<const TrainingProgram>{}), std::invalid_argument);
    auto empty = training;
    empty[1].table.clear();
    CHECK_THROWS_AS(predict_1nn({"q", {2.0, 0.0}}, empty), Error);
  }
}

TEST_CASE("predict_1nn is invariant under per-feature affine rescaling") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(0.01, 100.0), shift(-1000.0, 1000.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + rng() % 6, n = 2 + rng() % 10;
    std::vector<TrainingProgram> training;
    for (std::size_t i = 0; i < n; ++i) {
      TrainingProgram p;
      p.features.program = "p" + std::to_string(i);
      for (std::size_t d = 0; d < dim; ++d) p.features.features.push_back(normal(rng));
      p.table.push_back({Configuration::from_bitstring("O3", i % 2 ? "10" : "01"), 1.0 + i});
      training.push_back(p);
    }
    FeatureVector query{"q", {}};
    for (std::size_t d = 0; d < dim; ++d) query.features.push_back(normal(rng));
    auto before = predict_1nn(query, training);

    for (std::size_t d = 0; d < dim; ++d) {
      double a = scale(rng) * (rng() & 1 ? 1 : -1), b = shift(rng);
      for (auto& p : training) p.features.features[d] = a * p.features.features[d] + b;
      query.features[d] = a * query.features[d] + b;
    }
    auto after = predict_1nn(query, training);
    CHECK(after.neighbor == before.neighbor);
    CHECK(after.config == before.config);
    CHECK(after.distance == doctest::Approx(before.distance).epsilon(1e-6));
  }
}

TEST_CASE("predict_1nn follows the training tables: RIC versus CE data") {
  auto space = testing::make_space(2);
  BenchmarkModel plain;
  plain.base_time = 100;
  plain.flag_delta["f1"] = {-3.0, 0.0};
  SyntheticModel model(space, {{"cover", testing::pair_model(space).specs().at("cover")}, {"plain", plain}});
  CachingEvaluator ev(space, std::make_unique<SyntheticBackend>(model));
  auto suite = synthetic_suite({"cover", "plain"});
  std::vector<CampaignTrace> ric{run_ric(space, suite, ev, 200, 2017)};
  std::vector<CampaignTrace> ce;
  for (const auto& b : suite.benchmarks) ce.push_back(run_ce(space, b, ev).trace);

  auto build = [&](std::span<const CampaignTrace> traces) {
    return std::vector<TrainingProgram>{{{"cover", {0.0, 1.0}}, performance_table(traces, "cover")},
                                        {{"plain", {5.0, 3.0}}, performance_table(traces, "plain")}};
  };
  FeatureVector query{"new", {0.5, 1.2}};
  auto from_ric = predict_1nn(query, build(ric));
  auto from_ce = predict_1nn(query, build(ce));
  CHECK(from_ric.neighbor == "cover");
  CHECK(from_ce.neighbor == "cover");
  CHECK(from_ric.config.bitstring() == "00");
  CHECK(from_ce.config.bitstring() == "11");
}
