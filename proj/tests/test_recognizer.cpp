#include "hwime/recognizer.hpp"

#include <doctest.h>

#include <cmath>

#include "hwime/rng.hpp"
#include "hwime/trajectory.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace hwime;

namespace {

std::vector<Point> line(std::initializer_list<std::pair<int, int>> coords) {
  std::vector<Point> pts;
  uint32_t t = 0;
  for (auto [x, y] : coords) {
    pts.push_back({static_cast<int16_t>(x), static_cast<int16_t>(y), t});
    t += 6;
  }
  return pts;
}

}  // namespace

TEST_CASE("dtw_distance of identical sequences is zero") {
  auto a = line({{0, 0}, {3, 1}, {7, 2}});
  CHECK(dtw_distance(a, a) == doctest::Approx(0.0));
}

TEST_CASE("dtw_distance of single points is the point distance") {
  auto a = line({{0, 0}});
  auto b = line({{3, 4}});
  CHECK(dtw_distance(a, b) == doctest::Approx(5.0));
}

TEST_CASE("dtw_distance matches exhaustive path enumeration on a 3x2 grid") {
  auto a = line({{0, 0}, {1, 0}, {2, 0}});
  auto b = line({{0, 0}, {2, 0}});
  auto cost = [&](size_t i, size_t j) {
    return std::hypot(double(a[i].x) - b[j].x, double(a[i].y) - b[j].y);
  };
  double expected = testsupport::oracle_dtw_enumerate(3, 2, cost);
  CHECK(expected == doctest::Approx(1.0));  // frozen from the enumeration
  CHECK(dtw_distance(a, b) == doctest::Approx(expected));
}

TEST_CASE("dtw_distance matches enumeration on random small grids") {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    size_t n = 1 + rng.next_below(4);
    size_t m = 1 + rng.next_below(4);
    std::vector<Point> a, b;
    for (size_t i = 0; i < n; ++i) {
      a.push_back({static_cast<int16_t>(rng.next_below(50)),
                   static_cast<int16_t>(rng.next_below(50)), 0});
    }
    for (size_t j = 0; j < m; ++j) {
      b.push_back({static_cast<int16_t>(rng.next_below(50)),
                   static_cast<int16_t>(rng.next_below(50)), 0});
    }
    auto cost = [&](size_t i, size_t j) {
      return std::hypot(double(a[i].x) - b[j].x, double(a[i].y) - b[j].y);
    };
    CHECK(dtw_distance(a, b) ==
          doctest::Approx(testsupport::oracle_dtw_enumerate(n, m, cost)));
  }
}

TEST_CASE("dtw_distance is symmetric") {
  SplitMix64 rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> a, b;
    size_t n = 1 + rng.next_below(30);
    size_t m = 1 + rng.next_below(30);
    for (size_t i = 0; i < n; ++i) {
      a.push_back({static_cast<int16_t>(rng.next_below(100)),
                   static_cast<int16_t>(rng.next_below(100)), 0});
    }
    for (size_t j = 0; j < m; ++j) {
      b.push_back({static_cast<int16_t>(rng.next_below(100)),
                   static_cast<int16_t>(rng.next_below(100)), 0});
    }
    CHECK(dtw_distance(a, b) == doctest::Approx(dtw_distance(b, a)));
    CHECK(dtw_distance(a, a) == doctest::Approx(0.0));
  }
}

TEST_CASE("gapped dtw with equal stroke ordinals reduces to plain dtw") {
  auto a = line({{0, 0}, {5, 5}, {9, 2}});
  auto b = line({{1, 1}, {6, 4}});
  FlatPath fa, fb;
  for (const Point& p : a) fa.push_back({p.x, p.y, 0});
  for (const Point& p : b) fb.push_back({p.x, p.y, 0});
  CHECK(dtw_distance_gapped(fa, fb, 45.0) == doctest::Approx(dtw_distance(a, b)));
}

TEST_CASE("gapped dtw separates equal shapes with different stroke counts") {
  FlatPath one_stroke{{0, 0, 0}, {10, 0, 0}, {20, 0, 0}, {30, 0, 0}};
  FlatPath two_strokes{{0, 0, 0}, {10, 0, 0}, {20, 0, 1}, {30, 0, 1}};
  CHECK(dtw_distance_gapped(one_stroke, one_stroke, 45.0) == doctest::Approx(0.0));
  CHECK(dtw_distance_gapped(one_stroke, two_strokes, 45.0) > 0.0);
}

TEST_CASE("train_templates keeps the first per_label samples of each label") {
  SamplePool pool = testsupport::make_glyph_pool("train", 3, 7, 2);
  TemplateStore store = train_templates(pool, 180, 1);
  CHECK(store.templates.size() == 10);
  CHECK(store.path_count() == 10);

  TemplateStore more = train_templates(pool, 180, 5);
  CHECK(more.path_count() == 30);  // only 3 available per label

  TemplateStore again = train_templates(pool, 180, 1);
  CHECK(again.templates == store.templates);
}

TEST_CASE("nn_classify returns the label of an exact template match") {
  SamplePool pool = testsupport::make_glyph_pool("self", 1, 3, 2);
  TemplateStore store = train_templates(pool, 180, 1);
  for (const Sample& sample : pool.samples) {
    CHECK(nn_classify(sample, store, 180) == sample.label);
    CHECK(nn_classify_serial(sample, store, 180) == sample.label);
  }
}

TEST_CASE("nn_classify with a single-label store always answers that label") {
  SamplePool pool;
  pool.source_name = "one";
  Sample s = testsupport::make_glyph(3, 1, 2);
  s.id = 0;
  pool.samples.push_back(s);
  TemplateStore store = train_templates(pool, 180, 1);

  SplitMix64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    Sample query = testsupport::random_sample(rng, 0);
    CHECK(nn_classify(query, store, 180) == "3");
  }
}

TEST_CASE("nn_classify breaks ties toward the smallest label") {
  Sample glyph = testsupport::make_glyph(5, 42, 0);
  TemplateStore store;
  store.templates["zz"] = {flatten(normalize_size(glyph, 180))};
  store.templates["aa"] = {flatten(normalize_size(glyph, 180))};
  CHECK(nn_classify(glyph, store, 180) == "aa");
  CHECK(nn_classify_serial(glyph, store, 180) == "aa");
}

TEST_CASE("nn_classify rejects an empty store") {
  Sample glyph = testsupport::make_glyph(1, 1, 0);
  CHECK_THROWS_AS((void)nn_classify(glyph, TemplateStore{}, 180), EmptyStore);
}

TEST_CASE("parallel and serial classification agree everywhere") {
  SamplePool train = testsupport::make_glyph_pool("train", 6, 100, 3);
  TemplateStore store = train_templates(train, 180, 6);

  SamplePool queries = testsupport::make_glyph_pool("q", 3, 999, 4);
  for (const Sample& query : queries.samples) {
    CHECK(nn_classify(query, store, 180) == nn_classify_serial(query, store, 180));
  }
}

TEST_CASE("held-out glyphs classify correctly with a trained store") {
  SamplePool train = testsupport::make_glyph_pool("train", 10, 500, 3);
  TemplateStore store = train_templates(train, 180, 10);

  SamplePool held_out = testsupport::make_glyph_pool("test", 10, 8888, 3);
  int correct = 0;
  for (const Sample& query : held_out.samples) {
    if (nn_classify(query, store, 180) == query.label) ++correct;
  }
  // jittered copies of cleanly separable glyphs: expect essentially perfect
  CHECK(correct == static_cast<int>(held_out.samples.size()));
}

TEST_CASE("oracle recognizer answers from the label map and only from it") {
  OracleRecognizer oracle(LabelMap{{0, "永"}, {2, "x"}});
  std::vector<Stroke> strokes{Stroke{{{0, 0, 0}}}};
  CHECK(oracle.recognize(0, strokes) == "永");
  CHECK(oracle.recognize(2, strokes) == "x");
  CHECK(oracle.recognize(1, strokes).empty());
}

TEST_CASE("constant recognizer ignores its input") {
  ConstantRecognizer constant("ab");
  CHECK(constant.recognize(7, {}) == "ab");
  ConstantRecognizer silent("");
  CHECK(silent.recognize(7, {}).empty());
}
