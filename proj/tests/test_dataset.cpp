#include "hwime/dataset.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

#include "hwime/bytes.hpp"
#include "hwime/rng.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace hwime;

namespace {

// Hand-assembled minimal file, independent of write_hws: one sample labeled
// "永" with one 2-point stroke.
std::vector<uint8_t> minimal_file() {
  std::vector<uint8_t> bytes;
  const char* magic = "HWS1";
  bytes.insert(bytes.end(), magic, magic + 4);
  put_u32be(bytes, 1);               // sample count
  put_u16be(bytes, 3);               // label byte length
  const char* label = "\xE6\xB0\xB8";  // 永
  bytes.insert(bytes.end(), label, label + 3);
  put_u16be(bytes, 1);  // stroke count
  put_u16be(bytes, 2);  // point count
  put_i16be(bytes, 10);
  put_i16be(bytes, -20);
  put_i16be(bytes, 30);
  put_i16be(bytes, 40);
  return bytes;
}

DatasetErrc error_code(const std::vector<uint8_t>& bytes) {
  try {
    parse_hws(bytes, "t");
  } catch (const DatasetError& err) {
    return err.code();
  }
  throw std::logic_error("expected DatasetError");
}

}  // namespace

TEST_CASE("write_hws is the inverse of parse_hws on a hand-built file") {
  auto bytes = minimal_file();
  CHECK(write_hws(parse_hws(bytes, "db")) == bytes);
}

TEST_CASE("parse_hws reads the minimal file") {
  SamplePool pool = parse_hws(minimal_file(), "db");
  CHECK(pool.source_name == "db");
  REQUIRE(pool.samples.size() == 1);
  const Sample& s = pool.samples[0];
  CHECK(s.id == 0);
  CHECK(s.label == "永");
  REQUIRE(s.strokes.size() == 1);
  REQUIRE(s.strokes[0].points.size() == 2);
  CHECK(s.strokes[0].points[0] == Point{10, -20, 0});
  CHECK(s.strokes[0].points[1] == Point{30, 40, 0});
}

TEST_CASE("parse_hws rejects a bad magic at offset 0") {
  auto bytes = minimal_file();
  bytes[0] = 'X';
  try {
    parse_hws(bytes, "t");
    FAIL("expected BadMagic");
  } catch (const DatasetError& err) {
    CHECK(err.code() == DatasetErrc::BadMagic);
    CHECK(err.offset() == 0);
  }
}

TEST_CASE("parse_hws rejects every truncation of a valid file") {
  auto bytes = minimal_file();
  for (size_t len = 0; len < bytes.size(); ++len) {
    std::vector<uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<ptrdiff_t>(len));
    if (len < 4) {
      // too short even for the magic: reported as truncated input
      CHECK(error_code(cut) == DatasetErrc::TruncatedFile);
    } else {
      CHECK(error_code(cut) == DatasetErrc::TruncatedFile);
    }
  }
}

TEST_CASE("parse_hws rejects trailing bytes") {
  auto bytes = minimal_file();
  bytes.push_back(0);
  CHECK(error_code(bytes) == DatasetErrc::TrailingBytes);
}

TEST_CASE("parse_hws rejects structural zeros and bad labels") {
  auto with = [](auto mutate) {
    auto bytes = minimal_file();
    mutate(bytes);
    return bytes;
  };

  // stroke count 0 (offset 13 = 4 magic + 4 count + 2 label len + 3 label)
  CHECK(error_code(with([](auto& b) { b[13] = 0; b[14] = 0; })) == DatasetErrc::ZeroStrokes);
  // point count 0
  CHECK(error_code(with([](auto& b) { b[15] = 0; b[16] = 0; })) == DatasetErrc::ZeroPoints);
  // label bytes not UTF-8
  CHECK(error_code(with([](auto& b) { b[10] = 0xFF; })) == DatasetErrc::InvalidUtf8Label);
  // empty label
  auto bytes = minimal_file();
  bytes.erase(bytes.begin() + 10, bytes.begin() + 13);  // drop label bytes
  bytes[8] = 0;
  bytes[9] = 0;  // label_len = 0
  CHECK(error_code(bytes) == DatasetErrc::InvalidUtf8Label);
}

TEST_CASE("write_hws of an empty pool is magic plus zero count") {
  SamplePool pool;
  pool.source_name = "empty";
  auto bytes = write_hws(pool);
  CHECK(bytes == std::vector<uint8_t>{'H', 'W', 'S', '1', 0, 0, 0, 0});
}

TEST_CASE("hws round trips byte-identically") {
  SamplePool pool = testsupport::random_pool("rt", 60, 42);
  auto bytes = write_hws(pool);

  SamplePool reparsed = parse_hws(bytes, "rt");
  REQUIRE(reparsed.samples.size() == pool.samples.size());
  CHECK(write_hws(reparsed) == bytes);

  for (size_t i = 0; i < pool.samples.size(); ++i) {
    CHECK(reparsed.samples[i].label == pool.samples[i].label);
    CHECK(testsupport::coordinates(reparsed.samples[i]) ==
          testsupport::coordinates(pool.samples[i]));
  }
}

TEST_CASE("parse_hws never reads past every truncation of a generated file") {
  SamplePool pool = testsupport::random_pool("gen", 8, 1);
  auto bytes = write_hws(pool);
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    size_t len = rng.next_below(bytes.size());
    std::vector<uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<ptrdiff_t>(len));
    CHECK(error_code(cut) == DatasetErrc::TruncatedFile);
  }
}

TEST_CASE("write_hws rejects oversized fields") {
  SamplePool pool;
  pool.source_name = "big";
  Sample s;
  s.id = 0;
  s.label = std::string(70000, 'a');
  s.strokes.push_back(Stroke{{{0, 0, 0}}});
  pool.samples.push_back(s);
  CHECK_THROWS_AS((void)write_hws(pool), DatasetError);

  pool.samples[0].label = "a";
  pool.samples[0].strokes[0].points.assign(70000, Point{0, 0, 0});
  try {
    (void)write_hws(pool);
    FAIL("expected TooManyPoints");
  } catch (const DatasetError& err) {
    CHECK(err.code() == DatasetErrc::TooManyPoints);
  }
}

TEST_CASE("load_charset parses labels, comments and blanks") {
  Charset cs = load_charset("a\nb\nc", "abc");
  CHECK(cs.members == std::set<std::string>{"a", "b", "c"});

  Charset commented = load_charset("# header\n\na\r\n# note\nb\n\n", "c");
  CHECK(commented.members == std::set<std::string>{"a", "b"});
}

TEST_CASE("load_charset accepts multi-byte symbols") {
  Charset cs = load_charset("π\n√\n∫\nφ\nψ\n%\nx\nX\n0\nO", "sym");
  CHECK(cs.members.size() == 10);
  CHECK(cs.members.count("π") == 1);
  CHECK(cs.members.count("√") == 1);
}

TEST_CASE("load_charset rejects duplicates and empty sets") {
  CHECK_THROWS_AS((void)load_charset("a\na", "dup"), DatasetError);
  CHECK_THROWS_AS((void)load_charset("# only comments\n\n", "none"), DatasetError);
  try {
    (void)load_charset("a\na", "dup");
  } catch (const DatasetError& err) {
    CHECK(err.code() == DatasetErrc::DuplicateEntry);
  }
}

TEST_CASE("filter_by_charset keeps members in order") {
  SamplePool pool;
  pool.source_name = "p";
  int id = 0;
  for (const char* label : {"a", "b", "c"}) {
    Sample s;
    s.id = static_cast<uint32_t>(id++);
    s.label = label;
    s.strokes.push_back(Stroke{{{0, 0, 0}}});
    pool.samples.push_back(s);
  }

  Charset only_b{"b", {"b"}};
  SamplePool filtered = filter_by_charset(pool, only_b);
  REQUIRE(filtered.samples.size() == 1);
  CHECK(filtered.samples[0].label == "b");
  CHECK(filtered.samples[0].id == 1);

  Charset superset{"all", {"a", "b", "c", "d"}};
  CHECK(filter_by_charset(pool, superset).samples.size() == 3);
}

TEST_CASE("filter_by_charset agrees with a linear scan on a mixed pool") {
  SamplePool pool = testsupport::random_pool("mix", 100, 77);
  Charset cs{"cs", {"a", "永", "π"}};

  size_t expected = 0;
  for (const Sample& s : pool.samples) {
    if (s.label == "a" || s.label == "永" || s.label == "π") ++expected;
  }

  SamplePool filtered = filter_by_charset(pool, cs);
  CHECK(filtered.samples.size() == expected);
  for (const Sample& s : filtered.samples) CHECK(cs.members.count(s.label) == 1);
}

TEST_CASE("build_replicas with size == pool size permutes the whole pool") {
  SamplePool pool = testsupport::random_pool("perm", 12, 3);
  auto replicas = build_replicas({pool}, 12, 2, 99, "perm_set");
  for (const TestReplica& replica : replicas) {
    REQUIRE(replica.entries.size() == 12);
    std::set<uint32_t> seen;
    for (const ReplicaEntry& e : replica.entries) {
      CHECK(e.source_name == "perm");
      seen.insert(e.sample_id);
    }
    CHECK(seen.size() == 12);
  }
}

TEST_CASE("build_replicas is deterministic") {
  SamplePool pool = testsupport::random_pool("det", 40, 11);
  auto a = build_replicas({pool}, 10, 3, 1234, "s");
  auto b = build_replicas({pool}, 10, 3, 1234, "s");
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].entries == b[i].entries);
    CHECK(format_replica(a[i]) == format_replica(b[i]));
  }
}

TEST_CASE("build_replicas matches the straight-line oracle") {
  SamplePool pool = testsupport::random_pool("oracle", 5, 21);
  const uint64_t seed = 0xDEADBEEFCAFEull;
  auto replicas = build_replicas({pool}, 3, 2, seed, "o");

  for (uint32_t idx = 1; idx <= 2; ++idx) {
    auto oracle = testsupport::oracle_draw(5, 3, seed, idx);
    const TestReplica& replica = replicas[idx - 1];
    REQUIRE(replica.entries.size() == oracle.size());
    for (size_t j = 0; j < oracle.size(); ++j) {
      CHECK(replica.entries[j].sample_id == oracle[j]);
    }
  }

  // frozen expectations computed with an out-of-process reimplementation
  auto ids = [](const TestReplica& r) {
    std::vector<uint32_t> out;
    for (const ReplicaEntry& e : r.entries) out.push_back(e.sample_id);
    return out;
  };
  CHECK(ids(replicas[0]) == std::vector<uint32_t>{0, 2, 1});
  CHECK(ids(replicas[1]) == std::vector<uint32_t>{0, 4, 3});
}

TEST_CASE("splitmix64 matches the published reference outputs") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFull);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ull);
  CHECK(rng.next() == 0x06C45D188009454Full);
}

TEST_CASE("build_replicas draws across pools without duplicates") {
  SamplePool a = testsupport::random_pool("a", 30, 1);
  SamplePool b = testsupport::random_pool("b", 20, 2);
  auto replicas = build_replicas({a, b}, 35, 4, 7, "ab");
  for (const TestReplica& replica : replicas) {
    std::set<ReplicaEntry> seen(replica.entries.begin(), replica.entries.end());
    CHECK(seen.size() == replica.entries.size());
  }
}

TEST_CASE("build_replicas rejects undersized pools and duplicate sources") {
  SamplePool pool = testsupport::random_pool("small", 4, 1);
  try {
    (void)build_replicas({pool}, 5, 1, 1, "s");
    FAIL("expected PoolTooSmall");
  } catch (const DatasetError& err) {
    CHECK(err.code() == DatasetErrc::PoolTooSmall);
  }
  CHECK_THROWS_AS((void)build_replicas({pool, pool}, 2, 1, 1, "s"), DatasetError);
}

TEST_CASE("replica files round trip") {
  SamplePool pool = testsupport::random_pool("rt", 25, 5);
  auto replicas = build_replicas({pool}, 10, 1, 42, "rt_set");
  std::string body = format_replica(replicas[0]);
  TestReplica parsed = parse_replica(body);
  CHECK(parsed.set_name == "rt_set");
  CHECK(parsed.replica_index == 1);
  CHECK(parsed.seed == 42);
  CHECK(parsed.entries == replicas[0].entries);
  CHECK(format_replica(parsed) == body);
}

TEST_CASE("label files round trip") {
  LabelMap labels{{0, "永"}, {1, "x"}, {5, "π"}};
  std::string body = format_labels(labels);
  CHECK(parse_labels(body) == labels);
}
