#include "hwime/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hwime/bytes.hpp"
#include "hwime/rng.hpp"
#include "hwime/text.hpp"

namespace hwime {

namespace {

constexpr char kMagic[4] = {'H', 'W', 'S', '1'};
constexpr size_t kMaxU16 = 0xFFFF;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const std::string& path, std::string_view body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

// Cursor over the input that reports truncation with the offset at which the
// read was attempted.
class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  size_t offset() const { return at_; }
  size_t remaining() const { return bytes_.size() - at_; }

  void need(size_t n) const {
    if (remaining() < n) {
      throw DatasetError(DatasetErrc::TruncatedFile, at_,
                         "need " + std::to_string(n) + " more byte(s)");
    }
  }

  uint8_t u8() {
    need(1);
    return bytes_[at_++];
  }
  uint16_t u16() {
    need(2);
    uint16_t v = get_u16be(bytes_, at_);
    at_ += 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = get_u32be(bytes_, at_);
    at_ += 4;
    return v;
  }
  int16_t i16() { return static_cast<int16_t>(u16()); }

  std::string_view raw(size_t n) {
    need(n);
    auto view = std::string_view(reinterpret_cast<const char*>(bytes_.data()) + at_, n);
    at_ += n;
    return view;
  }

 private:
  std::span<const uint8_t> bytes_;
  size_t at_ = 0;
};

}  // namespace

const char* to_string(DatasetErrc code) {
  switch (code) {
    case DatasetErrc::BadMagic: return "BadMagic";
    case DatasetErrc::TruncatedFile: return "TruncatedFile";
    case DatasetErrc::InvalidUtf8Label: return "InvalidUtf8Label";
    case DatasetErrc::ZeroStrokes: return "ZeroStrokes";
    case DatasetErrc::ZeroPoints: return "ZeroPoints";
    case DatasetErrc::TrailingBytes: return "TrailingBytes";
    case DatasetErrc::LabelTooLong: return "LabelTooLong";
    case DatasetErrc::TooManyStrokes: return "TooManyStrokes";
    case DatasetErrc::TooManyPoints: return "TooManyPoints";
    case DatasetErrc::TooManySamples: return "TooManySamples";
    case DatasetErrc::DuplicateEntry: return "DuplicateEntry";
    case DatasetErrc::EmptyCharset: return "EmptyCharset";
    case DatasetErrc::PoolTooSmall: return "PoolTooSmall";
    case DatasetErrc::DuplicateSource: return "DuplicateSource";
    case DatasetErrc::BadReplicaFile: return "BadReplicaFile";
    case DatasetErrc::BadLabelFile: return "BadLabelFile";
  }
  return "?";
}

DatasetError::DatasetError(DatasetErrc code, size_t offset, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + " at byte " +
                         std::to_string(offset) + (detail.empty() ? "" : ": " + detail)),
      code_(code),
      offset_(offset) {}

SamplePool parse_hws(std::span<const uint8_t> bytes, std::string source_name) {
  Reader r(bytes);

  r.need(4);
  std::string_view magic = r.raw(4);
  if (std::string_view(kMagic, 4) != magic) {
    throw DatasetError(DatasetErrc::BadMagic, 0, "expected \"HWS1\"");
  }

  uint32_t sample_count = r.u32();
  SamplePool pool;
  pool.source_name = std::move(source_name);
  pool.samples.reserve(std::min<uint32_t>(sample_count, 1u << 20));

  for (uint32_t s = 0; s < sample_count; ++s) {
    Sample sample;
    sample.id = s;

    uint16_t label_len = r.u16();
    size_t label_at = r.offset();
    std::string_view label = r.raw(label_len);
    if (label_len == 0 || !text::is_valid_utf8(label)) {
      throw DatasetError(DatasetErrc::InvalidUtf8Label, label_at,
                         "sample " + std::to_string(s));
    }
    sample.label.assign(label);

    size_t strokes_at = r.offset();
    uint16_t stroke_count = r.u16();
    if (stroke_count == 0) {
      throw DatasetError(DatasetErrc::ZeroStrokes, strokes_at,
                         "sample " + std::to_string(s));
    }
    sample.strokes.reserve(stroke_count);
    for (uint16_t k = 0; k < stroke_count; ++k) {
      size_t points_at = r.offset();
      uint16_t pt_count = r.u16();
      if (pt_count == 0) {
        throw DatasetError(DatasetErrc::ZeroPoints, points_at,
                           "sample " + std::to_string(s) + " stroke " + std::to_string(k));
      }
      Stroke stroke;
      stroke.points.reserve(pt_count);
      for (uint16_t p = 0; p < pt_count; ++p) {
        int16_t x = r.i16();
        int16_t y = r.i16();
        stroke.points.push_back({x, y, 0});
      }
      sample.strokes.push_back(std::move(stroke));
    }
    pool.samples.push_back(std::move(sample));
  }

  if (r.remaining() != 0) {
    throw DatasetError(DatasetErrc::TrailingBytes, r.offset(),
                       std::to_string(r.remaining()) + " byte(s) past last sample");
  }
  return pool;
}

std::vector<uint8_t> write_hws(const SamplePool& pool) {
  if (pool.samples.size() > 0xFFFFFFFFull) {
    throw DatasetError(DatasetErrc::TooManySamples, 4, "");
  }

  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32be(out, static_cast<uint32_t>(pool.samples.size()));

  for (const Sample& sample : pool.samples) {
    if (sample.label.size() > kMaxU16) {
      throw DatasetError(DatasetErrc::LabelTooLong, out.size(), sample.label.substr(0, 16));
    }
    put_u16be(out, static_cast<uint16_t>(sample.label.size()));
    out.insert(out.end(), sample.label.begin(), sample.label.end());

    if (sample.strokes.size() > kMaxU16) {
      throw DatasetError(DatasetErrc::TooManyStrokes, out.size(), "");
    }
    put_u16be(out, static_cast<uint16_t>(sample.strokes.size()));
    for (const Stroke& stroke : sample.strokes) {
      if (stroke.points.size() > kMaxU16) {
        throw DatasetError(DatasetErrc::TooManyPoints, out.size(), "");
      }
      put_u16be(out, static_cast<uint16_t>(stroke.points.size()));
      for (const Point& p : stroke.points) {
        put_i16be(out, p.x);
        put_i16be(out, p.y);
      }
    }
  }
  return out;
}

Charset load_charset(std::string_view body, std::string name) {
  Charset cs;
  cs.name = std::move(name);

  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= body.size()) {
    size_t eol = body.find('\n', pos);
    std::string_view line = body.substr(pos, eol == std::string_view::npos
                                                 ? body.size() - pos
                                                 : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? body.size() + 1 : eol + 1;

    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!cs.members.emplace(line).second) {
      throw DatasetError(DatasetErrc::DuplicateEntry, line_no,
                         "charset line " + std::to_string(line_no));
    }
  }
  if (cs.members.empty()) {
    throw DatasetError(DatasetErrc::EmptyCharset, 0, cs.name);
  }
  return cs;
}

SamplePool filter_by_charset(const SamplePool& pool, const Charset& charset) {
  SamplePool out;
  out.source_name = pool.source_name;
  for (const Sample& sample : pool.samples) {
    if (charset.members.count(sample.label)) out.samples.push_back(sample);
  }
  return out;
}

std::vector<TestReplica> build_replicas(const std::vector<SamplePool>& pools,
                                        size_t size, uint32_t replica_count,
                                        uint64_t seed, std::string set_name) {
  if (size == 0) throw std::invalid_argument("replica size must be >= 1");
  if (replica_count == 0) throw std::invalid_argument("replica count must be >= 1");

  std::set<std::string> names;
  std::vector<ReplicaEntry> universe;
  for (const SamplePool& pool : pools) {
    if (!names.insert(pool.source_name).second) {
      throw DatasetError(DatasetErrc::DuplicateSource, 0, pool.source_name);
    }
    for (const Sample& sample : pool.samples) {
      universe.push_back({pool.source_name, sample.id});
    }
  }
  if (universe.size() < size) {
    throw DatasetError(DatasetErrc::PoolTooSmall, 0,
                       std::to_string(universe.size()) + " < " + std::to_string(size));
  }

  std::vector<TestReplica> replicas;
  replicas.reserve(replica_count);
  for (uint32_t i = 1; i <= replica_count; ++i) {
    SplitMix64 rng(replica_seed(seed, i));
    std::vector<uint32_t> order(universe.size());
    std::iota(order.begin(), order.end(), 0u);

    // Partial Fisher-Yates: only the first `size` slots are settled.
    for (size_t j = 0; j < size; ++j) {
      size_t k = j + static_cast<size_t>(rng.next_below(order.size() - j));
      std::swap(order[j], order[k]);
    }

    TestReplica replica;
    replica.set_name = set_name;
    replica.replica_index = i;
    replica.seed = seed;
    replica.entries.reserve(size);
    for (size_t j = 0; j < size; ++j) replica.entries.push_back(universe[order[j]]);
    replicas.push_back(std::move(replica));
  }
  return replicas;
}

std::string format_replica(const TestReplica& replica) {
  std::ostringstream out;
  out << "HWRL1 " << replica.set_name << ' ' << replica.replica_index << ' '
      << replica.seed << '\n';
  for (const ReplicaEntry& e : replica.entries) {
    out << e.source_name << '\t' << e.sample_id << '\n';
  }
  return std::move(out).str();
}

namespace {

uint64_t parse_u64(std::string_view token, DatasetErrc errc, size_t line_no) {
  uint64_t value = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) {
    throw DatasetError(errc, line_no, "bad integer '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_lines(std::string_view body) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < body.size()) {
    size_t eol = body.find('\n', pos);
    if (eol == std::string_view::npos) {
      lines.push_back(body.substr(pos));
      break;
    }
    lines.push_back(body.substr(pos, eol - pos));
    pos = eol + 1;
  }
  return lines;
}

}  // namespace

TestReplica parse_replica(std::string_view body) {
  auto lines = split_lines(body);
  if (lines.empty()) throw DatasetError(DatasetErrc::BadReplicaFile, 0, "empty file");

  std::istringstream header{std::string(lines[0])};
  std::string magic, set_name;
  uint32_t index = 0;
  uint64_t seed = 0;
  if (!(header >> magic >> set_name >> index >> seed) || magic != "HWRL1") {
    throw DatasetError(DatasetErrc::BadReplicaFile, 1, "bad header");
  }

  TestReplica replica;
  replica.set_name = std::move(set_name);
  replica.replica_index = index;
  replica.seed = seed;

  for (size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw DatasetError(DatasetErrc::BadReplicaFile, i + 1, "expected source<TAB>id");
    }
    ReplicaEntry entry;
    entry.source_name = std::string(line.substr(0, tab));
    entry.sample_id = static_cast<uint32_t>(
        parse_u64(line.substr(tab + 1), DatasetErrc::BadReplicaFile, i + 1));
    replica.entries.push_back(std::move(entry));
  }
  return replica;
}

std::string format_labels(const LabelMap& labels) {
  std::vector<uint32_t> keys;
  keys.reserve(labels.size());
  for (const auto& [k, _] : labels) keys.push_back(k);
  std::sort(keys.begin(), keys.end());

  std::ostringstream out;
  for (uint32_t k : keys) out << k << '\t' << labels.at(k) << '\n';
  return std::move(out).str();
}

LabelMap parse_labels(std::string_view body) {
  LabelMap labels;
  auto lines = split_lines(body);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab + 1 >= line.size()) {
      throw DatasetError(DatasetErrc::BadLabelFile, i + 1, "expected position<TAB>label");
    }
    uint32_t pos = static_cast<uint32_t>(
        parse_u64(line.substr(0, tab), DatasetErrc::BadLabelFile, i + 1));
    if (!labels.emplace(pos, std::string(line.substr(tab + 1))).second) {
      throw DatasetError(DatasetErrc::BadLabelFile, i + 1, "duplicate position");
    }
  }
  return labels;
}

SamplePool load_hws_file(const std::string& path) {
  std::string body = read_file(path);
  return parse_hws(std::span(reinterpret_cast<const uint8_t*>(body.data()), body.size()),
                   std::filesystem::path(path).stem().string());
}

void save_hws_file(const SamplePool& pool, const std::string& path) {
  std::vector<uint8_t> bytes = write_hws(pool);
  write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                    bytes.size()));
}

Charset load_charset_file(const std::string& path) {
  return load_charset(read_file(path), std::filesystem::path(path).stem().string());
}

TestReplica load_replica_file(const std::string& path) {
  return parse_replica(read_file(path));
}

LabelMap load_labels_file(const std::string& path) {
  return parse_labels(read_file(path));
}

}  // namespace hwime
