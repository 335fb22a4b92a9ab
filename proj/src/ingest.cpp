#include "treid/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "treid/rng.hpp"

namespace treid {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string loc(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) throw IoError("cannot write " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out.good()) throw IoError("write failed for " + path.string());
}

double require_number(const json& j, const char* field, const std::string& where) {
  if (!j.contains(field) || !j[field].is_number())
    throw SchemaError(where + ": missing or non-numeric \"" + std::string(field) + "\"");
  return j[field].get<double>();
}

std::string require_string(const json& j, const char* field, const std::string& where) {
  if (!j.contains(field) || !j[field].is_string())
    throw SchemaError(where + ": missing or non-string \"" + std::string(field) + "\"");
  return j[field].get<std::string>();
}

// Shared shape of gallery and probe records.
Track parse_track(const json& j, const std::string& where, int* dim) {
  Track track;
  track.track_id = require_string(j, "track_id", where);
  if (j.contains("identity_id") && !j["identity_id"].is_null()) {
    if (!j["identity_id"].is_string())
      throw SchemaError(where + ": \"identity_id\" must be a string or null");
    track.identity_id = j["identity_id"].get<std::string>();
  }
  track.t_start = require_number(j, "t_start", where);
  track.t_end = require_number(j, "t_end", where);
  if (!valid_timestamp(track.t_start) || !std::isfinite(track.t_end))
    throw SchemaError(where + ": invalid timestamps");
  if (track.t_start > track.t_end)
    throw SchemaError(where + ": t_start > t_end");

  if (!j.contains("features") || !j["features"].is_array() || j["features"].empty())
    throw SchemaError(where + ": \"features\" must be a non-empty array of frames");
  for (const json& frame : j["features"]) {
    if (!frame.is_array() || frame.empty())
      throw SchemaError(where + ": each frame must be a non-empty array");
    FeatureVector v;
    v.reserve(frame.size());
    for (const json& x : frame) {
      if (!x.is_number()) throw SchemaError(where + ": non-numeric feature component");
      const double value = x.get<double>();
      if (!std::isfinite(value))
        throw SchemaError(where + ": non-finite feature component");
      v.push_back(value);
    }
    track.frames.push_back(std::move(v));
  }
  const int track_dim = static_cast<int>(track.frames.front().size());
  for (const FeatureVector& f : track.frames)
    if (static_cast<int>(f.size()) != track_dim)
      throw SchemaError(where + ": frames of inconsistent dimension");
  if (*dim == 0) *dim = track_dim;
  if (track_dim != *dim)
    throw SchemaError(where + ": dimension " + std::to_string(track_dim) +
                      ", expected " + std::to_string(*dim));
  return track;
}

// Returns true and fills `header` if the first payload line is a header
// object (no "track_id"); headers anywhere else are rejected by the record
// parser since they lack required fields.
struct Header {
  int schema_version = kSchemaVersion;
  int dim = 0;
  Timestamp horizon = -1.0;  // < 0 = not given
};

bool parse_header(const json& j, const std::string& where, Header* header) {
  if (!j.is_object() || !j.contains("schema_version") || j.contains("track_id"))
    return false;
  if (!j["schema_version"].is_number_integer())
    throw SchemaError(where + ": \"schema_version\" must be an integer");
  header->schema_version = j["schema_version"].get<int>();
  if (header->schema_version != kSchemaVersion)
    throw SchemaError(where + ": unsupported schema_version " +
                      std::to_string(header->schema_version));
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 0)
      throw SchemaError(where + ": \"dim\" must be a non-negative integer");
    header->dim = j["dim"].get<int>();
  }
  if (j.contains("horizon")) {
    if (!j["horizon"].is_number() || !(j["horizon"].get<double>() >= 0.0))
      throw SchemaError(where + ": \"horizon\" must be a non-negative number");
    header->horizon = j["horizon"].get<double>();
  }
  return true;
}

json parse_line(const std::string& line, const std::filesystem::path& path,
                std::size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(loc(path, line_no) + ": malformed record: " + e.what());
  }
}

ordered_json track_to_json(const Track& track) {
  ordered_json j;
  j["track_id"] = track.track_id;
  if (track.identity_id)
    j["identity_id"] = *track.identity_id;
  else
    j["identity_id"] = nullptr;
  j["t_start"] = track.t_start;
  j["t_end"] = track.t_end;
  ordered_json frames = ordered_json::array();
  for (const FeatureVector& f : track.frames) frames.push_back(f);
  j["features"] = std::move(frames);
  return j;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_csv_double(const std::string& field, const std::filesystem::path& path,
                        std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ParseError(loc(path, line_no) + ": bad number \"" + field + "\"");
  return value;
}

long parse_csv_int(const std::string& field, const std::filesystem::path& path,
                   std::size_t line_no) {
  long value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ParseError(loc(path, line_no) + ": bad integer \"" + field + "\"");
  return value;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

void expect_header(std::ifstream& in, const std::string& expected,
                   const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path.string() + ":1: expected header \"" + expected + "\"");
  strip_cr(line);
  if (line != expected)
    throw ParseError(path.string() + ":1: expected header \"" + expected + "\"");
}

void check_id_writable(const std::string& id) {
  if (id.find_first_of(",\"\n\r") != std::string::npos)
    throw SchemaError("id \"" + id + "\" contains characters unsupported in CSV");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

GalleryData read_gallery_stream(const std::filesystem::path& path,
                                const ReadOptions& options) {
  std::ifstream in = open_input(path);
  GalleryData data;
  Header header;
  int dim = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first_payload = true;

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const json j = parse_line(line, path, line_no);
    if (first_payload) {
      first_payload = false;
      if (parse_header(j, loc(path, line_no), &header)) {
        dim = header.dim;
        continue;
      }
    }
    Track track = parse_track(j, loc(path, line_no), &dim);
    const Timestamp arrival = arrival_time(track, options.arrival_mode);
    data.events.push_back(GalleryEvent{arrival, std::move(track)});
  }

  sort_events(data.events);

  Timestamp max_arrival = 0.0;
  for (const GalleryEvent& e : data.events)
    max_arrival = std::max(max_arrival, e.arrival);
  if (header.horizon >= 0.0 && header.horizon < max_arrival)
    throw SchemaError(path.string() + ": header horizon " +
                      format_double(header.horizon) + " is less than max arrival " +
                      format_double(max_arrival));

  data.manifest.dim = dim;
  data.manifest.horizon = header.horizon >= 0.0 ? header.horizon : max_arrival;
  data.manifest.track_count = data.events.size();
  data.manifest.schema_version = header.schema_version;
  return data;
}

ProbeSet read_probes(const std::filesystem::path& path, int expected_dim) {
  std::ifstream in = open_input(path);
  ProbeSet probes;
  Header header;
  int dim = expected_dim;
  std::string line;
  std::size_t line_no = 0;
  bool first_payload = true;
  std::unordered_set<std::string> seen_ids;

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const json j = parse_line(line, path, line_no);
    if (first_payload) {
      first_payload = false;
      if (parse_header(j, loc(path, line_no), &header)) continue;
    }
    const std::string where = loc(path, line_no);
    Probe probe;
    probe.probe_id = require_string(j, "probe_id", where);
    probe.track = parse_track(j, where, &dim);
    if (!probe.track.identity_id)
      throw SchemaError(where + ": probe records require a non-null identity_id");
    probe.identity_id = *probe.track.identity_id;
    if (!seen_ids.insert(probe.probe_id).second)
      throw SchemaError(where + ": duplicate probe_id \"" + probe.probe_id + "\"");
    probes.push_back(std::move(probe));
  }
  return probes;
}

void write_gallery_stream(const std::filesystem::path& path,
                          const std::vector<GalleryEvent>& events, Timestamp horizon) {
  std::ofstream out = open_output(path);
  ordered_json header;
  header["schema_version"] = kSchemaVersion;
  header["dim"] = dataset_dim(events, {});
  header["horizon"] = horizon;
  out << header.dump() << '\n';
  for (const GalleryEvent& e : events) out << track_to_json(e.track).dump() << '\n';
  finish_output(out, path);
}

void write_probes(const std::filesystem::path& path, const ProbeSet& probes) {
  std::ofstream out = open_output(path);
  ordered_json header;
  header["schema_version"] = kSchemaVersion;
  header["dim"] = dataset_dim({}, probes);
  out << header.dump() << '\n';
  for (const Probe& p : probes) {
    ordered_json j;
    j["probe_id"] = p.probe_id;
    const ordered_json track = track_to_json(p.track);
    for (const auto& [key, value] : track.items()) j[key] = value;
    out << j.dump() << '\n';
  }
  finish_output(out, path);
}

void write_rank_traces(const std::filesystem::path& path,
                       const std::vector<RankTrace>& traces) {
  std::ofstream out = open_output(path);
  out << "probe_id,t_seconds,rank\n";
  for (const RankTrace& trace : traces) {
    check_id_writable(trace.probe_id);
    if (trace.breakpoints.empty()) {
      // Keep the probe visible in the file even when nothing ever matched.
      out << trace.probe_id << ",0,\n";
      continue;
    }
    for (const RankTrace::Breakpoint& bp : trace.breakpoints) {
      out << trace.probe_id << ',' << format_double(bp.t) << ',';
      if (bp.rank) out << *bp.rank;
      out << '\n';
    }
  }
  finish_output(out, path);
}

std::vector<RankTrace> read_rank_traces(const std::filesystem::path& path,
                                        Timestamp horizon) {
  std::ifstream in = open_input(path);
  expect_header(in, "probe_id,t_seconds,rank", path);
  std::vector<RankTrace> traces;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 1;

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != 3)
      throw ParseError(loc(path, line_no) + ": expected 3 fields");
    const std::string& probe_id = fields[0];
    if (traces.empty() || traces.back().probe_id != probe_id) {
      if (!seen.insert(probe_id).second)
        throw ParseError(loc(path, line_no) + ": rows for probe \"" + probe_id +
                         "\" are not contiguous");
      traces.push_back(RankTrace{probe_id, {}, horizon});
    }
    RankTrace::Breakpoint bp;
    bp.t = parse_csv_double(fields[1], path, line_no);
    if (!fields[2].empty()) {
      const long rank = parse_csv_int(fields[2], path, line_no);
      if (rank < 1) throw ParseError(loc(path, line_no) + ": rank must be >= 1");
      bp.rank = static_cast<int>(rank);
    }
    RankTrace& trace = traces.back();
    if (trace.breakpoints.empty() && bp.t == 0.0 && !bp.rank)
      continue;  // placeholder row for an entirely absent probe
    if (!trace.breakpoints.empty() && bp.t <= trace.breakpoints.back().t)
      throw ParseError(loc(path, line_no) + ": breakpoint times must increase");
    trace.breakpoints.push_back(bp);
  }
  return traces;
}

void write_rpc(const std::filesystem::path& path, const RpcTable& table) {
  std::ofstream out = open_output(path);
  out << "rank,duration_seconds,fraction\n";
  for (std::size_t ri = 0; ri < table.rank_levels.size(); ++ri)
    for (std::size_t di = 0; di < table.duration_grid.size(); ++di)
      out << table.rank_levels[ri] << ',' << format_double(table.duration_grid[di])
          << ',' << format_double(table.values[ri][di]) << '\n';
  finish_output(out, path);
}

RpcTable read_rpc(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  expect_header(in, "rank,duration_seconds,fraction", path);
  RpcTable table;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != 3)
      throw ParseError(loc(path, line_no) + ": expected 3 fields");
    const int rank = static_cast<int>(parse_csv_int(fields[0], path, line_no));
    const double d = parse_csv_double(fields[1], path, line_no);
    const double value = parse_csv_double(fields[2], path, line_no);
    if (table.rank_levels.empty() || table.rank_levels.back() != rank) {
      if (std::count(table.rank_levels.begin(), table.rank_levels.end(), rank) > 0)
        throw ParseError(loc(path, line_no) + ": rank " + std::to_string(rank) +
                         " rows are not contiguous");
      table.rank_levels.push_back(rank);
      table.values.emplace_back();
    }
    if (table.rank_levels.size() == 1) table.duration_grid.push_back(d);
    table.values.back().push_back(value);
  }
  for (const auto& row : table.values)
    if (row.size() != table.duration_grid.size())
      throw ParseError(path.string() + ": ragged RPC table");
  return table;
}

void write_cmc(const std::filesystem::path& path, const CmcTable& table) {
  std::ofstream out = open_output(path);
  out << "rank,fraction\n";
  for (std::size_t k = 0; k < table.values.size(); ++k)
    out << (k + 1) << ',' << format_double(table.values[k]) << '\n';
  finish_output(out, path);
}

CmcTable read_cmc(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  expect_header(in, "rank,fraction", path);
  CmcTable table;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != 2)
      throw ParseError(loc(path, line_no) + ": expected 2 fields");
    const long rank = parse_csv_int(fields[0], path, line_no);
    if (rank != static_cast<long>(table.values.size()) + 1)
      throw ParseError(loc(path, line_no) + ": ranks must run 1..max_rank");
    table.values.push_back(parse_csv_double(fields[1], path, line_no));
  }
  table.max_rank = static_cast<int>(table.values.size());
  return table;
}

void write_flow(const std::filesystem::path& path, const FlowDensityProfile& profile) {
  std::ofstream out = open_output(path);
  out << "bin_start_seconds,people_per_second\n";
  for (std::size_t b = 0; b < profile.counts.size(); ++b)
    out << format_double(static_cast<double>(b) * profile.bin_width) << ','
        << format_double(profile.people_per_second(b)) << '\n';
  finish_output(out, path);
}

FlowDensityProfile read_flow(const std::filesystem::path& path, double bin_width) {
  if (!(bin_width > 0.0))
    throw std::invalid_argument("read_flow: bin_width must be > 0");
  std::ifstream in = open_input(path);
  expect_header(in, "bin_start_seconds,people_per_second", path);
  FlowDensityProfile profile;
  profile.bin_width = bin_width;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != 2)
      throw ParseError(loc(path, line_no) + ": expected 2 fields");
    const double rate = parse_csv_double(fields[1], path, line_no);
    profile.counts.push_back(std::llround(rate * bin_width));
  }
  return profile;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return hex;
}

}  // namespace treid
