#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "treid/model.hpp"

namespace treid {

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File missing / unreadable / unwritable.
class IoError : public IngestError {
 public:
  using IngestError::IngestError;
};

// Syntactically broken input; messages name the offending line.
class ParseError : public IngestError {
 public:
  using IngestError::IngestError;
};

// Well-formed input that violates the dataset schema (dimension mismatch,
// duplicate probe ids, unsupported version, ...).
class SchemaError : public IngestError {
 public:
  using IngestError::IngestError;
};

struct DatasetManifest {
  int dim = 0;
  Timestamp horizon = 0.0;  // >= every arrival
  std::size_t track_count = 0;
  int schema_version = kSchemaVersion;
};

struct ReadOptions {
  ArrivalMode arrival_mode = ArrivalMode::kTrackEnd;
};

struct GalleryData {
  std::vector<GalleryEvent> events;  // sorted by (arrival, track_id)
  DatasetManifest manifest;
};

// Dataset files are JSON-lines: an optional header object (recognized by its
// "schema_version" key) followed by one record per line. Gallery records are
// {"track_id", "identity_id" (nullable), "t_start", "t_end", "features":
// [[...], ...]}; probe records add "probe_id". Arrivals are stamped per
// ReadOptions and the events come back sorted.
GalleryData read_gallery_stream(const std::filesystem::path& path,
                                const ReadOptions& options = {});

// expected_dim 0 means infer from the file.
ProbeSet read_probes(const std::filesystem::path& path, int expected_dim);

void write_gallery_stream(const std::filesystem::path& path,
                          const std::vector<GalleryEvent>& events, Timestamp horizon);
void write_probes(const std::filesystem::path& path, const ProbeSet& probes);

// CSV table emission. All floats are written in shortest round-trip decimal
// form, so read(write(x)) reproduces every value exactly and reruns are
// byte-identical.
void write_rank_traces(const std::filesystem::path& path,
                       const std::vector<RankTrace>& traces);
std::vector<RankTrace> read_rank_traces(const std::filesystem::path& path,
                                        Timestamp horizon);

void write_rpc(const std::filesystem::path& path, const RpcTable& table);
RpcTable read_rpc(const std::filesystem::path& path);

void write_cmc(const std::filesystem::path& path, const CmcTable& table);
CmcTable read_cmc(const std::filesystem::path& path);

void write_flow(const std::filesystem::path& path, const FlowDensityProfile& profile);
FlowDensityProfile read_flow(const std::filesystem::path& path, double bin_width);

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

// FNV-1a over the file's bytes, as a hex string; used for run manifests.
std::string file_digest(const std::filesystem::path& path);

}  // namespace treid
