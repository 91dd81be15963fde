#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "casflow/audit.hpp"
#include "casflow/cascade.hpp"
#include "casflow/common.hpp"
#include "casflow/graph.hpp"
#include "casflow/ingest.hpp"
#include "casflow/shapley.hpp"

namespace casflow {

enum class UrlFilterMode { None, TrollUrls };

struct PipelineConfig {
  std::string input_path;
  std::string trolls_path;
  std::uint64_t min_retweeters = 100;
  UrlFilterMode url_filter = UrlFilterMode::None;
  unsigned threads = 1;
  std::string out_dir;
  std::uint64_t seed = 0;  // consumed by synthetic-data commands only
};

// Tracks output artifacts for the manifest. Files are registered once fully
// written; a failing stage marks its leftovers stale.
class ArtifactRecorder {
 public:
  explicit ArtifactRecorder(std::string root) : root_(std::move(root)) {}

  void add(const std::string& rel_path, std::uint64_t rows);
  void mark_unrecorded_stale(const std::string& rel_dir);
  bool has(const std::string& rel_path) const;

  // Writes manifest.tsv (path, rows, fnv64, status), sorted by path.
  void write_manifest() const;

  const std::string& root() const { return root_; }

 private:
  struct Entry {
    std::string path;
    std::uint64_t rows;
    bool stale;
  };
  std::string root_;
  std::vector<Entry> entries_;
};

struct ManifestEntry {
  std::string path;
  std::uint64_t rows = 0;
  std::string hash;
  std::string status;
};

std::vector<ManifestEntry> read_manifest(const std::string& out_dir);

// Re-hashes every listed file; returns false and the first mismatch on drift.
bool verify_manifest(const std::string& out_dir, std::string* first_error = nullptr);

// --- stage artifact writers / loaders -------------------------------------

void write_ingest_outputs(std::span<const Cascade> cascades,
                          const std::string& dir,
                          ArtifactRecorder* rec = nullptr,
                          const std::string& rel_prefix = "");
std::vector<Cascade> load_cascades(const std::string& dir);

void write_graph_outputs(const InteractionGraph& ig, const FollowerGraph& fg,
                         const std::string& dir, ArtifactRecorder* rec = nullptr,
                         const std::string& rel_prefix = "");

struct GraphArtifacts {
  InteractionGraph ig;
  FollowerGraph fg;
};
GraphArtifacts load_graph(const std::string& dir);

// Troll/regular labels recovered from a node table (nodes.tsv groups).
TrollRegistry registry_from_nodes(const NodeTable& nodes);

void write_stats_outputs(const InteractionGraph& ig, const FollowerGraph& fg,
                         const std::string& dir, ArtifactRecorder* rec = nullptr,
                         const std::string& rel_prefix = "");

std::vector<FlowGraph> compute_flow_graphs(std::span<const Cascade> cascades,
                                           const FollowerGraph& fg,
                                           unsigned threads);
std::vector<CascadeTree> compute_trees(std::span<const FlowGraph> flows,
                                       unsigned threads);
std::vector<CascadeScores> compute_cascade_scores(
    std::span<const FlowGraph> flows, unsigned threads);

void write_cascade_outputs(std::span<const Cascade> cascades,
                           std::span<const CascadeTree> trees,
                           const TrollRegistry& registry,
                           const std::string& dir,
                           ArtifactRecorder* rec = nullptr,
                           const std::string& rel_prefix = "");

void write_shapley_outputs(std::span<const Cascade> cascades,
                           std::span<const CascadeScores> scores,
                           const TrollRegistry& registry,
                           const std::unordered_set<std::uint64_t>* filter_keys,
                           const std::string& dir,
                           ArtifactRecorder* rec = nullptr,
                           const std::string& rel_prefix = "");

std::vector<RankedEntry> load_ranking(const std::string& path);

void write_audit_outputs(const AuditReport& report, const std::string& dir);

// --- full pipeline ---------------------------------------------------------

// ingest -> graph -> stats -> cascade -> shapley -> report, with a manifest
// covering every artifact. Identical inputs and seed produce a byte-identical
// manifest for any worker count.
void run_pipeline(const PipelineConfig& cfg);

}  // namespace casflow
