#include "casflow/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <unordered_map>

#include "casflow/log.hpp"
#include "casflow/parallel.hpp"
#include "casflow/tsv.hpp"

namespace casflow {

namespace fs = std::filesystem;

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::uint64_t parse_hex_cell(const std::string& cell, const std::string& path,
                             std::uint64_t line_no) {
  std::uint64_t v = 0;
  auto [p, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), v, 16);
  if (ec != std::errc() || p != cell.data() + cell.size())
    throw DataError(path + ":" + std::to_string(line_no) + ": bad hash '" +
                    cell + "'");
  return v;
}

Group parse_group_cell(const std::string& cell, const std::string& path,
                       std::uint64_t line_no) {
  if (cell == "troll") return Group::Troll;
  if (cell == "regular") return Group::Regular;
  throw DataError(path + ":" + std::to_string(line_no) + ": bad group '" +
                  cell + "'");
}

std::string na_or(const std::optional<double>& v) {
  return v ? format_double(*v) : "NA";
}

void write_ccdf(const CcdfTable& table, const std::string& path,
                ArtifactRecorder* rec, const std::string& rel) {
  TsvWriter w(path, {"value", "fraction"});
  for (const auto& p : table.points)
    w.row({std::to_string(p.value), format_double(p.fraction)});
  w.close();
  if (rec) rec->add(rel, w.rows_written());
}

}  // namespace

// --- manifest ---------------------------------------------------------------

void ArtifactRecorder::add(const std::string& rel_path, std::uint64_t rows) {
  entries_.push_back(Entry{rel_path, rows, false});
}

bool ArtifactRecorder::has(const std::string& rel_path) const {
  for (const auto& e : entries_)
    if (e.path == rel_path) return true;
  return false;
}

void ArtifactRecorder::mark_unrecorded_stale(const std::string& rel_dir) {
  fs::path dir = fs::path(root_) / rel_dir;
  if (!fs::is_directory(dir)) return;
  std::vector<std::string> names;
  for (const auto& de : fs::directory_iterator(dir))
    if (de.is_regular_file()) names.push_back(de.path().filename().string());
  std::sort(names.begin(), names.end());
  for (const auto& n : names) {
    std::string rel = rel_dir.empty() ? n : rel_dir + "/" + n;
    if (!has(rel)) entries_.push_back(Entry{rel, 0, true});
  }
}

void ArtifactRecorder::write_manifest() const {
  std::vector<Entry> sorted = entries_;
  std::sort(sorted.begin(), sorted.end(),
            [](const Entry& a, const Entry& b) { return a.path < b.path; });
  TsvWriter w(join(root_, "manifest.tsv"), {"path", "rows", "fnv64", "status"});
  for (const auto& e : sorted) {
    std::string hash = to_hex(hash_file(join(root_, e.path)));
    w.row({e.path, std::to_string(e.rows), hash, e.stale ? "stale" : "ok"});
  }
  w.close();
}

std::vector<ManifestEntry> read_manifest(const std::string& out_dir) {
  auto rows = read_tsv(join(out_dir, "manifest.tsv"),
                       {"path", "rows", "fnv64", "status"});
  std::vector<ManifestEntry> out;
  for (const auto& r : rows) {
    if (r.cells.size() != 4)
      throw DataError("manifest.tsv: malformed row");
    ManifestEntry e;
    e.path = r.cells[0];
    e.rows = parse_u64_cell(r.cells[1], "manifest.tsv", r.line_no);
    e.hash = r.cells[2];
    e.status = r.cells[3];
    out.push_back(std::move(e));
  }
  return out;
}

bool verify_manifest(const std::string& out_dir, std::string* first_error) {
  auto entries = read_manifest(out_dir);
  for (const auto& e : entries) {
    std::string path = join(out_dir, e.path);
    if (!fs::exists(path)) {
      if (first_error) *first_error = e.path + ": missing";
      return false;
    }
    std::string hash = to_hex(hash_file(path));
    if (hash != e.hash) {
      if (first_error) *first_error = e.path + ": hash mismatch";
      return false;
    }
  }
  return true;
}

// --- ingest artifacts --------------------------------------------------------

void write_ingest_outputs(std::span<const Cascade> cascades,
                          const std::string& dir, ArtifactRecorder* rec,
                          const std::string& rel_prefix) {
  fs::create_directories(dir);
  {
    TsvWriter w(join(dir, "cascades.tsv"),
                {"cascade_key_hash", "root_user_id", "n_events", "n_distinct",
                 "urls"});
    for (const auto& c : cascades) {
      std::string urls;
      for (std::size_t i = 0; i < c.urls.size(); ++i) {
        if (i) urls += ';';
        urls += c.urls[i];
      }
      w.row({to_hex(c.key_hash), std::to_string(c.root_user_id),
             std::to_string(c.events.size()), std::to_string(c.n_distinct),
             urls});
    }
    w.close();
    if (rec) rec->add(rel_prefix + "cascades.tsv", w.rows_written());
  }
  {
    TsvWriter w(join(dir, "events.tsv"),
                {"cascade_key_hash", "user_id", "created_at"});
    for (const auto& c : cascades)
      for (const auto& ev : c.events)
        w.row({to_hex(c.key_hash), std::to_string(ev.retweeter_id),
               std::to_string(ev.created_at)});
    w.close();
    if (rec) rec->add(rel_prefix + "events.tsv", w.rows_written());
  }
  {
    TsvWriter w(join(dir, "roots.tsv"),
                {"cascade_key_hash", "root_user_id", "root_known", "root_ts"});
    for (const auto& c : cascades)
      w.row({to_hex(c.key_hash), std::to_string(c.root_user_id),
             c.root_post_ts ? "1" : "0",
             std::to_string(c.root_post_ts ? *c.root_post_ts : 0)});
    w.close();
    if (rec) rec->add(rel_prefix + "roots.tsv", w.rows_written());
  }
}

std::vector<Cascade> load_cascades(const std::string& dir) {
  std::string cpath = join(dir, "cascades.tsv");
  auto crows = read_tsv(
      cpath, {"cascade_key_hash", "root_user_id", "n_events", "n_distinct",
              "urls"});
  std::vector<Cascade> cascades;
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (const auto& r : crows) {
    if (r.cells.size() != 5) throw DataError(cpath + ": malformed row");
    Cascade c;
    c.key_hash = parse_hex_cell(r.cells[0], cpath, r.line_no);
    c.root_user_id = parse_u64_cell(r.cells[1], cpath, r.line_no);
    c.n_distinct = parse_u64_cell(r.cells[3], cpath, r.line_no);
    const std::string& urls = r.cells[4];
    std::size_t start = 0;
    while (start <= urls.size() && !urls.empty()) {
      std::size_t semi = urls.find(';', start);
      if (semi == std::string::npos) {
        c.urls.push_back(urls.substr(start));
        break;
      }
      c.urls.push_back(urls.substr(start, semi - start));
      start = semi + 1;
    }
    index.emplace(c.key_hash, cascades.size());
    cascades.push_back(std::move(c));
  }

  std::string rpath = join(dir, "roots.tsv");
  for (const auto& r : read_tsv(
           rpath, {"cascade_key_hash", "root_user_id", "root_known", "root_ts"})) {
    if (r.cells.size() != 4) throw DataError(rpath + ": malformed row");
    std::uint64_t key = parse_hex_cell(r.cells[0], rpath, r.line_no);
    auto it = index.find(key);
    if (it == index.end())
      throw DataError(rpath + ": unknown cascade key " + r.cells[0]);
    if (r.cells[2] == "1")
      cascades[it->second].root_post_ts =
          parse_i64_cell(r.cells[3], rpath, r.line_no);
  }

  std::string epath = join(dir, "events.tsv");
  for (const auto& r :
       read_tsv(epath, {"cascade_key_hash", "user_id", "created_at"})) {
    if (r.cells.size() != 3) throw DataError(epath + ": malformed row");
    std::uint64_t key = parse_hex_cell(r.cells[0], epath, r.line_no);
    auto it = index.find(key);
    if (it == index.end())
      throw DataError(epath + ": unknown cascade key " + r.cells[0]);
    cascades[it->second].events.push_back(
        CascadeEvent{parse_u64_cell(r.cells[1], epath, r.line_no),
                     parse_i64_cell(r.cells[2], epath, r.line_no)});
  }
  return cascades;
}

// --- graph artifacts ---------------------------------------------------------

void write_graph_outputs(const InteractionGraph& ig, const FollowerGraph& fg,
                         const std::string& dir, ArtifactRecorder* rec,
                         const std::string& rel_prefix) {
  fs::create_directories(dir);
  {
    TsvWriter w(join(dir, "nodes.tsv"), {"user_id", "group"});
    for (std::size_t i = 0; i < ig.nodes.size(); ++i)
      w.row({std::to_string(ig.nodes.id_of(static_cast<NodeIndex>(i))),
             group_name(ig.nodes.group_of(static_cast<NodeIndex>(i)))});
    w.close();
    if (rec) rec->add(rel_prefix + "nodes.tsv", w.rows_written());
  }
  {
    TsvWriter w(join(dir, "interaction.edges"),
                {"src", "dst", "type", "unix_ts"});
    for (const auto& e : ig.edges)
      w.row({std::to_string(ig.nodes.id_of(e.src)),
             std::to_string(ig.nodes.id_of(e.dst)), action_name(e.type),
             std::to_string(e.ts)});
    w.close();
    if (rec) rec->add(rel_prefix + "interaction.edges", w.rows_written());
  }
  {
    TsvWriter w(join(dir, "follower.edges"), {"src", "dst", "unix_ts"});
    for (std::size_t i = 0; i < fg.nodes.size(); ++i) {
      auto targets = fg.follows(static_cast<NodeIndex>(i));
      auto stamps = fg.follow_ts(static_cast<NodeIndex>(i));
      for (std::size_t k = 0; k < targets.size(); ++k)
        w.row({std::to_string(fg.nodes.id_of(static_cast<NodeIndex>(i))),
               std::to_string(fg.nodes.id_of(targets[k])),
               std::to_string(stamps[k])});
    }
    w.close();
    if (rec) rec->add(rel_prefix + "follower.edges", w.rows_written());
  }
  write_follower_bin(fg, join(dir, "follower.bin"));
  if (rec) rec->add(rel_prefix + "follower.bin", fg.edge_count());
}

GraphArtifacts load_graph(const std::string& dir) {
  std::string npath = join(dir, "nodes.tsv");
  std::vector<UserId> ids;
  std::vector<Group> groups;
  for (const auto& r : read_tsv(npath, {"user_id", "group"})) {
    if (r.cells.size() != 2) throw DataError(npath + ": malformed row");
    ids.push_back(parse_u64_cell(r.cells[0], npath, r.line_no));
    groups.push_back(parse_group_cell(r.cells[1], npath, r.line_no));
  }

  GraphArtifacts art;
  for (std::size_t i = 0; i < ids.size(); ++i)
    art.ig.nodes.intern(ids[i], groups[i]);

  std::string epath = join(dir, "interaction.edges");
  for (const auto& r :
       read_tsv(epath, {"src", "dst", "type", "unix_ts"})) {
    if (r.cells.size() != 4) throw DataError(epath + ": malformed row");
    auto src = art.ig.nodes.find(parse_u64_cell(r.cells[0], epath, r.line_no));
    auto dst = art.ig.nodes.find(parse_u64_cell(r.cells[1], epath, r.line_no));
    if (!src || !dst)
      throw DataError(epath + ": edge endpoint missing from nodes.tsv");
    ActionType type;
    if (r.cells[2] == "reply")
      type = ActionType::Reply;
    else if (r.cells[2] == "mention")
      type = ActionType::Mention;
    else if (r.cells[2] == "retweet")
      type = ActionType::Retweet;
    else
      throw DataError(epath + ": bad action '" + r.cells[2] + "'");
    art.ig.edges.push_back(InteractionEdge{
        *src, *dst, type, parse_i64_cell(r.cells[3], epath, r.line_no)});
  }

  art.fg = read_follower_bin(join(dir, "follower.bin"), ids, groups);
  return art;
}

TrollRegistry registry_from_nodes(const NodeTable& nodes) {
  TrollRegistry reg;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes.group_of(static_cast<NodeIndex>(i)) == Group::Troll)
      reg.insert(nodes.id_of(static_cast<NodeIndex>(i)));
  return reg;
}

// --- stats -------------------------------------------------------------------

void write_stats_outputs(const InteractionGraph& ig, const FollowerGraph& fg,
                         const std::string& dir, ArtifactRecorder* rec,
                         const std::string& rel_prefix) {
  fs::create_directories(dir);

  write_ccdf(degree_ccdf(ig, Direction::In, Group::Troll),
             join(dir, "ccdf_in_troll.tsv"), rec, rel_prefix + "ccdf_in_troll.tsv");
  write_ccdf(degree_ccdf(ig, Direction::In, Group::Regular),
             join(dir, "ccdf_in_regular.tsv"), rec,
             rel_prefix + "ccdf_in_regular.tsv");
  write_ccdf(degree_ccdf(ig, Direction::Out, Group::Troll),
             join(dir, "ccdf_out_troll.tsv"), rec,
             rel_prefix + "ccdf_out_troll.tsv");
  write_ccdf(degree_ccdf(ig, Direction::Out, Group::Regular),
             join(dir, "ccdf_out_regular.tsv"), rec,
             rel_prefix + "ccdf_out_regular.tsv");

  Components comps = connected_components(fg);
  {
    TsvWriter w(join(dir, "components.tsv"), {"component_id", "size"});
    for (std::size_t c = 0; c < comps.sizes.size(); ++c)
      w.row({std::to_string(c), std::to_string(comps.sizes[c])});
    w.close();
    if (rec) rec->add(rel_prefix + "components.tsv", w.rows_written());
  }

  ComponentSubgraph sub = largest_component_subgraph(fg, comps);
  std::vector<std::uint32_t> core = kcore_decomposition(sub.graph);
  {
    std::vector<std::pair<UserId, std::uint32_t>> rows;
    rows.reserve(core.size());
    for (std::size_t i = 0; i < core.size(); ++i)
      rows.emplace_back(fg.nodes.id_of(sub.global_index[i]), core[i]);
    std::sort(rows.begin(), rows.end());
    TsvWriter w(join(dir, "coreness.tsv"), {"user_id", "coreness"});
    for (const auto& [user, c] : rows)
      w.row({std::to_string(user), std::to_string(c)});
    w.close();
    if (rec) rec->add(rel_prefix + "coreness.tsv", w.rows_written());
  }
  {
    TsvWriter w(join(dir, "averages.tsv"), {"metric", "regular", "troll"});
    auto emit = [&](const std::string& name, const GroupAverages& a) {
      w.row({name, na_or(a.regular), na_or(a.troll)});
    };
    emit("interaction_in_degree",
         group_averages(ig, DegreeMetric::InDegree));
    emit("interaction_out_degree",
         group_averages(ig, DegreeMetric::OutDegree));
    emit("follower_in_degree", group_averages(fg, DegreeMetric::InDegree));
    emit("follower_out_degree", group_averages(fg, DegreeMetric::OutDegree));
    {
      std::vector<double> vals(core.size());
      std::vector<Group> groups(core.size());
      for (std::size_t i = 0; i < core.size(); ++i) {
        vals[i] = static_cast<double>(core[i]);
        groups[i] = fg.nodes.group_of(sub.global_index[i]);
      }
      emit("coreness", group_averages(vals, groups));
    }
    w.close();
    if (rec) rec->add(rel_prefix + "averages.tsv", w.rows_written());
  }
}

// --- per-cascade computations --------------------------------------------------

std::vector<FlowGraph> compute_flow_graphs(std::span<const Cascade> cascades,
                                           const FollowerGraph& fg,
                                           unsigned threads) {
  std::vector<FlowGraph> flows(cascades.size());
  parallel_for(cascades.size(), threads,
               [&](std::size_t i) { flows[i] = build_flow_graph(cascades[i], fg); });
  return flows;
}

std::vector<CascadeTree> compute_trees(std::span<const FlowGraph> flows,
                                       unsigned threads) {
  std::vector<CascadeTree> trees(flows.size());
  parallel_for(flows.size(), threads,
               [&](std::size_t i) { trees[i] = build_cascade_tree(flows[i]); });
  return trees;
}

std::vector<CascadeScores> compute_cascade_scores(
    std::span<const FlowGraph> flows, unsigned threads) {
  std::vector<CascadeScores> scores(flows.size());
  parallel_for(flows.size(), threads,
               [&](std::size_t i) { scores[i] = per_cascade_shapley(flows[i]); });
  return scores;
}

// --- cascade artifacts ---------------------------------------------------------

void write_cascade_outputs(std::span<const Cascade> cascades,
                           std::span<const CascadeTree> trees,
                           const TrollRegistry& registry,
                           const std::string& dir, ArtifactRecorder* rec,
                           const std::string& rel_prefix) {
  fs::create_directories(dir);
  {
    TsvWriter w(join(dir, "trees.tsv"),
                {"cascade_key_hash", "child_user_id", "parent_user_id"});
    for (const auto& t : trees) {
      for (NodeIndex v = 1; v < t.node_count(); ++v)
        w.row({to_hex(t.cascade_key_hash), std::to_string(t.nodes[v].user),
               std::to_string(t.nodes[t.parent[v]].user)});
    }
    w.close();
    if (rec) rec->add(rel_prefix + "trees.tsv", w.rows_written());
  }
  {
    auto rows = virality_vs_size(trees, registry);
    TsvWriter w(join(dir, "virality.tsv"),
                {"cascade_key_hash", "n_nodes", "virality", "root_group"});
    for (const auto& r : rows)
      w.row({to_hex(r.key_hash), std::to_string(r.n_nodes),
             format_double(r.virality), group_name(r.root_group)});
    w.close();
    if (rec) rec->add(rel_prefix + "virality.tsv", w.rows_written());
  }
  {
    auto totals = global_influence(trees);
    TsvWriter w(join(dir, "influence.tsv"),
                {"user_id", "influence_degree", "group"});
    for (const auto& [user, total] : totals)
      w.row({std::to_string(user), std::to_string(total),
             group_name(registry.group_of(user))});
    w.close();
    if (rec) rec->add(rel_prefix + "influence.tsv", w.rows_written());
  }
  {
    CascadeStats stats = cascade_stats(cascades, registry);
    TsvWriter w(join(dir, "cascade_sizes.tsv"),
                {"cascade_key_hash", "root_user_id", "n_distinct", "n_retweets",
                 "root_group"});
    for (const auto& r : stats.rows)
      w.row({to_hex(r.key_hash), std::to_string(r.root_user_id),
             std::to_string(r.n_distinct), std::to_string(r.n_retweets),
             group_name(r.root_group)});
    w.close();
    if (rec) rec->add(rel_prefix + "cascade_sizes.tsv", w.rows_written());

    write_ccdf(stats.retweeters_ccdf[0], join(dir, "ccdf_retweeters_regular.tsv"),
               rec, rel_prefix + "ccdf_retweeters_regular.tsv");
    write_ccdf(stats.retweeters_ccdf[1], join(dir, "ccdf_retweeters_troll.tsv"),
               rec, rel_prefix + "ccdf_retweeters_troll.tsv");
    write_ccdf(stats.retweets_ccdf[0], join(dir, "ccdf_retweets_regular.tsv"),
               rec, rel_prefix + "ccdf_retweets_regular.tsv");
    write_ccdf(stats.retweets_ccdf[1], join(dir, "ccdf_retweets_troll.tsv"),
               rec, rel_prefix + "ccdf_retweets_troll.tsv");
  }
}

// --- shapley artifacts ----------------------------------------------------------

void write_shapley_outputs(std::span<const Cascade> cascades,
                           std::span<const CascadeScores> scores,
                           const TrollRegistry& registry,
                           const std::unordered_set<std::uint64_t>* filter_keys,
                           const std::string& dir, ArtifactRecorder* rec,
                           const std::string& rel_prefix) {
  static_cast<void>(cascades);
  fs::create_directories(dir);
  auto global = global_shapley(scores, filter_keys);
  auto ranking = rank_scores(global, registry);
  {
    TsvWriter w(join(dir, "ranking.tsv"),
                {"rank", "user_id", "shapley", "group"});
    for (const auto& e : ranking)
      w.row({std::to_string(e.rank), std::to_string(e.user),
             format_double(e.score), group_name(e.group)});
    w.close();
    if (rec) rec->add(rel_prefix + "ranking.tsv", w.rows_written());
  }
  {
    auto trolls = troll_ranks(ranking);
    TsvWriter w(join(dir, "troll_ranks.tsv"), {"rank", "user_id", "shapley"});
    for (const auto& e : trolls)
      w.row({std::to_string(e.rank), std::to_string(e.user),
             format_double(e.score)});
    w.close();
    if (rec) rec->add(rel_prefix + "troll_ranks.tsv", w.rows_written());
  }
  {
    std::vector<double> score_vals(ranking.size()), rank_vals(ranking.size());
    std::vector<Group> groups(ranking.size());
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      score_vals[i] = ranking[i].score;
      rank_vals[i] = static_cast<double>(ranking[i].rank);
      groups[i] = ranking[i].group;
    }
    TsvWriter w(join(dir, "averages.tsv"), {"metric", "regular", "troll"});
    auto sv = group_averages(score_vals, groups);
    auto rv = group_averages(rank_vals, groups);
    w.row({"shapley_value", na_or(sv.regular), na_or(sv.troll)});
    w.row({"rank_by_shapley", na_or(rv.regular), na_or(rv.troll)});
    w.close();
    if (rec) rec->add(rel_prefix + "averages.tsv", w.rows_written());
  }
}

std::vector<RankedEntry> load_ranking(const std::string& path) {
  std::vector<RankedEntry> out;
  for (const auto& r :
       read_tsv(path, {"rank", "user_id", "shapley", "group"})) {
    if (r.cells.size() != 4) throw DataError(path + ": malformed row");
    RankedEntry e;
    e.rank = static_cast<std::uint32_t>(
        parse_u64_cell(r.cells[0], path, r.line_no));
    e.user = parse_u64_cell(r.cells[1], path, r.line_no);
    e.score = parse_double_cell(r.cells[2], path, r.line_no);
    e.group = parse_group_cell(r.cells[3], path, r.line_no);
    out.push_back(e);
  }
  return out;
}

void write_audit_outputs(const AuditReport& report, const std::string& dir) {
  fs::create_directories(dir);
  {
    TsvWriter w(join(dir, "audit_report.tsv"),
                {"rank", "user_id", "group", "state", "cap_english",
                 "cap_universal", "bot"});
    for (const auto& row : report.rows) {
      std::string eng = row.score ? format_double(row.score->cap_english) : "NA";
      std::string uni = row.score ? format_double(row.score->cap_universal) : "NA";
      w.row({std::to_string(row.rank), std::to_string(row.user),
             group_name(row.group), account_state_name(row.state), eng, uni,
             row.bot ? "1" : "0"});
    }
    w.close();
  }
  {
    TsvWriter w(join(dir, "audit_summary.tsv"),
                {"k", "active", "suspended", "deleted", "unknown", "bots",
                 "fraction_suspended", "fraction_deleted", "fraction_bots"});
    w.row({std::to_string(report.k), std::to_string(report.active),
           std::to_string(report.suspended), std::to_string(report.deleted),
           std::to_string(report.unknown), std::to_string(report.bots),
           format_double(report.fraction_suspended),
           format_double(report.fraction_deleted),
           format_double(report.fraction_bots)});
    w.close();
  }
}

// --- full pipeline ---------------------------------------------------------------

void run_pipeline(const PipelineConfig& cfg) {
  if (cfg.min_retweeters < 1)
    throw ConfigError("min-retweeters must be at least 1");
  if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
  if (cfg.out_dir.empty()) throw ConfigError("output directory required");
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + cfg.out_dir);

  ArtifactRecorder rec(cfg.out_dir);
  auto run_stage = [&](const char* name, const std::string& rel_dir,
                       auto&& body) {
    log_info(std::string("stage ") + name);
    try {
      body();
    } catch (const std::exception& e) {
      rec.mark_unrecorded_stale(rel_dir);
      rec.write_manifest();
      throw StageError(name, e.what());
    }
  };

  std::vector<TweetRecord> records;
  TrollRegistry registry;
  std::vector<Cascade> cascades;
  InteractionGraph ig;
  FollowerGraph fg;
  std::vector<FlowGraph> flows;
  std::vector<CascadeTree> trees;
  std::vector<CascadeScores> scores;
  std::vector<RankedEntry> ranking;

  run_stage("ingest", "ingest", [&] {
    registry = load_troll_registry(cfg.trolls_path);
    ParseStats stats;
    records = parse_corpus_file(cfg.input_path, &stats);
    log_info("parsed " + std::to_string(records.size()) + " records, skipped " +
             std::to_string(stats.skipped));
    cascades = group_cascades(records, cfg.min_retweeters);
    write_ingest_outputs(cascades, join(cfg.out_dir, "ingest"), &rec, "ingest/");
  });

  run_stage("graph", "graph", [&] {
    ig = build_interaction_graph(records, registry);
    fg = collapse_to_follower_graph(ig);
    write_graph_outputs(ig, fg, join(cfg.out_dir, "graph"), &rec, "graph/");
  });

  run_stage("stats", "stats", [&] {
    write_stats_outputs(ig, fg, join(cfg.out_dir, "stats"), &rec, "stats/");
  });

  run_stage("cascade", "cascade", [&] {
    flows = compute_flow_graphs(cascades, fg, cfg.threads);
    trees = compute_trees(flows, cfg.threads);
    write_cascade_outputs(cascades, trees, registry,
                          join(cfg.out_dir, "cascade"), &rec, "cascade/");
  });

  run_stage("shapley", "shapley", [&] {
    scores = compute_cascade_scores(flows, cfg.threads);
    write_shapley_outputs(cascades, scores, registry, nullptr,
                          join(cfg.out_dir, "shapley"), &rec, "shapley/");
    ranking = rank_scores(global_shapley(scores), registry);
    if (cfg.url_filter == UrlFilterMode::TrollUrls) {
      UrlFilter filter = build_troll_url_filter(cascades, registry);
      auto keys = matching_cascade_keys(cascades, filter);
      write_shapley_outputs(cascades, scores, registry, &keys,
                            join(cfg.out_dir, "shapley_urls_troll"), &rec,
                            "shapley_urls_troll/");
    }
  });

  run_stage("report", "report", [&] {
    fs::create_directories(join(cfg.out_dir, "report"));
    TsvWriter w(join(cfg.out_dir, "report/averages.tsv"),
                {"metric", "regular", "troll"});
    auto emit = [&](const std::string& name, const GroupAverages& a) {
      w.row({name, na_or(a.regular), na_or(a.troll)});
    };
    emit("interaction_in_degree", group_averages(ig, DegreeMetric::InDegree));
    emit("interaction_out_degree", group_averages(ig, DegreeMetric::OutDegree));
    emit("follower_in_degree", group_averages(fg, DegreeMetric::InDegree));
    emit("follower_out_degree", group_averages(fg, DegreeMetric::OutDegree));
    {
      Components comps = connected_components(fg);
      ComponentSubgraph sub = largest_component_subgraph(fg, comps);
      auto core = kcore_decomposition(sub.graph);
      std::vector<double> vals(core.size());
      std::vector<Group> groups(core.size());
      for (std::size_t i = 0; i < core.size(); ++i) {
        vals[i] = static_cast<double>(core[i]);
        groups[i] = fg.nodes.group_of(sub.global_index[i]);
      }
      emit("coreness", group_averages(vals, groups));
    }
    {
      std::vector<double> svals(ranking.size()), rvals(ranking.size());
      std::vector<Group> groups(ranking.size());
      for (std::size_t i = 0; i < ranking.size(); ++i) {
        svals[i] = ranking[i].score;
        rvals[i] = static_cast<double>(ranking[i].rank);
        groups[i] = ranking[i].group;
      }
      emit("shapley_value", group_averages(svals, groups));
      emit("rank_by_shapley", group_averages(rvals, groups));
    }
    {
      auto influence = global_influence(trees);
      std::vector<double> vals(influence.size());
      std::vector<Group> groups(influence.size());
      for (std::size_t i = 0; i < influence.size(); ++i) {
        vals[i] = static_cast<double>(influence[i].second);
        groups[i] = registry.group_of(influence[i].first);
      }
      emit("influence_degree", group_averages(vals, groups));
    }
    w.close();
    rec.add("report/averages.tsv", w.rows_written());
  });

  rec.write_manifest();
  log_info("pipeline complete: " + cfg.out_dir);
}

}  // namespace casflow
