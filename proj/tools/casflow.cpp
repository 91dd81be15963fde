// casflow: reconstructs retweet cascades from raw tweet records and ranks
// account influence via Shapley degree centrality, structural virality,
// influence degree and graph topology measures.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casflow/audit.hpp"
#include "casflow/log.hpp"
#include "casflow/pipeline.hpp"
#include "casflow/synth.hpp"

namespace {

using namespace casflow;

struct GlobalOpts {
  unsigned threads = 1;
  std::uint64_t seed = 1;
  std::string log_level = "info";

  void apply() const {
    auto lvl = parse_log_level(log_level);
    if (!lvl) throw ConfigError("unknown log level: " + log_level);
    set_log_level(*lvl);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"retweet-cascade influence analytics toolkit"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOpts globals;
  app.add_option("--threads", globals.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", globals.seed, "RNG seed for synthetic data");
  app.add_option("--log-level", globals.log_level, "debug|info|warn|error")
      ->check(CLI::IsMember({"debug", "info", "warn", "error"}));

  int exit_code = 0;
  auto guard = [&](auto&& fn) {
    try {
      globals.apply();
      fn();
    } catch (const ConfigError& e) {
      log_error(e.what());
      exit_code = 2;
    } catch (const DataError& e) {
      log_error(e.what());
      exit_code = 3;
    } catch (const StageError& e) {
      log_error(e.what());
      exit_code = 4;
    } catch (const std::exception& e) {
      log_error(e.what());
      exit_code = 4;
    }
  };

  // ingest
  {
    auto* cmd = app.add_subcommand(
        "ingest", "parse a JSONL corpus and recover retweet cascades");
    auto input = std::make_shared<std::string>();
    auto trolls = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto min_rt = std::make_shared<std::uint64_t>(100);
    cmd->add_option("--input", *input, "JSON Lines corpus")->required();
    cmd->add_option("--trolls", *trolls, "troll registry file")->required();
    cmd->add_option("--min-retweeters", *min_rt,
                    "distinct-retweeter threshold (root excluded)");
    cmd->add_option("--out", *out, "output directory")->required();
    cmd->callback([=, &guard] {
      guard([&] {
        if (*min_rt < 1) throw ConfigError("min-retweeters must be >= 1");
        load_troll_registry(*trolls);  // validated; labels not needed here
        ParseStats stats;
        auto records = parse_corpus_file(*input, &stats);
        log_info("parsed " + std::to_string(records.size()) +
                 " records, skipped " + std::to_string(stats.skipped));
        auto cascades = group_cascades(records, *min_rt);
        write_ingest_outputs(cascades, *out);
        log_info(std::to_string(cascades.size()) + " cascades -> " + *out);
      });
    });
  }

  // graph build / graph stats
  {
    auto* graph = app.add_subcommand("graph", "interaction/follower graphs");
    graph->require_subcommand(1);

    auto* build = graph->add_subcommand("build", "build graphs from a corpus");
    auto input = std::make_shared<std::string>();
    auto trolls = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    build->add_option("--input", *input, "JSON Lines corpus")->required();
    build->add_option("--trolls", *trolls, "troll registry file")->required();
    build->add_option("--out", *out, "output directory")->required();
    build->callback([=, &guard] {
      guard([&] {
        auto registry = load_troll_registry(*trolls);
        auto records = parse_corpus_file(*input);
        auto ig = build_interaction_graph(records, registry);
        auto fg = collapse_to_follower_graph(ig);
        write_graph_outputs(ig, fg, *out);
        log_info("graph: " + std::to_string(ig.nodes.size()) + " nodes, " +
                 std::to_string(ig.edges.size()) + " interactions, " +
                 std::to_string(fg.edge_count()) + " follower edges");
      });
    });

    auto* stats = graph->add_subcommand("stats", "topology measures");
    auto gdir = std::make_shared<std::string>();
    auto sout = std::make_shared<std::string>();
    stats->add_option("--graph", *gdir, "graph directory")->required();
    stats->add_option("--out", *sout, "output directory")->required();
    stats->callback([=, &guard] {
      guard([&] {
        auto art = load_graph(*gdir);
        write_stats_outputs(art.ig, art.fg, *sout);
        log_info("stats -> " + *sout);
      });
    });
  }

  // cascade analyze
  {
    auto* cascade = app.add_subcommand("cascade", "flow graphs and trees");
    cascade->require_subcommand(1);
    auto* analyze =
        cascade->add_subcommand("analyze", "trees, virality, influence");
    auto cdir = std::make_shared<std::string>();
    auto gdir = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    analyze->add_option("--cascades", *cdir, "ingest output directory")
        ->required();
    analyze->add_option("--graph", *gdir, "graph directory")->required();
    analyze->add_option("--out", *out, "output directory")->required();
    analyze->callback([=, &guard, &globals] {
      guard([&] {
        auto cascades = load_cascades(*cdir);
        auto art = load_graph(*gdir);
        auto registry = registry_from_nodes(art.fg.nodes);
        auto flows = compute_flow_graphs(cascades, art.fg, globals.threads);
        auto trees = compute_trees(flows, globals.threads);
        write_cascade_outputs(cascades, trees, registry, *out);
        log_info(std::to_string(trees.size()) + " trees -> " + *out);
      });
    });
  }

  // shapley rank
  {
    auto* shapley = app.add_subcommand("shapley", "influence ranking");
    shapley->require_subcommand(1);
    auto* rank = shapley->add_subcommand("rank", "global Shapley ranking");
    auto cdir = std::make_shared<std::string>();
    auto gdir = std::make_shared<std::string>();
    auto trolls = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto urls_filter = std::make_shared<std::string>();
    rank->add_option("--cascades", *cdir, "ingest output directory")
        ->required();
    rank->add_option("--graph", *gdir, "graph directory")->required();
    rank->add_option("--trolls", *trolls, "troll registry file")->required();
    rank->add_option("--urls-filter", *urls_filter,
                     "restrict to cascades carrying troll URLs")
        ->check(CLI::IsMember({"troll"}));
    rank->add_option("--out", *out, "output directory")->required();
    rank->callback([=, &guard, &globals] {
      guard([&] {
        auto cascades = load_cascades(*cdir);
        auto art = load_graph(*gdir);
        auto registry = load_troll_registry(*trolls);
        auto flows = compute_flow_graphs(cascades, art.fg, globals.threads);
        auto scores = compute_cascade_scores(flows, globals.threads);
        if (urls_filter->empty()) {
          write_shapley_outputs(cascades, scores, registry, nullptr, *out);
        } else {
          auto filter = build_troll_url_filter(cascades, registry);
          auto keys = matching_cascade_keys(cascades, filter);
          write_shapley_outputs(cascades, scores, registry, &keys, *out);
        }
        log_info("ranking -> " + *out);
      });
    });
  }

  // audit
  {
    auto* cmd = app.add_subcommand(
        "audit", "account status and bot-score audit of top-ranked users");
    auto ranking_path = std::make_shared<std::string>();
    auto top = std::make_shared<std::uint64_t>(100);
    auto status_ep = std::make_shared<std::string>();
    auto bot_ep = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto cache = std::make_shared<std::string>();
    auto threshold = std::make_shared<double>(0.5);
    auto retries = std::make_shared<int>(3);
    auto retry_delay = std::make_shared<int>(200);
    cmd->add_option("--ranking", *ranking_path, "ranking.tsv")->required();
    cmd->add_option("--top", *top, "audit the top K entries")->required();
    cmd->add_option("--status-endpoint", *status_ep, "account status URL")
        ->required();
    cmd->add_option("--bot-endpoint", *bot_ep, "bot score URL")->required();
    cmd->add_option("--out", *out, "output directory")->required();
    cmd->add_option("--cache", *cache,
                    "status cache journal (default OUT/status_cache.tsv)");
    cmd->add_option("--bot-threshold", *threshold, "CAP bot threshold");
    cmd->add_option("--retries", *retries, "max attempts per request");
    cmd->add_option("--retry-delay-ms", *retry_delay, "initial backoff delay");
    cmd->callback([=, &guard] {
      guard([&] {
        auto ranking = load_ranking(*ranking_path);
        if (*top > ranking.size())
          throw ConfigError("--top exceeds ranking length");
        std::filesystem::create_directories(*out);
        AuditConfig acfg;
        acfg.status_endpoint = *status_ep;
        acfg.bot_endpoint = *bot_ep;
        acfg.cache_path =
            cache->empty() ? (std::filesystem::path(*out) / "status_cache.tsv")
                                 .string()
                           : *cache;
        acfg.retry.max_attempts = *retries;
        acfg.retry.initial_delay_ms = *retry_delay;
        acfg.bot_threshold = *threshold;
        AuditClient client(acfg);
        std::vector<UserId> ids;
        ids.reserve(*top);
        for (std::size_t i = 0; i < *top; ++i) ids.push_back(ranking[i].user);
        auto statuses = client.fetch_statuses(ids);
        auto bot_scores = client.fetch_bot_scores(ids);
        auto report =
            audit_report(ranking, *top, statuses, bot_scores, *threshold);
        write_audit_outputs(report, *out);
        log_info("audited top-" + std::to_string(*top) + ": " +
                 std::to_string(report.suspended) + " suspended, " +
                 std::to_string(report.deleted) + " deleted, " +
                 std::to_string(report.bots) + " bot-flagged");
      });
    });
  }

  // pipeline run
  {
    auto* pipeline = app.add_subcommand("pipeline", "end-to-end run");
    pipeline->require_subcommand(1);
    auto* run = pipeline->add_subcommand("run", "ingest through reports");
    auto input = std::make_shared<std::string>();
    auto trolls = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto min_rt = std::make_shared<std::uint64_t>(100);
    auto url_filter = std::make_shared<std::string>("none");
    run->add_option("--input", *input, "JSON Lines corpus")->required();
    run->add_option("--trolls", *trolls, "troll registry file")->required();
    run->add_option("--min-retweeters", *min_rt, "distinct-retweeter threshold");
    run->add_option("--url-filter", *url_filter, "none|troll-urls")
        ->check(CLI::IsMember({"none", "troll-urls"}));
    run->add_option("--out", *out, "output directory")->required();
    run->callback([=, &guard, &globals] {
      guard([&] {
        PipelineConfig cfg;
        cfg.input_path = *input;
        cfg.trolls_path = *trolls;
        cfg.min_retweeters = *min_rt;
        cfg.url_filter = *url_filter == "troll-urls" ? UrlFilterMode::TrollUrls
                                                     : UrlFilterMode::None;
        cfg.threads = globals.threads;
        cfg.out_dir = *out;
        cfg.seed = globals.seed;
        run_pipeline(cfg);
      });
    });
  }

  // synth gen
  {
    auto* synth = app.add_subcommand("synth", "synthetic corpora");
    synth->require_subcommand(1);
    auto* gen = synth->add_subcommand(
        "gen", "reproducible corpus with planted cascades and ground truth");
    auto out = std::make_shared<std::string>();
    auto plan = std::make_shared<SynthPlan>();
    gen->add_option("--users", plan->n_users, "user pool size");
    gen->add_option("--cascades", plan->n_cascades, "planted cascades");
    gen->add_option("--troll-fraction", plan->troll_fraction, "troll share");
    gen->add_option("--min-size", plan->min_size, "min distinct retweeters");
    gen->add_option("--max-size", plan->max_size, "max distinct retweeters");
    gen->add_option("--star-weight", plan->star_weight, "star shape weight");
    gen->add_option("--chain-weight", plan->chain_weight, "chain shape weight");
    gen->add_option("--tree-weight", plan->tree_weight, "tree shape weight");
    gen->add_option("--chain-cap", plan->chain_cap,
                    "cap chain cascades at this many members (0 = uncapped)");
    gen->add_option("--hub-cascades", plan->hub_cascades,
                    "star cascades rooted at one troll hub");
    gen->add_option("--hub-size", plan->hub_size, "retweeters per hub cascade");
    gen->add_option("--repeat-prob", plan->repeat_prob,
                    "probability of a repeated retweet");
    gen->add_option("--noise", plan->noise_tweets, "noise tweet count");
    gen->add_flag("--plant-duplicate-root", plan->plant_duplicate_root,
                  "author posts the identical root tweet twice");
    gen->add_option("--quotes", plan->quote_count, "quote-style retweets");
    gen->add_option("--out", *out, "output directory")->required();
    gen->callback([=, &guard, &globals] {
      guard([&] {
        plan->seed = globals.seed;
        auto corpus = gen_synthetic(*plan);
        write_synth_corpus(corpus, *out);
        log_info("synthetic corpus: " + std::to_string(corpus.jsonl.size()) +
                 " lines, " + std::to_string(corpus.planted_retweets) +
                 " planted retweets, " + std::to_string(corpus.trees.size()) +
                 " cascades -> " + *out);
      });
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return exit_code;
}
