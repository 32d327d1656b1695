#include <csignal>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "debate/core/serialize.hpp"
#include "debate/core/validate.hpp"
#include "debate/corpus/corpus.hpp"
#include "debate/flow/flow.hpp"
#include "debate/orchestrator/persistence.hpp"
#include "debate/provider/config.hpp"
#include "debate/rehearsal/outline.hpp"
#include "debate/rehearsal/rehearsal.hpp"
#include "debate/scoring/impact.hpp"
#include "debate/semantic/semantic.hpp"
#include "debate/server/http_server.hpp"
#include "debate/util/text.hpp"

namespace fs = std::filesystem;
using namespace debate;

namespace {

struct ProviderFlags {
  std::string config;
  std::string record;
  std::string replay;
  std::string scorer = "prompt";
  std::string score_table;
  std::string pipeline;
  std::int64_t seed = 0;
};

void add_provider_flags(CLI::App* app, ProviderFlags& f) {
  app->add_option("--config", f.config, "provider config JSON");
  app->add_option("--pipeline", f.pipeline, "pipeline config JSON");
  auto* rec = app->add_option("--record", f.record, "append every provider reply to this recording");
  auto* rep = app->add_option("--replay", f.replay, "serve replies from this recording only");
  rec->excludes(rep);
  app->add_option("--scorer", f.scorer, "impact scorer: prompt, stub or table")
      ->check(CLI::IsMember({"prompt", "stub", "table"}));
  app->add_option("--score-table", f.score_table, "TSV score table for --scorer table");
  app->add_option("--seed", f.seed, "request seed");
}

// Providers plus the collaborators built on top of them.
struct Stack {
  std::unique_ptr<provider::ProviderBundle> bundle;
  std::unique_ptr<rehearsal::ChatArgumentGenerator> generator;
  std::unique_ptr<scoring::ImpactScorer> scorer;
  std::unique_ptr<flow::ChatActionExtractor> extractor;
  std::unique_ptr<semantic::EmbeddingMatcher> matcher;
  orchestrator::StagePipelineConfig pipeline;

  orchestrator::Collaborators collaborators() {
    return {bundle->chat(), *generator, *scorer, *extractor, *matcher, bundle->duration(), &bundle->embedder(),
            nullptr, {}};
  }
};

Stack make_stack(const ProviderFlags& f) {
  Stack s;
  auto config = f.config.empty() ? provider::ProviderConfig{} : provider::ProviderConfig::load(f.config);
  provider::apply_env_overrides(config);
  provider::BundleOptions opts;
  if (!f.replay.empty()) {
    opts.mode = provider::RecordMode::Replay;
    opts.recording = f.replay;
  } else if (!f.record.empty()) {
    opts.mode = provider::RecordMode::Record;
    opts.recording = f.record;
  }
  s.bundle = std::make_unique<provider::ProviderBundle>(config, opts);
  if (!f.pipeline.empty()) {
    s.pipeline = orchestrator::StagePipelineConfig::from_json(doc::parse_json(orchestrator::read_file(f.pipeline)));
  }
  if (f.seed != 0) s.pipeline.seed = f.seed;
  s.generator = std::make_unique<rehearsal::ChatArgumentGenerator>(s.bundle->chat(), s.pipeline.seed);
  if (f.scorer == "stub") {
    s.scorer = std::make_unique<scoring::StubImpactScorer>(static_cast<std::uint64_t>(s.pipeline.seed));
  } else if (f.scorer == "table") {
    if (f.score_table.empty()) throw CLI::ValidationError("--scorer table needs --score-table");
    s.scorer = std::make_unique<scoring::TableImpactScorer>(scoring::TableImpactScorer::load(f.score_table));
  } else {
    s.scorer = std::make_unique<scoring::PromptImpactScorer>(s.bundle->chat());
  }
  s.extractor = std::make_unique<flow::ChatActionExtractor>(s.bundle->chat(), s.pipeline.seed);
  s.matcher = std::make_unique<semantic::EmbeddingMatcher>(s.bundle->embedder());
  return s;
}

void write_call_log(const fs::path& dir, provider::ProviderBundle& bundle) {
  if (dir.empty()) return;
  orchestrator::write_file_atomic(dir / "calls.jsonl", bundle.log().to_jsonl());
}

void print_summary(const orchestrator::RunResult& r, const fs::path& dir) {
  for (const auto& rec : r.records) {
    std::cout << orchestrator::slot_name(rec.turn, rec.side, rec.stage) << "  words=" << rec.statement.word_count
              << "  format_valid=" << rec.validity.format_valid << "  time_valid=" << rec.validity.time_valid
              << "  fit=" << timing::to_string(rec.fit.outcome) << "/" << rec.fit.iterations.size() << "\n";
  }
  if (!dir.empty()) std::cout << "artifacts in " << dir.string() << "\n";
}

// Records every query the inner scorer answers, for building a score table.
class TableRecorder : public scoring::ImpactScorer {
 public:
  explicit TableRecorder(scoring::ImpactScorer& inner) : inner_(inner) {}
  double score(const scoring::ImpactQuery& q) override {
    const double v = scoring::score_impact(q, inner_);
    table.add(q, v);
    return v;
  }
  std::string tag() const override { return inner_.tag(); }

  scoring::TableImpactScorer table;

 private:
  scoring::ImpactScorer& inner_;
};

int cmd_run(const std::string& motion, const std::string& out, bool paired, const std::string& corpus_path,
            const ProviderFlags& f) {
  auto stack = make_stack(f);
  std::optional<corpus::CorpusIndex> index;
  auto collab = stack.collaborators();
  if (!corpus_path.empty()) {
    index = corpus::CorpusIndex::load(corpus_path);
    collab.corpus = &*index;
  }
  collab.events = [](const std::string& phase, Stance side, Stage stage) {
    std::cerr << "[" << to_string(side) << " " << to_string(stage) << "] " << phase << "\n";
  };
  orchestrator::DebateEngine engine(stack.pipeline, collab);
  orchestrator::RunOptions options;
  options.out_dir = out;
  if (!out.empty()) {
    fs::create_directories(out);
    orchestrator::write_file_atomic(fs::path(out) / "pipeline.json", doc::dump(stack.pipeline.to_json()));
  }
  const auto m = make_motion(motion);
  if (paired) {
    const auto r = orchestrator::run_paired(m, engine, options);
    print_summary(r.original, out.empty() ? fs::path() : fs::path(out) / "original");
    print_summary(r.swapped, out.empty() ? fs::path() : fs::path(out) / "swapped");
  } else {
    const auto r = orchestrator::run_debate(m, engine, options);
    print_summary(r, out);
    if (out.empty()) std::cout << orchestrator::render_transcript(r.state);
  }
  write_call_log(out, *stack.bundle);
  return 0;
}

int cmd_rehearse(const std::string& motion, const std::string& side_text, int claims, const std::string& out,
                 const ProviderFlags& f) {
  auto stack = make_stack(f);
  const auto side = parse_stance(side_text);
  const auto m = make_motion(motion);
  const int n = claims > 0 ? claims : stack.pipeline.main_claims;
  int i = 0;
  for (const auto& arg : rehearsal::propose_main_claims(m, side, n, *stack.generator)) {
    const auto tree = rehearsal::build_rehearsal_tree(arg, m, side, stack.pipeline.rehearsal, *stack.generator,
                                                      *stack.scorer);
    std::cout << rehearsal::render_outline(tree) << "\n";
    if (!out.empty()) {
      orchestrator::write_file_atomic(fs::path(out) / ("tree_" + std::to_string(i) + ".json"), doc::serialize(tree));
    }
    ++i;
  }
  return 0;
}

int cmd_score_table(const std::string& motion, const std::string& out, const ProviderFlags& f) {
  auto stack = make_stack(f);
  TableRecorder recorder(*stack.scorer);
  const auto m = make_motion(motion);
  for (const Stance side : {Stance::Pro, Stance::Con}) {
    for (const auto& arg : rehearsal::propose_main_claims(m, side, stack.pipeline.main_claims, *stack.generator)) {
      rehearsal::build_rehearsal_tree(arg, m, side, stack.pipeline.rehearsal, *stack.generator, recorder);
    }
  }
  const auto tsv = "# impact scores for: " + motion + "\n" + recorder.table.to_tsv();
  if (out.empty()) {
    std::cout << tsv;
  } else {
    orchestrator::write_file_atomic(out, tsv);
  }
  std::cerr << recorder.table.size() << " rows\n";
  return 0;
}

int cmd_ingest(const std::string& dir, const std::string& out, bool dry_run, const ProviderFlags& f) {
  auto stack = make_stack(f);
  corpus::IngestReport report;
  const auto index = corpus::ingest_directory(dir, *stack.extractor, *stack.matcher, stack.bundle->embedder(), report,
                                              {stack.pipeline.theta});
  for (const auto& id : report.ingested) std::cout << "ingested " << id << "\n";
  for (const auto& [id, why] : report.skipped) std::cout << "skipped " << id << ": " << why << "\n";
  if (!dry_run) {
    if (out.empty()) throw CLI::ValidationError("--out is required unless --dry-run");
    index.save(out);
    std::cout << "wrote " << index.size() << " entries to " << out << "\n";
  }
  return report.skipped.empty() ? 0 : 2;
}

int cmd_validate(const std::string& file, const std::string& side, const std::string& stage, double limit,
                 double wpm) {
  const auto body = orchestrator::read_file(file);
  const auto trimmed = text::trim(body);
  if (!trimmed.empty() && trimmed.front() == '{') {
    // A document: check tree invariants.
    const auto j = doc::parse_json(body);
    const auto kind = doc::require(j, "kind").get<std::string>();
    std::vector<Violation> violations;
    if (kind == "flow_tree") {
      violations = validate_flow_tree(doc::parse_flow_tree(body));
    } else if (kind == "rehearsal_tree") {
      violations = validate_rehearsal_tree(doc::parse_rehearsal_tree(body));
    } else if (kind == "debate_state") {
      const auto st = doc::parse_debate_state(body);
      for (const auto* t : {&st.pro_view.own, &st.pro_view.opponent, &st.con_view.own, &st.con_view.opponent}) {
        const auto v = validate_flow_tree(*t);
        violations.insert(violations.end(), v.begin(), v.end());
      }
    } else {
      throw ParseError("cannot validate documents of kind '" + kind + "'");
    }
    for (const auto& v : violations) std::cout << v.code << " (node " << v.node_id << "): " << v.detail << "\n";
    std::cout << (violations.empty() ? "valid\n" : "invalid\n");
    return violations.empty() ? 0 : 1;
  }
  auto statement = make_statement(parse_stance(side), parse_stage(stage), std::string(trimmed));
  timing::RateEstimator estimator(wpm);
  const auto report = orchestrator::validate_statement(statement, limit > 0 ? limit : default_time_limit(statement.stage),
                                                       estimator);
  nlohmann::json j{{"format_valid", report.format_valid}, {"time_valid", report.time_valid}, {"reasons", report.reasons}};
  std::cout << j.dump(2) << "\n";
  return report.valid() ? 0 : 1;
}

int cmd_render(const std::string& file) {
  const auto body = orchestrator::read_file(file);
  const auto kind = doc::require(doc::parse_json(body), "kind").get<std::string>();
  if (kind == "flow_tree") {
    std::cout << semantic::flow_tree_to_string(doc::parse_flow_tree(body));
  } else if (kind == "rehearsal_tree") {
    std::cout << rehearsal::render_outline(doc::parse_rehearsal_tree(body));
  } else if (kind == "debate_state") {
    const auto st = doc::parse_debate_state(body);
    std::cout << semantic::debate_to_string(st.pro_view.own, st.con_view.own);
  } else {
    throw ParseError("cannot render documents of kind '" + kind + "'");
  }
  return 0;
}

server::HttpServer* g_server = nullptr;

int cmd_serve(const std::string& host, int port, const std::string& sessions, const std::string& corpus_path,
              const ProviderFlags& f) {
  auto stack = make_stack(f);
  std::optional<corpus::CorpusIndex> index;
  auto collab = stack.collaborators();
  if (!corpus_path.empty()) {
    index = corpus::CorpusIndex::load(corpus_path);
    collab.corpus = &*index;
  }
  server::SessionManager manager(stack.pipeline, collab, sessions);
  server::HttpServer http(manager);
  const int bound = http.bind(host, port);
  std::cout << "listening on " << host << ":" << bound << std::endl;
  g_server = &http;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  http.serve();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Debate engine: rehearsal and flow trees, timed speeches, simulated audience"};
  app.require_subcommand(1);

  ProviderFlags pf;
  std::string motion, out, corpus_path, side = "pro", stage = "opening", file, dir, host = "127.0.0.1", sessions;
  bool paired = false, dry_run = false;
  int claims = 0, port = 8080;
  double limit = 0, wpm = timing::kDefaultWordsPerMinute;

  auto* run = app.add_subcommand("run", "run a full Oxford debate, engine against engine");
  run->add_option("--motion", motion, "motion text")->required();
  run->add_option("--out", out, "run directory (resumed if it holds a state.json)");
  run->add_flag("--paired", paired, "also run with the debater assignment swapped");
  run->add_option("--corpus", corpus_path, "human debate corpus index for audience retrieval");
  add_provider_flags(run, pf);

  auto* reh = app.add_subcommand("rehearse", "build and print rehearsal trees for one side");
  reh->add_option("--motion", motion, "motion text")->required();
  reh->add_option("--side", side, "pro or con");
  reh->add_option("--claims", claims, "number of candidate main claims");
  reh->add_option("--out", out, "directory for tree documents");
  add_provider_flags(reh, pf);

  auto* ing = app.add_subcommand("ingest", "build a corpus index from transcripts");
  ing->add_option("--dir", dir, "directory of transcripts")->required();
  ing->add_option("--out", out, "index file");
  ing->add_flag("--dry-run", dry_run, "parse and extract without writing");
  add_provider_flags(ing, pf);

  auto* val = app.add_subcommand("validate", "check a statement or a tree/state document");
  val->add_option("file", file, "statement text or JSON document")->required();
  val->add_option("--side", side, "speaker side for statements");
  val->add_option("--stage", stage, "stage for statements");
  val->add_option("--limit", limit, "time limit in seconds (default: stage limit)");
  val->add_option("--wpm", wpm, "speaking rate");

  auto* ren = app.add_subcommand("render-tree", "print a tree document as text");
  ren->add_option("file", file, "flow tree, rehearsal tree or debate state document")->required();

  auto* srv = app.add_subcommand("serve", "serve interactive sessions over HTTP");
  srv->add_option("--host", host, "bind address");
  srv->add_option("--port", port, "port (0 picks a free one)");
  srv->add_option("--sessions", sessions, "directory for session persistence");
  srv->add_option("--corpus", corpus_path, "human debate corpus index");
  add_provider_flags(srv, pf);

  auto* tab = app.add_subcommand("score-table", "score every rehearsal query for a motion into a TSV table");
  tab->add_option("--motion", motion, "motion text")->required();
  tab->add_option("--out", out, "TSV output (stdout if omitted)");
  add_provider_flags(tab, pf);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(motion, out, paired, corpus_path, pf);
    if (*reh) return cmd_rehearse(motion, side, claims, out, pf);
    if (*ing) return cmd_ingest(dir, out, dry_run, pf);
    if (*val) return cmd_validate(file, side, stage, limit, wpm);
    if (*ren) return cmd_render(file);
    if (*srv) return cmd_serve(host, port, sessions, corpus_path, pf);
    if (*tab) return cmd_score_table(motion, out, pf);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
