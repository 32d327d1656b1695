#include "debate/corpus/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <fstream>
#include <set>
#include <sstream>

#include "debate/core/serialize.hpp"
#include "debate/core/validate.hpp"
#include "debate/util/text.hpp"

namespace debate::corpus {

namespace {

std::optional<Stance> side_word(const std::string& w) {
  static const std::set<std::string> pro = {"pro", "proposition", "for", "affirmative", "government"};
  static const std::set<std::string> con = {"con", "opposition", "against", "negative"};
  if (pro.count(w)) return Stance::Pro;
  if (con.count(w)) return Stance::Con;
  return std::nullopt;
}

std::optional<Stage> stage_word(const std::string& w) {
  if (w == "opening" || w == "constructive") return Stage::Opening;
  if (w == "rebuttal" || w == "rebuttals") return Stage::Rebuttal;
  if (w == "closing" || w == "summary") return Stage::Closing;
  return std::nullopt;
}

std::vector<std::string> lower_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::optional<ScheduleSlot> heading_slot(std::string_view line) {
  std::optional<Stance> side;
  std::optional<Stage> stage;
  for (const auto& w : lower_tokens(line)) {
    if (auto s = side_word(w)) {
      if (side && *side != *s) return std::nullopt;
      side = s;
    }
    if (auto g = stage_word(w)) {
      if (stage && *stage != *g) return std::nullopt;
      stage = g;
    }
  }
  if (!side || !stage) return std::nullopt;
  return ScheduleSlot{*side, *stage};
}

std::optional<std::string> motion_line(std::string_view line) {
  auto v = text::trim(line);
  while (!v.empty() && v.front() == '#') v.remove_prefix(1);
  v = text::trim(v);
  if (!text::starts_with_icase(v, "motion:")) return std::nullopt;
  return std::string(text::trim(v.substr(7)));
}

}  // namespace

RawTranscript parse_transcript(std::string_view text, std::string id) {
  RawTranscript out;
  out.id = std::move(id);
  std::optional<std::string> motion;
  std::map<std::size_t, std::string> bodies;  // schedule index -> text
  std::optional<std::size_t> current;
  const auto& schedule = oxford_schedule();

  for (const auto& line : text::split_lines(text)) {
    if (!motion) {
      if (auto m = motion_line(line)) {
        motion = *m;
        continue;
      }
    }
    const auto trimmed = text::trim(line);
    if (!trimmed.empty() && trimmed.front() == '#') {
      if (const auto slot = heading_slot(trimmed)) {
        const auto it = std::find(schedule.begin(), schedule.end(), *slot);
        const auto idx = static_cast<std::size_t>(it - schedule.begin());
        if (bodies.count(idx)) {
          throw SegmentationError("transcript " + out.id + " repeats the " + std::string(to_string(slot->side)) +
                                  " " + std::string(to_string(slot->stage)) + " segment");
        }
        bodies[idx] = "";
        current = idx;
        continue;
      }
    }
    if (current) {
      auto& body = bodies[*current];
      if (!body.empty()) body += '\n';
      body += line;
    }
  }
  if (!motion || motion->empty()) throw SegmentationError("transcript " + out.id + " has no Motion: line");
  out.motion = make_motion(*motion);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto it = bodies.find(i);
    const auto body = it == bodies.end() ? std::string_view() : text::trim(it->second);
    if (body.empty()) {
      throw SegmentationError("transcript " + out.id + " is missing the " + std::string(to_string(schedule[i].side)) +
                              " " + std::string(to_string(schedule[i].stage)) + " statement");
    }
    out.statements.push_back(make_statement(schedule[i].side, schedule[i].stage, std::string(body)));
  }
  return out;
}

CorpusEntry ingest_debate(const RawTranscript& transcript, flow::ActionExtractor& extractor,
                          semantic::ClaimMatcher& matcher, provider::Embedder& embedder,
                          const IngestOptions& options) {
  if (transcript.statements.size() != oxford_schedule().size()) {
    throw SegmentationError("transcript " + transcript.id + " does not have six statements");
  }
  FlowView view(Stance::Pro);
  for (std::size_t turn = 0; turn < transcript.statements.size(); ++turn) {
    const auto& st = transcript.statements[turn];
    const auto tuples = flow::extract_action_tuples(st, view, extractor);
    flow::apply_statement(view, tuples, st.side, options.theta, matcher,
                          TurnStamp{st.stage, static_cast<int>(turn)});
  }
  for (const auto* tree : {&view.own, &view.opponent}) {
    const auto violations = validate_flow_tree(*tree);
    if (!violations.empty()) {
      throw DebateError("ingested tree for " + transcript.id + " is invalid: " + violations.front().code);
    }
  }
  CorpusEntry e;
  e.id = transcript.id;
  e.motion = transcript.motion.text;
  e.statements = transcript.statements;
  e.pro_tree = view.own;
  e.con_tree = view.opponent;
  e.tree_string = semantic::debate_to_string(e.pro_tree, e.con_tree);
  e.embedding = embedder.embed(e.tree_string);
  return e;
}

CorpusIndex::CorpusIndex(std::string model_tag, std::size_t dimension)
    : model_tag_(std::move(model_tag)), dimension_(dimension) {
  if (dimension_ == 0) throw PreconditionError("index dimension must be positive");
}

void CorpusIndex::add(CorpusEntry entry) {
  if (entry.embedding.model_tag != model_tag_) {
    throw PreconditionError("entry " + entry.id + " was embedded by '" + entry.embedding.model_tag +
                            "', index uses '" + model_tag_ + "'");
  }
  if (entry.embedding.dimension() != dimension_) {
    throw PreconditionError("entry " + entry.id + " has dimension " + std::to_string(entry.embedding.dimension()) +
                            ", index expects " + std::to_string(dimension_));
  }
  for (const auto& e : entries_) {
    if (e.id == entry.id) throw PreconditionError("duplicate corpus id " + entry.id);
  }
  entries_.push_back(std::move(entry));
}

std::string CorpusIndex::to_document() const {
  doc::Json entries = doc::Json::array();
  for (const auto& e : entries_) {
    doc::Json statements = doc::Json::array();
    for (const auto& s : e.statements) statements.push_back(doc::to_json(s));
    entries.push_back(doc::Json{{"id", e.id},
                                {"motion", e.motion},
                                {"statements", std::move(statements)},
                                {"pro_tree", doc::to_json(e.pro_tree)},
                                {"con_tree", doc::to_json(e.con_tree)},
                                {"tree_string", e.tree_string},
                                {"embedding", e.embedding.values}});
  }
  return doc::dump(doc::wrap("corpus_index", doc::Json{{"model_tag", model_tag_},
                                                        {"dimension", dimension_},
                                                        {"entries", std::move(entries)}}));
}

CorpusIndex CorpusIndex::from_document(std::string_view text) {
  const auto document = doc::parse_json(text);
  const auto value = doc::unwrap(document, "corpus_index");
  try {
    CorpusIndex index(value.at("model_tag").get<std::string>(), value.at("dimension").get<std::size_t>());
    for (const auto& j : value.at("entries")) {
      CorpusEntry e;
      e.id = j.at("id").get<std::string>();
      e.motion = j.at("motion").get<std::string>();
      for (const auto& s : j.at("statements")) e.statements.push_back(doc::statement_from_json(s));
      e.pro_tree = doc::flow_tree_from_json(j.at("pro_tree"));
      e.con_tree = doc::flow_tree_from_json(j.at("con_tree"));
      e.tree_string = j.at("tree_string").get<std::string>();
      e.embedding = {j.at("embedding").get<std::vector<double>>(), index.model_tag_};
      if (semantic::debate_to_string(e.pro_tree, e.con_tree) != e.tree_string) {
        throw ParseError("entry " + e.id + " tree string does not match its trees");
      }
      index.add(std::move(e));
    }
    return index;
  } catch (const doc::Json::exception& e) {
    throw ParseError(std::string("corpus index: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("corpus index: ") + e.what());
  }
}

void CorpusIndex::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DebateError("cannot write " + tmp);
    out << to_document();
  }
  std::filesystem::rename(tmp, path);
}

CorpusIndex CorpusIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open corpus index " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_document(buf.str());
}

CorpusIndex build_index(std::vector<CorpusEntry> entries, const std::string& model_tag, std::size_t dimension) {
  CorpusIndex index(model_tag, dimension);
  for (auto& e : entries) {
    for (const auto* tree : {&e.pro_tree, &e.con_tree}) {
      if (!validate_flow_tree(*tree).empty()) throw PreconditionError("entry " + e.id + " has an invalid tree");
    }
    index.add(std::move(e));
  }
  return index;
}

CorpusIndex ingest_directory(const std::filesystem::path& dir, flow::ActionExtractor& extractor,
                             semantic::ClaimMatcher& matcher, provider::Embedder& embedder, IngestReport& report,
                             const IngestOptions& options) {
  std::vector<std::filesystem::path> files;
  for (const auto& de : std::filesystem::directory_iterator(dir)) {
    const auto ext = de.path().extension();
    if (de.is_regular_file() && (ext == ".txt" || ext == ".md")) files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  CorpusIndex index(embedder.model_tag(), embedder.dimension());
  for (const auto& f : files) {
    const auto id = f.stem().string();
    try {
      std::ifstream in(f, std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      index.add(ingest_debate(parse_transcript(buf.str(), id), extractor, matcher, embedder, options));
      report.ingested.push_back(id);
    } catch (const std::exception& e) {
      report.skipped.emplace_back(id, e.what());
    }
  }
  return index;
}

std::optional<RetrievalHit> retrieve_human_tree(std::string_view tree_string, const CorpusIndex& index, double theta,
                                                provider::Embedder& embedder) {
  semantic::validate_threshold(theta);
  if (index.size() == 0) return std::nullopt;
  if (embedder.model_tag() != index.model_tag()) {
    throw PreconditionError("embedder '" + embedder.model_tag() + "' cannot query an index built with '" +
                            index.model_tag() + "'");
  }
  const auto q = embedder.embed(tree_string);
  std::optional<RetrievalHit> best;
  for (const auto& e : index.entries()) {
    const double s = semantic::cosine_similarity(q, e.embedding);
    if (!best || s > best->similarity) best = RetrievalHit{&e, s};
  }
  if (best->similarity < theta) return std::nullopt;
  return best;
}

std::optional<RetrievalHit> retrieve_human_tree(const DebateFlowTree& pro, const DebateFlowTree& con,
                                                const CorpusIndex& index, double theta, provider::Embedder& embedder) {
  return retrieve_human_tree(semantic::debate_to_string(pro, con), index, theta, embedder);
}

std::vector<MotionOverlap> motion_overlap(const CorpusIndex& index, const Motion& motion, double min_jaccard) {
  const auto words = [](std::string_view s) {
    const auto t = lower_tokens(s);
    return std::set<std::string>(t.begin(), t.end());
  };
  const auto target = words(motion.text);
  std::vector<MotionOverlap> out;
  for (const auto& e : index.entries()) {
    const auto other = words(e.motion);
    std::size_t inter = 0;
    for (const auto& w : other) inter += target.count(w);
    const std::size_t uni = target.size() + other.size() - inter;
    const double j = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
    if (j >= min_jaccard) out.push_back({e.id, e.motion, j});
  }
  return out;
}

}  // namespace debate::corpus
