#include "debate/scoring/impact.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "debate/prompts/prompts.hpp"
#include "debate/util/hash.hpp"
#include "debate/util/text.hpp"

namespace debate::scoring {

void ImpactDistribution::validate() const {
  double sum = 0.0;
  for (const auto& [c, p] : probs) {
    if (!(p >= 0.0)) throw PreconditionError("impact probabilities must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw PreconditionError("impact probabilities must sum to 1");
}

ImpactDistribution ImpactDistribution::point_mass(ImpactClass c) {
  ImpactDistribution d;
  d.probs = {{ImpactClass::NotImpactful, 0.0}, {ImpactClass::MediumImpactful, 0.0}, {ImpactClass::Impactful, 0.0}};
  d.probs[c] = 1.0;
  return d;
}

double weighted_score(const ImpactDistribution& dist) {
  dist.validate();
  double s = 0.0;
  for (const auto& [c, p] : dist.probs) s += static_cast<int>(c) * p;
  return std::clamp(s, 0.0, 2.0);
}

std::string_view to_string(Relation r) { return r == Relation::Support ? "support" : "attack"; }

Relation parse_relation(std::string_view s) {
  if (s == "support") return Relation::Support;
  if (s == "attack") return Relation::Attack;
  throw ParseError("unknown relation: " + std::string(s));
}

std::string canonical_query(const ImpactQuery& q) {
  nlohmann::json j{{"context", q.context}, {"parent", q.parent}, {"child", q.child}, {"relation", to_string(q.relation)}};
  return j.dump();
}

std::string query_key(const ImpactQuery& q) { return sha256_hex(canonical_query(q)); }

std::string stance_proposition(const Motion& motion, Stance stance) {
  return "We " + std::string(act_verb(stance)) + " the motion: " + motion.text;
}

double score_impact(const ImpactQuery& query, ImpactScorer& scorer) {
  if (query.parent.empty() || query.child.empty()) {
    throw ScoringError("impact query needs nonempty parent and child", query);
  }
  double s = 0.0;
  try {
    s = scorer.score(query);
  } catch (const ScoringError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScoringError(std::string("scorer ") + scorer.tag() + " failed: " + e.what(), query);
  }
  if (!std::isfinite(s)) throw ScoringError("scorer returned a non-finite score", query);
  return std::clamp(s, 0.0, 2.0);
}

double StubImpactScorer::score(const ImpactQuery& query) {
  const auto digest = sha256(std::to_string(seed_) + '\x1f' + canonical_query(query));
  double w[3];
  for (int i = 0; i < 3; ++i) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v = (v << 8) | digest[i * 4 + b];
    w[i] = 1.0 + static_cast<double>(v) / 4294967296.0;
  }
  const double total = w[0] + w[1] + w[2];
  ImpactDistribution d;
  d.probs = {{ImpactClass::NotImpactful, w[0] / total},
             {ImpactClass::MediumImpactful, w[1] / total},
             {ImpactClass::Impactful, 1.0 - w[0] / total - w[1] / total}};
  return weighted_score(d);
}

TableImpactScorer TableImpactScorer::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open score table " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

TableImpactScorer TableImpactScorer::parse(std::string_view tsv) {
  TableImpactScorer t;
  std::size_t line_no = 0;
  for (const auto& raw : text::split_lines(tsv)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        cols.emplace_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (cols.size() != 3 || cols[0].size() != 64) {
      throw ParseError("score table line " + std::to_string(line_no) + ": expected key, relation, score");
    }
    double score = 0.0;
    try {
      std::size_t used = 0;
      score = std::stod(cols[2], &used);
      if (used != cols[2].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError("score table line " + std::to_string(line_no) + ": bad score '" + cols[2] + "'");
    }
    if (score < 0.0 || score > 2.0) {
      throw ParseError("score table line " + std::to_string(line_no) + ": score outside [0, 2]");
    }
    t.rows_[cols[0]] = {parse_relation(cols[1]), score};
  }
  return t;
}

void TableImpactScorer::add(const ImpactQuery& query, double score) { rows_[query_key(query)] = {query.relation, score}; }

double TableImpactScorer::score(const ImpactQuery& query) {
  const auto it = rows_.find(query_key(query));
  if (it == rows_.end()) throw ScoringError("no score-table row for query", query);
  if (it->second.relation != query.relation) throw ScoringError("score-table row has a different relation", query);
  return it->second.score;
}

std::string TableImpactScorer::to_tsv() const {
  std::map<std::string, Row> sorted(rows_.begin(), rows_.end());
  std::ostringstream out;
  for (const auto& [key, row] : sorted) {
    char num[32];
    const auto res = std::to_chars(num, num + sizeof num, row.score);
    out << key << '\t' << to_string(row.relation) << '\t' << std::string_view(num, res.ptr - num) << '\n';
  }
  return out.str();
}

std::string PromptImpactScorer::render_prompt(const ImpactQuery& query) {
  std::string context;
  if (query.context.empty()) {
    context = "(none)";
  } else {
    for (std::size_t i = 0; i < query.context.size(); ++i) {
      if (i) context += " ";
      context += "[" + query.context[i] + "]";
    }
  }
  return prompts::render_named("impact_scorer", {{"context", context},
                                                 {"parent", query.parent},
                                                 {"child", query.child},
                                                 {"relation", std::string(to_string(query.relation))}});
}

ImpactDistribution PromptImpactScorer::parse_reply(const provider::ChatReply& reply) {
  if (reply.first_token_probs) {
    double mass[3] = {0.0, 0.0, 0.0};
    for (const auto& [token, p] : *reply.first_token_probs) {
      const auto t = text::trim(token);
      if (t.size() == 1 && t[0] >= '0' && t[0] <= '2') mass[t[0] - '0'] += p;
    }
    const double total = mass[0] + mass[1] + mass[2];
    if (total > 0.0) {
      ImpactDistribution d;
      d.probs = {{ImpactClass::NotImpactful, mass[0] / total},
                 {ImpactClass::MediumImpactful, mass[1] / total},
                 {ImpactClass::Impactful, 1.0 - mass[0] / total - mass[1] / total}};
      return d;
    }
  }
  const auto t = text::trim(reply.text);
  if (t.empty() || t[0] < '0' || t[0] > '2' || (t.size() > 1 && std::isdigit(static_cast<unsigned char>(t[1])))) {
    throw ParseError("impact reply is not one of 0, 1, 2: '" + text::first_words(t, 8) + "'");
  }
  return ImpactDistribution::point_mass(static_cast<ImpactClass>(t[0] - '0'));
}

double PromptImpactScorer::score(const ImpactQuery& query) {
  provider::ChatRequest req;
  req.prompt = render_prompt(query);
  req.max_tokens = 1;
  req.origin = "impact-scoring";
  return weighted_score(parse_reply(chat_.complete(req)));
}

}  // namespace debate::scoring
