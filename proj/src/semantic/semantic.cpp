#include "debate/semantic/semantic.hpp"

#include <algorithm>
#include <cmath>

#include "debate/core/errors.hpp"
#include "debate/util/text.hpp"

namespace debate::semantic {

void validate_threshold(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw PreconditionError("similarity threshold must be in (0, 1]");
}

double cosine_similarity(const provider::EmbeddingVector& a, const provider::EmbeddingVector& b) {
  if (a.model_tag != b.model_tag) {
    throw PreconditionError("cannot compare embeddings from '" + a.model_tag + "' and '" + b.model_tag + "'");
  }
  if (a.dimension() != b.dimension()) throw PreconditionError("embedding dimensions differ");
  if (a.values.empty()) throw PreconditionError("empty embedding");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) throw PreconditionError("cosine of an all-zero embedding");
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::max(-1.0, std::min(1.0, c));
}

double EmbeddingMatcher::similarity(std::string_view a, std::string_view b) {
  return cosine_similarity(embedder_.embed(a), embedder_.embed(b));
}

std::optional<FlowMatch> find_similar_node(const DebateFlowTree& tree, std::string_view target, double theta,
                                           ClaimMatcher& matcher, const FlowFilter& filter) {
  validate_threshold(theta);
  std::optional<FlowMatch> best;
  tree.for_each([&](const FlowNode& n, int) {
    if (filter && !filter(n)) return;
    const double s = matcher.similarity(target, n.claim.text);
    if (s >= theta && (!best || s > best->similarity)) best = FlowMatch{n.id, s};
  });
  return best;
}

std::optional<RehearsalMatch> find_similar_node(const RehearsalTree& tree, std::string_view target, double theta,
                                                ClaimMatcher& matcher, const RehearsalFilter& filter) {
  validate_threshold(theta);
  std::optional<RehearsalMatch> best;
  for_each_node(tree.root, [&](const RehearsalNode& n) {
    if (filter && !filter(n)) return;
    const double s = matcher.similarity(target, n.claim_text());
    if (s >= theta && (!best || s > best->similarity)) best = RehearsalMatch{&n, s};
  });
  return best;
}

namespace {

std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\r') {
      out += "\\r";
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i >= s.size()) throw ParseError("tree string: dangling escape");
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw ParseError("tree string: unknown escape");
    }
  }
  return out;
}

void collect(const FlowNode& n, int depth, std::vector<TreeLine>& out) {
  out.push_back({depth, n.side, n.status, n.visits, n.claim.text});
  for (const auto& c : n.children) collect(c, depth + 1, out);
}

}  // namespace

std::vector<TreeLine> tree_lines(const DebateFlowTree& tree) {
  std::vector<TreeLine> out;
  collect(tree.root(), 0, out);
  return out;
}

std::string flow_tree_to_string(const DebateFlowTree& tree) {
  std::string out;
  for (const auto& l : tree_lines(tree)) {
    out.append(static_cast<std::size_t>(2 * l.depth), ' ');
    out += "[" + std::string(to_string(l.side)) + "][" + std::string(to_string(l.status)) + "][" +
           std::to_string(l.visits) + "] " + escape(l.claim) + "\n";
  }
  return out;
}

std::string debate_to_string(const DebateFlowTree& pro, const DebateFlowTree& con) {
  return flow_tree_to_string(pro) + flow_tree_to_string(con);
}

std::vector<TreeLine> parse_tree_string(std::string_view text) {
  std::vector<TreeLine> out;
  std::size_t line_no = 0;
  for (const auto& line : text::split_lines(text)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fail = [&](const std::string& why) {
      return ParseError("tree string line " + std::to_string(line_no) + ": " + why);
    };
    std::size_t spaces = 0;
    while (spaces < line.size() && line[spaces] == ' ') ++spaces;
    if (spaces % 2 != 0) throw fail("odd indentation");
    TreeLine tl;
    tl.depth = static_cast<int>(spaces / 2);
    std::size_t pos = spaces;
    std::string fields[3];
    for (auto& f : fields) {
      if (pos >= line.size() || line[pos] != '[') throw fail("expected '['");
      const auto close = line.find(']', pos);
      if (close == std::string::npos) throw fail("unterminated field");
      f = line.substr(pos + 1, close - pos - 1);
      pos = close + 1;
    }
    if (pos >= line.size() || line[pos] != ' ') throw fail("expected a space before the claim");
    tl.side = parse_stance(fields[0]);
    tl.status = parse_node_status(fields[1]);
    try {
      std::size_t used = 0;
      tl.visits = std::stoi(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("visits");
    } catch (const std::exception&) {
      throw fail("bad visit count");
    }
    tl.claim = unescape(std::string_view(line).substr(pos + 1));
    out.push_back(std::move(tl));
  }
  return out;
}

}  // namespace debate::semantic
