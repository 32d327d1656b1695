#include "debate/prompts/prompts.hpp"

#include "json.hpp"

#include "debate/core/errors.hpp"
#include "debate/util/text.hpp"

namespace debate::prompts {

namespace detail {
const std::map<std::string, std::string>& prompt_assets();
}

const std::string& get(std::string_view name) {
  const auto& assets = detail::prompt_assets();
  const auto it = assets.find(std::string(name));
  if (it == assets.end()) throw DebateError("unknown prompt template '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : detail::prompt_assets()) out.push_back(k);
  return out;
}

std::string render(std::string_view text, const Slots& slots) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      const auto close = text.find('}', i + 1);
      if (close != std::string_view::npos) {
        const auto it = slots.find(std::string(text.substr(i + 1, close - i - 1)));
        if (it != slots.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return out;
}

std::string render_named(std::string_view name, const Slots& slots) { return render(get(name), slots); }

std::string fenced(std::string_view body) {
  std::string out = "\n```\n";
  out += body;
  if (out.back() != '\n') out += '\n';
  out += "```\n";
  return out;
}

std::string extract_statement(std::string_view reply, std::string* plan) {
  static const std::string_view markers[] = {"**Statement**:", "**Statement:**", "Statement:"};
  for (const auto m : markers) {
    const auto pos = reply.rfind(m);
    if (pos == std::string_view::npos) continue;
    if (plan) *plan = std::string(text::trim(reply.substr(0, pos)));
    return std::string(text::trim(reply.substr(pos + m.size())));
  }
  if (plan) plan->clear();
  return std::string(text::trim(reply));
}

std::string extract_json_object(std::string_view reply) {
  for (std::size_t start = reply.find('{'); start != std::string_view::npos; start = reply.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t j = start; j < reply.size(); ++j) {
      const char c = reply[j];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        const auto candidate = std::string(reply.substr(start, j - start + 1));
        if (nlohmann::json::accept(candidate)) return candidate;
        break;
      }
    }
  }
  throw ParseError("no JSON object found in reply");
}

}  // namespace debate::prompts
