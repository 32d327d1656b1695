#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "debate/flow/flow.hpp"
#include "debate/orchestrator/orchestrator.hpp"
#include "debate/provider/config.hpp"
#include "debate/rehearsal/rehearsal.hpp"
#include "debate/scoring/impact.hpp"
#include "debate/semantic/semantic.hpp"

namespace debate::testing {

/// Provider bundle plus the chat-backed collaborators, wired the way the CLI
/// wires them. The environment is never consulted.
struct ProviderStack {
  std::unique_ptr<provider::ProviderBundle> bundle;
  std::unique_ptr<rehearsal::ChatArgumentGenerator> generator;
  std::unique_ptr<scoring::PromptImpactScorer> scorer;
  std::unique_ptr<flow::ChatActionExtractor> extractor;
  std::unique_ptr<semantic::EmbeddingMatcher> matcher;

  orchestrator::Collaborators collaborators();
};

std::unique_ptr<ProviderStack> make_stack(const provider::ProviderConfig& config,
                                          provider::RecordMode mode = provider::RecordMode::Off,
                                          const std::filesystem::path& recording = {}, std::int64_t seed = 0);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

/// Relative path -> content for every regular file below `dir`.
std::map<std::string, std::string> snapshot(const std::filesystem::path& dir);

}  // namespace debate::testing
