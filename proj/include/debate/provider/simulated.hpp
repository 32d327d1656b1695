#pragma once

#include <string>

#include "debate/provider/chat.hpp"

namespace debate::provider {

/// Offline stand-in for a chat model. Recognises each shipped prompt
/// template by its header and answers in the format that template asks for.
/// Replies are a pure function of the prompt text.
///
/// Statements it writes use fixed sentence shapes, which its extractor reads
/// back:
///   Our claim is that X; our reasoning is that A.
///   Our opponents claim that T; we attack this point: C; our reasoning is that A.
///   Our opponents attacked with the point that T; we rebut this: C; our reasoning is that A.
///   We reinforce our claim that T; further support: A.
/// Statements are padded with neutral sentences to exactly the requested
/// word count.
class SimulatedChatProvider : public ChatProvider {
 public:
  ChatReply complete(const ChatRequest& request) override;
  std::string tag() const override { return "simulated-v1"; }
};

}  // namespace debate::provider
