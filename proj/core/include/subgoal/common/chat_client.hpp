#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

namespace subgoal {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

struct ChatEndpoint {
  // Full URL of a chat-completions style endpoint,
  // e.g. "https://api.example.com/v1/chat/completions".
  std::string url;
  std::string model;
  // Name of the environment variable holding the bearer token. The token
  // itself is never accepted through configuration files or flags.
  std::string token_env = "SUBGOAL_API_TOKEN";
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{250};
  std::chrono::milliseconds timeout{30000};
  int max_in_flight = 4;
};

// JSON body sent to the endpoint: {model, messages, temperature: 0}.
std::string chat_request_body(const std::string& model, const std::vector<ChatMessage>& messages);

// Extracts choices[0].message.content; throws ParseError otherwise.
std::string chat_response_content(const std::string& body);

// Blocking client shared by the remote teacher and the remote policy.
// complete() may be called from many threads; at most max_in_flight requests
// are outstanding at once. Failures are retried with exponential backoff and
// surface as TransportError carrying the number of attempts made.
class ChatClient {
 public:
  explicit ChatClient(ChatEndpoint endpoint);
  ~ChatClient();
  ChatClient(const ChatClient&) = delete;
  ChatClient& operator=(const ChatClient&) = delete;

  std::string complete(const std::vector<ChatMessage>& messages);
  const ChatEndpoint& endpoint() const noexcept { return endpoint_; }

 private:
  struct Impl;
  ChatEndpoint endpoint_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace subgoal
