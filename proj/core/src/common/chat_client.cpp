#include "subgoal/common/chat_client.hpp"

#include <cstdlib>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "subgoal/common/errors.hpp"

namespace subgoal {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("endpoint url '" + url + "' has no scheme");
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

std::string chat_request_body(const std::string& model, const std::vector<ChatMessage>& messages) {
  nlohmann::json body;
  body["model"] = model;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  body["temperature"] = 0;
  return body.dump();
}

std::string chat_response_content(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("response is not JSON: ") + e.what(), e.byte, body);
  }
  if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
    throw ParseError("response has no choices[0]", 0, body);
  }
  const auto& choice = j["choices"][0];
  if (!choice.contains("message") || !choice["message"].contains("content") ||
      !choice["message"]["content"].is_string()) {
    throw ParseError("response has no choices[0].message.content", 0, body);
  }
  return choice["message"]["content"].get<std::string>();
}

struct ChatClient::Impl {
  explicit Impl(int slots) : in_flight(slots) {}
  std::counting_semaphore<1024> in_flight;
};

ChatClient::ChatClient(ChatEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  if (endpoint_.url.empty()) throw ConfigError("remote endpoint requires a url");
  if (endpoint_.model.empty()) throw ConfigError("remote endpoint requires a model name");
  if (endpoint_.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
  if (endpoint_.max_in_flight < 1 || endpoint_.max_in_flight > 1024) {
    throw ConfigError("max_in_flight must be in [1, 1024]");
  }
  split_url(endpoint_.url);
  impl_ = std::make_unique<Impl>(endpoint_.max_in_flight);
}

ChatClient::~ChatClient() = default;

std::string ChatClient::complete(const std::vector<ChatMessage>& messages) {
  const auto [origin, path] = split_url(endpoint_.url);
  const std::string body = chat_request_body(endpoint_.model, messages);
  httplib::Headers headers;
  if (const char* token = std::getenv(endpoint_.token_env.c_str()); token && *token) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  auto backoff = endpoint_.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= endpoint_.max_attempts; ++attempt) {
    {
      impl_->in_flight.acquire();
      struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
      } release{impl_->in_flight};

      httplib::Client client(origin);
      auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
      client.set_connection_timeout(secs);
      client.set_read_timeout(secs);
      auto res = client.Post(path, headers, body, "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
      } else if (res->status >= 500 || res->status == 429) {
        last_error = "HTTP " + std::to_string(res->status);
      } else if (res->status != 200) {
        // Client errors will not improve on retry.
        throw TransportError("endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body,
                             attempt);
      } else {
        return chat_response_content(res->body);
      }
    }
    if (attempt < endpoint_.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw TransportError("request to " + endpoint_.url + " failed after " +
                           std::to_string(endpoint_.max_attempts) + " attempt(s): " + last_error,
                       endpoint_.max_attempts);
}

}  // namespace subgoal
