// Project headers first: <resolv.h> (pulled in by httplib) defines a `_res`
// macro that breaks Eigen's headers.
#include "handover/base64.hpp"
#include "handover/intent.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <regex>

namespace handover {

using nlohmann::json;

void EndpointConfig::apply_env() {
  if (const char* url = std::getenv("HANDOVER_ENDPOINT"); url && *url) base_url = url;
  if (const char* tok = std::getenv("HANDOVER_API_TOKEN"); tok && *tok) token = tok;
}

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing slash
};

ParsedUrl split_url(const std::string& url) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) {
    fail(ErrorCode::kTransportError, "endpoint URL must look like http://host[:port][/path]");
  }
  std::string path = m[2].matched ? m[2].str() : "";
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {m[1].str(), path};
}

std::string image_data_url(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot read image '" + path + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  std::string mime = "image/png";
  if (path.ends_with(".jpg") || path.ends_with(".jpeg")) mime = "image/jpeg";
  return "data:" + mime + ";base64," + base64_encode(bytes);
}

std::string extract_content(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
    const json& content = doc.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
    std::string text;
    for (const auto& part : content) {
      if (part.value("type", "") == "text") text += part.at("text").get<std::string>();
    }
    return text;
  } catch (const json::exception& e) {
    fail(ErrorCode::kMalformedResponse, std::string("unexpected endpoint response: ") + e.what());
  }
}

}  // namespace

std::string chat_request_body(const EndpointConfig& endpoint, const Prompt& prompt,
                              const std::optional<std::string>& image_path) {
  json user_content;
  if (image_path) {
    user_content = json::array({
        {{"type", "text"}, {"text", prompt.user}},
        {{"type", "image_url"}, {"image_url", {{"url", image_data_url(*image_path)}}}},
    });
  } else {
    user_content = prompt.user;
  }
  json body = {
      {"model", endpoint.model},
      {"temperature", 0},
      {"messages",
       json::array({{{"role", "system"}, {"content", prompt.system}},
                    {{"role", "user"}, {"content", user_content}}})},
  };
  return body.dump();
}

std::string llm_infer(const EndpointConfig& endpoint, const Prompt& prompt,
                      const std::optional<std::string>& image_path) {
  const ParsedUrl url = split_url(endpoint.base_url);
  const std::string path = (url.path.empty() ? std::string("/v1") : url.path) + "/chat/completions";
  const std::string body = chat_request_body(endpoint, prompt, image_path);

  httplib::Client client(url.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  if (!endpoint.token.empty()) client.set_bearer_token_auth(endpoint.token);

  const int attempts = 1 + std::max(0, endpoint.retries);
  ErrorCode last_code = ErrorCode::kTransportError;
  std::string last_message;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const auto start = std::chrono::steady_clock::now();
    auto res = client.Post(path, body, "application/json");
    const auto elapsed = std::chrono::steady_clock::now() - start;
    if (!res) {
      const httplib::Error err = res.error();
      const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                             ((err == httplib::Error::Read || err == httplib::Error::Write) &&
                              elapsed >= endpoint.timeout * 9 / 10);
      last_code = timed_out ? ErrorCode::kTimeout : ErrorCode::kTransportError;
      last_message = "request to " + url.origin + path + " failed: " + httplib::to_string(err);
      continue;
    }
    if (res->status >= 200 && res->status < 300) return extract_content(res->body);
    last_code = ErrorCode::kNonSuccessStatus;
    last_message = "endpoint returned HTTP " + std::to_string(res->status);
    if (res->status < 500) break;
  }
  fail(last_code, last_message);
}

}  // namespace handover
