#include "handover/fixtures.hpp"
#include "handover/intent.hpp"
#include "handover/synthetic_hand.hpp"
#include "helpers.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <fstream>
#include <thread>

using namespace handover;
using test::error_of;

namespace {

const ToolCatalog& catalog() {
  static const ToolCatalog c = fixtures::catalog();
  return c;
}

IntentQuery ask(const std::string& text, std::optional<Handedness> hint = Handedness::kRight) {
  IntentQuery q;
  q.text = text;
  q.handedness = hint;
  return q;
}

std::string reply_json(const std::string& content) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}
      .dump();
}

// Minimal chat-completion server on an ephemeral port.
class MockEndpoint {
 public:
  MockEndpoint() {
    server_.Post("/ok/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      last_auth_ = req.get_header_value("Authorization");
      last_body_ = req.body;
      res.set_content(reply_json("Pass the knife to right hand of human."), "application/json");
    });
    server_.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(reply_json("pass the MUG to left hand of human"), "application/json");
    });
    server_.Post("/flaky/chat/completions", [this](const httplib::Request&, httplib::Response& res) {
      if (flaky_calls_++ == 0) {
        res.status = 503;
        return;
      }
      res.set_content(reply_json("Pass the hammer to left hand of human"), "application/json");
    });
    server_.Post("/missing/chat/completions", [this](const httplib::Request&, httplib::Response& res) {
      ++missing_calls_;
      res.status = 404;
    });
    server_.Post("/slow/chat/completions", [](const httplib::Request&, httplib::Response& res) {
      std::this_thread::sleep_for(std::chrono::milliseconds(700));
      res.set_content(reply_json("Pass the knife to right hand of human"), "application/json");
    });
    server_.Post("/garbage/chat/completions", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("<html>nope</html>", "text/html");
    });
    server_.Post("/parts/chat/completions", [](const httplib::Request&, httplib::Response& res) {
      nlohmann::json parts = nlohmann::json::array(
          {{{"type", "text"}, {"text", "Pass the spoon "}}, {{"type", "text"}, {"text", "to right hand of human"}}});
      res.set_content(nlohmann::json{{"choices", {{{"message", {{"content", parts}}}}}}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockEndpoint() {
    server_.stop();
    thread_.join();
  }

  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  std::string last_auth_, last_body_;
  std::atomic<int> flaky_calls_{0}, missing_calls_{0};

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

EndpointConfig endpoint(const std::string& url) {
  EndpointConfig e;
  e.base_url = url;
  e.timeout = std::chrono::milliseconds(2000);
  return e;
}

}  // namespace

TEST_SUITE("intent") {

TEST_CASE("phrase normalization") {
  CHECK(normalize_phrase("  Game-Controller!! ") == "game controller");
  CHECK(normalize_phrase("I'd like  THE_mug") == "i'd like the mug");
  CHECK(normalize_phrase("...").empty());
}

TEST_CASE("catalog lookup and validation") {
  CHECK(catalog().size() == 16);
  CHECK(catalog().lookup("Game Controller") == "game controller");
  CHECK(catalog().lookup("spanner") == "wrench");
  CHECK_FALSE(catalog().lookup("banana").has_value());
  CHECK(error_of([] { ToolCatalog({{"mug", {}, {}}, {"MUG", {}, {}}}); }) == ErrorCode::kInvalidInput);
}

TEST_CASE("render then parse is the identity over the catalog") {
  int ok = 0;
  for (const auto& e : catalog().entries()) {
    for (Handedness h : {Handedness::kLeft, Handedness::kRight}) {
      const TaskDescription t{e.name, h};
      ok += parse_task_description(render_task_description(t), catalog()) == t;
    }
  }
  CHECK(ok == 32);
  CHECK(render_task_description({"knife", Handedness::kLeft}) == "Pass the knife to left hand of human");
}

TEST_CASE("parser tolerance and failures") {
  const TaskDescription knife{"knife", Handedness::kRight};
  CHECK(parse_task_description("  \"PASS THE Knife TO RIGHT HAND OF HUMAN.\" ", catalog()) == knife);
  CHECK(parse_task_description("Pass the knife to the right hand of the human", catalog()) == knife);
  CHECK(parse_task_description("Pass the spanner to left hand of human", catalog()) ==
        TaskDescription{"wrench", Handedness::kLeft});
  CHECK(error_of([] { parse_task_description("Give the knife to the right hand", catalog()); }) ==
        ErrorCode::kTemplateMismatch);
  CHECK(error_of([] { parse_task_description("Pass the banana to left hand of human", catalog()); }) ==
        ErrorCode::kUnknownObject);
}

TEST_CASE("rule resolver") {
  IntentQuery q;
  q.text = "I need a knife";
  q.keypoints = fixtures::observed_keypoints(Handedness::kRight);
  CHECK(resolve_intent_rules(q, catalog()) == TaskDescription{"knife", Handedness::kRight});
  q.keypoints = fixtures::observed_keypoints(Handedness::kLeft);
  CHECK(resolve_intent_rules(q, catalog()).handedness == Handedness::kLeft);

  CHECK(resolve_intent_rules(ask("I want to play games"), catalog()).object == "game controller");
  CHECK(resolve_intent_rules(ask("pass the pliers"), catalog()).object == "pincer");
  CHECK(resolve_intent_rules(ask("two forks please"), catalog()).object == "fork");
  // name beats synonym: "cup" is a mug synonym, "knife" a name
  CHECK(resolve_intent_rules(ask("a cup and a knife"), catalog()).object == "knife");
  // two names: catalog order decides
  CHECK(resolve_intent_rules(ask("the spoon or the scissors"), catalog()).object == "scissors");
  // hint overrides keypoints
  q.handedness = Handedness::kRight;
  CHECK(resolve_intent_rules(q, catalog()).handedness == Handedness::kRight);

  CHECK(error_of([] { resolve_intent_rules(ask("hmm"), catalog()); }) == ErrorCode::kNoObjectResolved);
  CHECK(error_of([] { resolve_intent_rules(ask("   "), catalog()); }) == ErrorCode::kEmptyText);
  CHECK(error_of([] { resolve_intent_rules(ask("knife", std::nullopt), catalog()); }) ==
        ErrorCode::kMissingHandedness);
}

TEST_CASE("rule resolver is deterministic") {
  for (const auto& item : fixtures::corpus()) {
    std::optional<TaskDescription> first;
    for (int rep = 0; rep < 3; ++rep) {
      try {
        const auto r = resolve_intent_rules(item.query, catalog());
        if (first) CHECK(*first == r);
        first = r;
      } catch (const Error&) {
        CHECK_FALSE(first.has_value());
      }
    }
  }
}

TEST_CASE("prompt lists each tool once and nothing else") {
  IntentQuery q = ask("I need a knife", std::nullopt);
  q.keypoints = fixtures::observed_keypoints(Handedness::kLeft);
  const Prompt p = build_prompt(q, catalog());
  CHECK(p.user.find("left hand") != std::string::npos);
  CHECK(p.user.find("I need a knife") != std::string::npos);
  std::istringstream lines(p.user);
  std::string line;
  std::vector<std::string> listed;
  while (std::getline(lines, line)) {
    if (line.rfind("- ", 0) == 0) listed.push_back(line.substr(2));
  }
  REQUIRE(listed.size() == catalog().size());
  for (std::size_t i = 0; i < listed.size(); ++i) CHECK(listed[i] == catalog().entries()[i].name);
  CHECK(p.render() == build_prompt(q, catalog()).render());
  CHECK(error_of([] { build_prompt(ask(""), catalog()); }) == ErrorCode::kEmptyText);
}

TEST_CASE("endpoint client against a local mock") {
  MockEndpoint mock;
  const Prompt prompt = build_prompt(ask("I need a knife"), catalog());

  SUBCASE("reply is returned verbatim, token sent as bearer") {
    EndpointConfig e = endpoint(mock.url("/ok"));
    e.token = "secret-token";
    const std::string reply = llm_infer(e, prompt);
    CHECK(parse_task_description(reply, catalog()) == TaskDescription{"knife", Handedness::kRight});
    CHECK(mock.last_auth_ == "Bearer secret-token");
    const auto body = nlohmann::json::parse(mock.last_body_);
    CHECK(body["model"] == "gemma2:9b");
    CHECK(body["messages"][0]["role"] == "system");
    CHECK(body["messages"][1]["content"] == prompt.user);
  }
  SUBCASE("default path is /v1") {
    const std::string reply = llm_infer(endpoint(mock.url("")), prompt);
    CHECK(parse_task_description(reply, catalog()) == TaskDescription{"mug", Handedness::kLeft});
  }
  SUBCASE("content given as parts") {
    CHECK(llm_infer(endpoint(mock.url("/parts")), prompt) == "Pass the spoon to right hand of human");
  }
  SUBCASE("5xx is retried") {
    EndpointConfig e = endpoint(mock.url("/flaky"));
    e.retries = 1;
    CHECK(llm_infer(e, prompt).find("hammer") != std::string::npos);
    CHECK(mock.flaky_calls_ == 2);
  }
  SUBCASE("4xx is not retried") {
    EndpointConfig e = endpoint(mock.url("/missing"));
    e.retries = 3;
    CHECK(error_of([&] { llm_infer(e, prompt); }) == ErrorCode::kNonSuccessStatus);
    CHECK(mock.missing_calls_ == 1);
  }
  SUBCASE("slow endpoint times out") {
    EndpointConfig e = endpoint(mock.url("/slow"));
    e.timeout = std::chrono::milliseconds(200);
    e.retries = 0;
    CHECK(error_of([&] { llm_infer(e, prompt); }) == ErrorCode::kTimeout);
  }
  SUBCASE("non-JSON body") {
    CHECK(error_of([&] { llm_infer(endpoint(mock.url("/garbage")), prompt); }) ==
          ErrorCode::kMalformedResponse);
  }
  SUBCASE("image travels as a data URL") {
    test::TempDir dir;
    const std::string img = dir / "hand.png";
    std::ofstream(img, std::ios::binary) << "\x89PNG";
    const std::string body = chat_request_body(endpoint(mock.url("/ok")), prompt, img);
    CHECK(body.find("data:image/png;base64,iVBORw==") != std::string::npos);
  }
}

TEST_CASE("unreachable endpoint") {
  EndpointConfig e = endpoint("http://127.0.0.1:1");
  e.retries = 0;
  const Prompt prompt = build_prompt(ask("knife"), catalog());
  CHECK(error_of([&] { llm_infer(e, prompt); }) == ErrorCode::kTransportError);
  CHECK(error_of([&] { llm_infer(endpoint("localhost:8080"), prompt); }) == ErrorCode::kTransportError);
}

}  // TEST_SUITE
