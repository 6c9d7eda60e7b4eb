#include "handover/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "handover/evaluation.hpp"
#include "handover/pipeline.hpp"
#include "handover/ply.hpp"
#include "handover/scene_export.hpp"
#include "handover/serialization.hpp"

namespace handover {

namespace {

struct Globals {
  bool json_errors = false;
  bool timing = false;
  std::string settings_path;
};

struct EndpointFlags {
  std::string url;
  std::string model;
  int timeout_ms = 0;
  int retries = -1;
};

struct InferArgs {
  std::string text, catalog, keypoints, image, hand, out;
  EndpointFlags endpoint;
};

struct ImagineArgs {
  std::string task, cloud, poses, grasps, hand_model, out;
  bool sample_antipodal = false;
  std::uint64_t seed = 0;
  std::size_t count = 32;
  double gap = 0.01;
  std::optional<double> lambda, clearance;
  std::string cosine_mode;
};

struct MatchArgs {
  std::string config, observed, out;
};

struct EvaluateArgs {
  std::string corpus, catalog, report, csv;
  unsigned threads = 1;
  EndpointFlags endpoint;
};

struct ExportArgs {
  std::string config, out, hand_model;
};

class ValidationFailed : public std::runtime_error {
 public:
  ValidationFailed(const std::string& msg, Json detail)
      : std::runtime_error(msg), detail_(std::move(detail)) {}
  const Json& detail() const { return detail_; }

 private:
  Json detail_;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAllCandidatesCollide:
    case ErrorCode::kNoCandidatesFound:
    case ErrorCode::kProviderEmpty:
    case ErrorCode::kHandednessMismatch:
    case ErrorCode::kWidthExceedsGripper:
      return kExitValidation;
    default:
      return kExitInput;
  }
}

void report_error(std::ostream& err, const Globals& g, std::string_view name, const std::string& msg,
                  int code, Json extra = Json::object()) {
  if (g.json_errors) {
    Json j = {{"error", name}, {"message", msg}, {"exit_code", code}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    err << j.dump() << "\n";
  } else {
    err << "handover: " << name << ": " << msg << "\n";
  }
}

Settings load_settings(const Globals& g) {
  if (g.settings_path.empty()) return {};
  return settings_from_json(read_json_file(g.settings_path));
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

// flags > env > settings file
std::optional<EndpointConfig> resolve_endpoint(const EndpointFlags& f, const Settings& s) {
  EndpointConfig cfg;
  if (!f.url.empty()) {
    cfg.base_url = f.url;
  } else if (auto e = env("HANDOVER_ENDPOINT")) {
    cfg.base_url = *e;
  } else if (s.endpoint) {
    cfg.base_url = *s.endpoint;
  } else {
    return std::nullopt;
  }
  if (!f.model.empty()) {
    cfg.model = f.model;
  } else if (s.model) {
    cfg.model = *s.model;
  }
  if (f.timeout_ms > 0) {
    cfg.timeout = std::chrono::milliseconds(f.timeout_ms);
  } else if (s.timeout_ms) {
    cfg.timeout = std::chrono::milliseconds(*s.timeout_ms);
  }
  if (f.retries >= 0) {
    cfg.retries = f.retries;
  } else if (s.retries) {
    cfg.retries = *s.retries;
  }
  if (auto t = env("HANDOVER_API_TOKEN")) cfg.token = *t;
  return cfg;
}

void add_endpoint_flags(CLI::App* cmd, EndpointFlags& f) {
  cmd->add_option("--endpoint", f.url, "Chat-completion base URL (else HANDOVER_ENDPOINT)");
  cmd->add_option("--llm-model", f.model, "Model name sent to the endpoint");
  cmd->add_option("--timeout-ms", f.timeout_ms, "Endpoint timeout")->check(CLI::PositiveNumber);
  cmd->add_option("--retries", f.retries, "Endpoint retries")->check(CLI::NonNegativeNumber);
}

TaskDescription resolve_with_endpoint(const IntentQuery& q, const ToolCatalog& catalog,
                                      const EndpointConfig& ep) {
  const Prompt prompt = build_prompt(q, catalog);
  return parse_task_description(llm_infer(ep, prompt, q.image_path), catalog);
}

HandModels load_models(const std::string& path) {
  HandModels models = HandModels::synthetic();
  if (!path.empty()) {
    HandModel m = hand_model_from_json(read_json_file(path));
    (m.handedness() == Handedness::kLeft ? models.left : models.right) = std::move(m);
  }
  return models;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_infer(const InferArgs& a, const Settings& s, std::ostream& out) {
  const ToolCatalog catalog = catalog_from_json(read_json_file(a.catalog));
  IntentQuery q;
  q.text = a.text;
  if (!a.keypoints.empty()) q.keypoints = observation_from_json(read_json_file(a.keypoints)).keypoints;
  if (!a.hand.empty()) q.handedness = parse_handedness(a.hand);
  if (!a.image.empty()) q.image_path = a.image;

  const auto ep = resolve_endpoint(a.endpoint, s);
  if (q.image_path && !ep) {
    fail(ErrorCode::kInvalidInput, "--image needs an endpoint to interpret it");
  }
  const TaskDescription task = ep ? resolve_with_endpoint(q, catalog, *ep)
                                  : resolve_intent_rules(q, catalog);
  const std::string body = dump_json(to_json(task));
  if (!a.out.empty()) write_text_file(a.out, body);
  out << body;
  return kExitOk;
}

int cmd_imagine(const ImagineArgs& a, const Globals& g, const Settings& s, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const TaskDescription task = task_from_json(read_json_file(a.task));
  ObjectCloud cloud = load_ply(a.cloud);
  cloud.name = task.object;

  PipelineConfig cfg;
  if (s.lambda) cfg.selection.lambda = *s.lambda;
  if (s.clearance) cfg.selection.clearance = *s.clearance;
  if (s.cosine_mode) cfg.selection.mode = *s.cosine_mode;
  if (a.lambda) cfg.selection.lambda = *a.lambda;
  if (a.clearance) cfg.selection.clearance = *a.clearance;
  if (!a.cosine_mode.empty()) cfg.selection.mode = parse_cosine_mode(a.cosine_mode);

  const HandModels models = load_models(a.hand_model);
  std::unique_ptr<ReceivingHandProvider> hands;
  if (!a.poses.empty()) {
    hands = std::make_unique<CannedPoseLibrary>(pose_library_from_json(read_json_file(a.poses)));
  } else {
    hands = std::make_unique<PalmUpPlacementProvider>(models, a.gap);
  }
  std::unique_ptr<GraspCandidateProvider> grasps;
  if (!a.grasps.empty()) {
    grasps = std::make_unique<FixedGraspProvider>(grasps_from_json(read_json_file(a.grasps)));
  } else {
    grasps = std::make_unique<AntipodalGraspProvider>(
        AntipodalOptions{.count = a.count, .seed = a.seed});
  }

  const HandoverConfiguration config =
      imagine_configuration(task, cloud, models, *hands, *grasps, cfg);
  Json summary = {{"object", task.object},
                  {"hand", to_string(task.handedness)},
                  {"grasp_index", config.grasp_index},
                  {"grasp_score", config.grasp_score},
                  {"fallback_used", config.fallback_used},
                  {"validation", config.validation.pass()}};
  if (!config.validation.pass()) {
    throw ValidationFailed("configuration failed validation", to_json(config.validation));
  }
  Json doc = to_json(config);
  if (g.timing) doc["timing"] = {{"imagine_ms", ms_since(t0)}};
  write_text_file(a.out, dump_json(doc));
  out << summary.dump() << "\n";
  return kExitOk;
}

int cmd_match(const MatchArgs& a, const Globals& g, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const HandoverConfiguration config = configuration_from_json(read_json_file(a.config));
  const Observation obs = observation_from_json(read_json_file(a.observed));
  const EndEffectorTarget target = match_to_observation(config, obs);
  Json doc = to_json(target);
  if (g.timing) doc["timing"] = {{"match_ms", ms_since(t0)}};
  write_text_file(a.out, dump_json(doc));
  out << Json({{"position", doc["position"]}, {"orientation_wxyz", doc["orientation_wxyz"]}}).dump()
      << "\n";
  return kExitOk;
}

int cmd_evaluate(const EvaluateArgs& a, const Settings& s, std::ostream& out) {
  const ToolCatalog catalog = catalog_from_json(read_json_file(a.catalog));
  const std::vector<EvalItem> corpus = corpus_from_json(read_json_file(a.corpus));
  const auto ep = resolve_endpoint(a.endpoint, s);
  IntentResolver resolver;
  if (ep) {
    // one client per call, so concurrent items do not share a connection
    resolver = [&catalog, cfg = *ep](const IntentQuery& q) {
      return resolve_with_endpoint(q, catalog, cfg);
    };
  } else {
    resolver = [&catalog](const IntentQuery& q) { return resolve_intent_rules(q, catalog); };
  }
  const EvalReport report = evaluate_corpus(corpus, resolver, catalog, std::max(1u, a.threads));
  const std::string csv = report_csv(report);
  if (a.report.ends_with(".csv")) {
    write_text_file(a.report, csv);
  } else {
    write_text_file(a.report, dump_json(to_json(report)));
  }
  if (!a.csv.empty()) write_text_file(a.csv, csv);
  out << csv;
  return kExitOk;
}

int cmd_export(const ExportArgs& a, std::ostream& out) {
  const HandoverConfiguration config = configuration_from_json(read_json_file(a.config));
  const HandModels models = load_models(a.hand_model);
  const HandModel& model = models.get(config.hand.handedness);
  FaceList faces;
  if (model.num_vertices() == config.hand.vertices.rows()) faces = model.faces();
  export_scene(config, faces, a.out);
  out << "wrote " << a.out << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Globals g;
  CLI::App app{"Handover configuration tool: intent, imagination, matching, evaluation."};
  app.name("handover");
  app.require_subcommand(1);
  app.add_flag("--json", g.json_errors, "Machine-readable errors on stderr");
  app.add_flag("--timing", g.timing, "Record wall-clock timings in outputs");
  app.add_option("--settings", g.settings_path, "JSON settings file with defaults");

  InferArgs infer;
  auto* c_infer = app.add_subcommand("infer", "Resolve a spoken request into a task description");
  c_infer->add_option("--text", infer.text, "Transcribed request")->required();
  c_infer->add_option("--catalog", infer.catalog, "Tool catalog JSON")->required();
  c_infer->add_option("--keypoints", infer.keypoints, "Observed 21x3 hand keypoints JSON");
  c_infer->add_option("--hand", infer.hand, "Receiving hand hint (left|right)");
  c_infer->add_option("--image", infer.image, "Image forwarded to the endpoint");
  c_infer->add_option("--out", infer.out, "Also write the result here");
  add_endpoint_flags(c_infer, infer.endpoint);

  ImagineArgs imagine;
  auto* c_imag = app.add_subcommand("imagine", "Imagine a handover configuration");
  c_imag->add_option("--task", imagine.task, "Task description JSON")->required();
  c_imag->add_option("--cloud", imagine.cloud, "Object point cloud (PLY)")->required();
  c_imag->add_option("--poses", imagine.poses, "Canned receiving-pose library JSON");
  auto* o_grasps = c_imag->add_option("--grasps", imagine.grasps, "Grasp candidate file JSON");
  auto* o_sample = c_imag->add_flag("--sample-antipodal", imagine.sample_antipodal,
                                    "Sample antipodal candidates (default)");
  o_grasps->excludes(o_sample);
  c_imag->add_option("--seed", imagine.seed, "Sampler seed");
  c_imag->add_option("--count", imagine.count, "Number of sampled candidates")
      ->check(CLI::PositiveNumber);
  c_imag->add_option("--gap", imagine.gap, "Palm-to-object gap for the default placement");
  c_imag->add_option("--hand-model", imagine.hand_model, "Hand model file (hand-model/1)");
  c_imag->add_option("--lambda", imagine.lambda, "Distance weight of the grasp score");
  c_imag->add_option("--clearance", imagine.clearance, "Required gripper-hand clearance (m)");
  c_imag->add_option("--cosine-mode", imagine.cosine_mode, "signed | absolute");
  c_imag->add_option("--out", imagine.out, "Configuration JSON to write")->required();

  MatchArgs match;
  auto* c_match = app.add_subcommand("match", "Transport a configuration to an observed hand");
  c_match->add_option("--config", match.config, "Configuration JSON")->required();
  c_match->add_option("--observed-keypoints", match.observed, "Observed hand JSON")->required();
  c_match->add_option("--out", match.out, "End-effector target JSON to write")->required();

  EvaluateArgs eval;
  auto* c_eval = app.add_subcommand("evaluate", "Score an intent resolver on a tiered corpus");
  c_eval->add_option("--corpus", eval.corpus, "Corpus JSON")->required();
  c_eval->add_option("--catalog", eval.catalog, "Tool catalog JSON")->required();
  c_eval->add_option("--report", eval.report, "Report path (.json or .csv)")->required();
  c_eval->add_option("--csv", eval.csv, "Additional CSV report path");
  c_eval->add_option("--threads", eval.threads, "Worker threads");
  add_endpoint_flags(c_eval, eval.endpoint);

  ExportArgs exp;
  auto* c_export = app.add_subcommand("export", "Write an OBJ scene of a configuration");
  c_export->add_option("--config", exp.config, "Configuration JSON")->required();
  c_export->add_option("--out", exp.out, "OBJ path")->required();
  c_export->add_option("--hand-model", exp.hand_model, "Hand model file for mesh faces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, g, "UsageError", e.what(), kExitInput);
    return kExitInput;
  }

  try {
    const Settings settings = load_settings(g);
    if (c_infer->parsed()) return cmd_infer(infer, settings, out);
    if (c_imag->parsed()) return cmd_imagine(imagine, g, settings, out);
    if (c_match->parsed()) return cmd_match(match, g, out);
    if (c_eval->parsed()) return cmd_evaluate(eval, settings, out);
    if (c_export->parsed()) return cmd_export(exp, out);
  } catch (const AllCandidatesCollide& e) {
    report_error(err, g, e.name(), e.what(), kExitValidation,
                 {{"min_distances", e.min_distances()}});
    return kExitValidation;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    report_error(err, g, e.name(), e.what(), code);
    return code;
  } catch (const ValidationFailed& e) {
    report_error(err, g, "ValidationFailed", e.what(), kExitValidation, {{"validation", e.detail()}});
    return kExitValidation;
  } catch (const std::exception& e) {
    report_error(err, g, "InternalError", e.what(), kExitInput);
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace handover
