// Copyright 2026 The Interest Storyboard Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: feature ingestion, offline ranking, evaluation
// traces, storyboards, saliency maps and the labelling service.

#include <pthread.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <opencv2/imgcodecs.hpp>

#include "interest/comparison_log.h"
#include "interest/errors.h"
#include "interest/evaluation.h"
#include "interest/extractor.h"
#include "interest/feature_store.h"
#include "interest/http_api.h"
#include "interest/pipeline.h"
#include "interest/saliency.h"
#include "interest/session.h"
#include "interest/storyboard.h"
#include "interest/synthetic_images.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace interest;

struct DataPaths {
  std::string data_dir = ".";
  std::string features;
  std::string log;

  fs::path Features() const {
    return features.empty() ? fs::path(data_dir) / "features.jsonl" : fs::path(features);
  }
  fs::path Log() const {
    return log.empty() ? fs::path(data_dir) / "comparisons.jsonl" : fs::path(log);
  }
};

void AddDataOptions(CLI::App* cmd, DataPaths& paths, bool with_log) {
  cmd->add_option("--data-dir", paths.data_dir,
                  "Directory holding features.jsonl and comparisons.jsonl")
      ->envname("INTEREST_DATA_DIR");
  cmd->add_option("--features", paths.features, "Feature file (default <data-dir>/features.jsonl)");
  if (with_log) {
    cmd->add_option("--log", paths.log, "Comparison log (default <data-dir>/comparisons.jsonl)");
  }
}

void AddPipelineOptions(CLI::App* cmd, PipelineConfig& cfg) {
  cmd->add_option("--beta", cfg.prior.beta, "Performance noise scale")->capture_default_str();
  cmd->add_option("--prior-sigma", cfg.prior.prior_sigma, "Prior standard deviation")
      ->capture_default_str();
  cmd->add_option("--length-scale", cfg.kernel.length_scale, "Kernel length scale")
      ->capture_default_str();
  const std::map<std::string, EpApproximation> approximations = {
      {"auto", EpApproximation::kAuto},
      {"joint", EpApproximation::kJoint},
      {"factorized", EpApproximation::kFactorized}};
  cmd->add_option("--ep", cfg.ep.approximation,
                  "EP posterior: joint, factorized, or auto (joint up to "
                  "--ep-joint-max compared images)")
      ->transform(CLI::CheckedTransformer(approximations, CLI::ignore_case))
      ->option_text("TEXT:{auto,joint,factorized} [auto]");
  cmd->add_option("--ep-joint-max", cfg.ep.joint_max_images)->capture_default_str();
}

std::vector<std::size_t> ParseList(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoul(item));
  return out;
}

json ScoresJson(const InterestPosterior& p) {
  json out = json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.push_back({{"id", p.ids[i]}, {"mean", p.means[i]}, {"variance", p.variances[i]}});
  }
  return out;
}

void WriteJson(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

// ----------------------------------------------------------------------------

int RunIngest(const std::string& in, const std::string& out, const std::string& format) {
  const FeatureStore store = LoadFeatures(in);
  if (!out.empty()) {
    if (format == "binary") {
      WriteFeaturesBinary(store, out);
    } else {
      WriteFeaturesJsonl(store, out);
    }
  }
  json summary = {{"records", store.size()}, {"dim", nullptr}};
  if (store.dim()) summary["dim"] = *store.dim();
  std::cout << summary.dump() << "\n";
  return 0;
}

int RunRank(const DataPaths& paths, const PipelineConfig& cfg, const std::string& method,
            const std::string& out) {
  const FeatureStore store = LoadFeatures(paths.Features());
  const std::vector<Comparison> log = ReadComparisonLog(paths.Log());
  if (method == "ts") {
    WriteJson(ScoresJson(RankTrueSkill(store, log, cfg)), out);
  } else {
    WriteJson(ScoresJson(RankGpCnn(store, log, cfg).scores), out);
  }
  return 0;
}

struct TraceArgs {
  SyntheticOptions synth;
  std::size_t seeds = 5;
  double train_fraction = 0.75;
  std::string budgets = "100,250,500,1000,2000,3000";
  std::string csv = "trace.csv";
  std::string summary = "trace_summary.json";
};

int RunTrace(const TraceArgs& args, const PipelineConfig& cfg) {
  const std::vector<std::size_t> budgets = ParseList(args.budgets);
  const std::vector<Method> methods = {Method::kTrueSkill, Method::kGpCnn};
  std::vector<AccuracyTrace> traces;
  for (std::size_t s = 0; s < args.seeds; ++s) {
    SyntheticOptions opts = args.synth;
    opts.seed = args.synth.seed + s;
    const SyntheticDataset data = SynthesizeDataset(opts);
    traces.push_back(ComputeAccuracyTrace(data, {args.train_fraction, opts.seed}, budgets,
                                          methods, cfg));
    std::cerr << "seed " << opts.seed << " done\n";
  }
  std::ofstream csv(args.csv);
  if (!csv) throw IoError("cannot write " + args.csv);
  WriteTraceCsv(traces, csv);
  WriteJson(TraceSummaryJson(traces), args.summary);
  return 0;
}

int RunStoryboard(const DataPaths& paths, const PipelineConfig& cfg, StoryboardSpec spec,
                  const std::string& method) {
  const FeatureStore store = LoadFeatures(paths.Features());
  if (method == "cluster") {
    spec.Validate();
    const std::vector<ImageId> ids =
        ClusterBaseline(store, std::min(spec.n_images, store.size()));
    std::cout << StoryboardManifest(store, ids, nullptr).dump(2) << "\n";
    return 0;
  }
  const std::vector<Comparison> log = ReadComparisonLog(paths.Log());
  const ScoreMap scores = ToScoreMap(RankGpCnn(store, log, cfg).scores);
  const std::vector<ImageId> order = store.ids();
  const StoryboardSelection sel = SelectTopSpaced(scores, order, spec);
  if (sel.short_of_target) {
    std::cerr << "warning: only " << sel.ids.size() << " images satisfy the spacing\n";
  }
  std::cout << StoryboardManifest(store, sel.ids, &scores).dump(2) << "\n";
  return 0;
}

struct SaliencyArgs {
  std::string image;
  std::string id;
  std::string out = "overlay.png";
  std::string grid_out = "map.json";
  std::string extractor;
  OcclusionConfig occlusion;
};

int RunSaliency(const DataPaths& paths, const PipelineConfig& cfg, const SaliencyArgs& args) {
  const FeatureStore store = LoadFeatures(paths.Features());
  const std::vector<Comparison> log = ReadComparisonLog(paths.Log());
  const SmoothedInterest smoothed = RankGpCnn(store, log, cfg);

  std::string id = args.id;
  if (id.empty()) {
    const fs::path wanted = fs::weakly_canonical(args.image);
    for (const FeatureVector& fv : store) {
      if (fs::weakly_canonical(store.ResolvePath(fv)) == wanted) id = fv.id;
    }
    if (id.empty()) id = fs::path(args.image).stem().string();
  }

  std::unique_ptr<FeatureExtractor> extractor;
  if (args.extractor.empty() || args.extractor == "stub") {
    extractor = std::make_unique<StoredVectorExtractor>(store);
  } else {
    extractor = std::make_unique<HttpFeatureExtractor>(args.extractor);
  }
  const cv::Mat image = PrepareImage(LoadImage(args.image), args.occlusion);
  const SaliencyMap map = OcclusionMap(image, id, *extractor, smoothed.model, args.occlusion);
  WriteJson(map.ToJson(), args.grid_out);
  if (!cv::imwrite(args.out, RenderOverlay(map, image))) {
    throw IoError("cannot write " + args.out);
  }
  std::cerr << "base interest " << map.base_interest << ", " << map.rows() << "x"
            << map.cols() << " grid\n";
  return 0;
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string skip_log;
  std::string extractor;
  std::uint64_t seed = 0;
  std::size_t auto_every = 25;
};

// Blocked before any server thread starts so that every thread inherits the
// mask and the signals are only ever consumed by WaitForTermination.
sigset_t BlockTerminationSignals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

void WaitForTermination(const sigset_t& set) {
  int sig = 0;
  sigwait(&set, &sig);
}

int RunServe(const DataPaths& paths, const PipelineConfig& pipeline, const ServeArgs& args) {
  const sigset_t signals = BlockTerminationSignals();
  FeatureStore store = LoadFeatures(paths.Features());
  const fs::path log = paths.Log();
  const fs::path skips =
      args.skip_log.empty() ? log.parent_path() / "skips.jsonl" : fs::path(args.skip_log);
  ServiceConfig cfg{pipeline, args.seed, args.auto_every};
  Session session(std::move(store), log, skips, cfg);
  ApiOptions options;
  if (!args.extractor.empty()) options.extractor_endpoint = args.extractor;
  ApiServer server(session, options);
  const int port = server.Start(args.host, args.port);
  std::cerr << "serving " << session.store().size() << " images on http://" << args.host
            << ":" << port << " (log " << log.string() << ", "
            << session.status().log_length << " judgments)\n";
  WaitForTermination(signals);
  server.Stop();
  return 0;
}

int RunStubExtractor(const DataPaths& paths, const std::string& host, int port,
                     std::uint64_t seed) {
  const sigset_t signals = BlockTerminationSignals();
  const FeatureStore store = LoadFeatures(paths.Features());
  StoredVectorExtractor extractor(store, seed);
  ExtractorServer server(extractor, fs::path(paths.Features()).parent_path());
  const int bound = server.Start(host, port);
  std::cerr << "stub extractor on http://" << host << ":" << bound << "\n";
  WaitForTermination(signals);
  server.Stop();
  return 0;
}

int RunSynth(const SyntheticOptions& opts, const std::string& out_dir, int image_px) {
  const SyntheticDataset data = SynthesizeDataset(opts);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  WriteFeaturesJsonl(data.features, dir / "features.jsonl");
  {
    std::ofstream log(dir / "comparisons.jsonl");
    for (const Comparison& c : data.comparisons) log << ComparisonToJson(c).dump() << "\n";
  }
  {
    std::ofstream truth(dir / "true_interest.csv");
    truth << "id,interest\n";
    for (std::size_t i = 0; i < data.features.size(); ++i) {
      truth << data.features.at(i).id << "," << data.true_interest[i] << "\n";
    }
  }
  if (image_px > 0) WriteSyntheticImages(data.features, dir, image_px);
  std::cout << json{{"images", data.features.size()},
                    {"comparisons", data.comparisons.size()},
                    {"dir", dir.string()}}
                   .dump()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn image interest from pairwise comparisons"};
  app.require_subcommand(1);

  PipelineConfig pipeline;
  DataPaths paths;

  std::string ingest_in, ingest_out, ingest_format = "jsonl";
  auto* ingest = app.add_subcommand("ingest-features", "Validate a feature file and convert it");
  ingest->add_option("input", ingest_in, "Feature file (JSONL or binary header .json)")
      ->required();
  ingest->add_option("--out", ingest_out, "Write the validated store here");
  ingest->add_option("--format", ingest_format, "Output format")
      ->check(CLI::IsMember({"jsonl", "binary"}))
      ->capture_default_str();

  std::string rank_method = "gp", rank_out;
  auto* rank = app.add_subcommand("rank", "Score every image from the comparison log");
  AddDataOptions(rank, paths, true);
  AddPipelineOptions(rank, pipeline);
  rank->add_option("--method", rank_method, "ts (EP only) or gp (EP + GP smoothing)")
      ->check(CLI::IsMember({"ts", "gp"}))
      ->capture_default_str();
  rank->add_option("--out", rank_out, "Output JSON (default stdout)");

  TraceArgs trace_args;
  auto* trace = app.add_subcommand("eval-trace", "Accuracy-versus-budget traces on synthetic data");
  AddPipelineOptions(trace, pipeline);
  trace->add_option("--images", trace_args.synth.n_images)->capture_default_str();
  trace->add_option("--dim", trace_args.synth.dim)->capture_default_str();
  trace->add_option("--comparisons", trace_args.synth.n_comparisons)->capture_default_str();
  trace->add_option("--noise", trace_args.synth.noise_std)->capture_default_str();
  trace->add_option("--seed", trace_args.synth.seed, "First seed")->capture_default_str();
  trace->add_option("--seeds", trace_args.seeds, "Number of seeds")->capture_default_str();
  trace->add_option("--train-fraction", trace_args.train_fraction)->capture_default_str();
  trace->add_option("--budgets", trace_args.budgets, "Comma-separated budgets")
      ->capture_default_str();
  trace->add_option("--csv", trace_args.csv)->capture_default_str();
  trace->add_option("--summary", trace_args.summary)->capture_default_str();

  StoryboardSpec spec{24, 50};
  std::string board_method = "interest";
  auto* board = app.add_subcommand("storyboard", "Print a storyboard manifest as JSON");
  AddDataOptions(board, paths, true);
  AddPipelineOptions(board, pipeline);
  board->add_option("--n", spec.n_images, "Images in the storyboard")->capture_default_str();
  board->add_option("--min-sep", spec.min_separation, "Minimum capture-index gap")
      ->capture_default_str();
  board->add_option("--method", board_method)
      ->check(CLI::IsMember({"interest", "cluster"}))
      ->capture_default_str();

  SaliencyArgs sal;
  auto* saliency = app.add_subcommand("saliency", "Occlusion saliency map for one image");
  AddDataOptions(saliency, paths, true);
  AddPipelineOptions(saliency, pipeline);
  saliency->add_option("--image", sal.image)->required();
  saliency->add_option("--id", sal.id, "Image id (default: matched by path, else file stem)");
  saliency->add_option("--window", sal.occlusion.window_px)->capture_default_str();
  saliency->add_option("--stride", sal.occlusion.stride_px)->capture_default_str();
  saliency->add_option("--blank", sal.occlusion.blank_value)->capture_default_str();
  saliency->add_option("--parallelism", sal.occlusion.parallelism)->capture_default_str();
  saliency->add_option("--out", sal.out, "Overlay PNG")->capture_default_str();
  saliency->add_option("--grid-out", sal.grid_out, "Delta grid JSON")->capture_default_str();
  saliency->add_option("--extractor", sal.extractor,
                       "Extraction service URL, or 'stub' for the built-in stand-in")
      ->envname("INTEREST_EXTRACTOR_URL");

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "Run the labelling service");
  AddDataOptions(serve, paths, true);
  AddPipelineOptions(serve, pipeline);
  serve->add_option("--host", serve_args.host)->capture_default_str();
  serve->add_option("--port", serve_args.port)->envname("INTEREST_PORT")->capture_default_str();
  serve->add_option("--skip-log", serve_args.skip_log, "Default <log dir>/skips.jsonl");
  serve->add_option("--extractor", serve_args.extractor, "Extraction service URL")
      ->envname("INTEREST_EXTRACTOR_URL");
  serve->add_option("--seed", serve_args.seed, "Pair sampling seed")->capture_default_str();
  serve->add_option("--auto-recompute", serve_args.auto_every,
                    "Recompute after every K judgments (0 disables)")
      ->capture_default_str();

  std::string stub_host = "127.0.0.1";
  int stub_port = 8090;
  std::uint64_t stub_seed = 7;
  auto* stub = app.add_subcommand("stub-extractor",
                                  "Serve /extract from stored feature vectors (no CNN)");
  AddDataOptions(stub, paths, false);
  stub->add_option("--host", stub_host)->capture_default_str();
  stub->add_option("--port", stub_port)->capture_default_str();
  stub->add_option("--seed", stub_seed)->capture_default_str();

  SyntheticOptions synth_opts;
  synth_opts.n_images = 50;
  synth_opts.n_comparisons = 300;
  std::string synth_dir = "synthetic";
  int synth_px = 64;
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  synth->add_option("--out-dir", synth_dir)->capture_default_str();
  synth->add_option("--images", synth_opts.n_images)->capture_default_str();
  synth->add_option("--dim", synth_opts.dim)->capture_default_str();
  synth->add_option("--comparisons", synth_opts.n_comparisons)->capture_default_str();
  synth->add_option("--noise", synth_opts.noise_std)->capture_default_str();
  synth->add_option("--seed", synth_opts.seed)->capture_default_str();
  synth->add_option("--image-px", synth_px, "PNG size; 0 skips images")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return RunIngest(ingest_in, ingest_out, ingest_format);
    if (*rank) return RunRank(paths, pipeline, rank_method, rank_out);
    if (*trace) return RunTrace(trace_args, pipeline);
    if (*board) return RunStoryboard(paths, pipeline, spec, board_method);
    if (*saliency) return RunSaliency(paths, pipeline, sal);
    if (*serve) return RunServe(paths, pipeline, serve_args);
    if (*stub) return RunStubExtractor(paths, stub_host, stub_port, stub_seed);
    if (*synth) return RunSynth(synth_opts, synth_dir, synth_px);
  } catch (const LoadError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
