#include "wattspell/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wattspell/data/synth.hpp"
#include "wattspell/eval/report.hpp"
#include "wattspell/model/checkpoint.hpp"
#include "wattspell/model/trainer.hpp"
#include "wattspell/verify/gradcheck.hpp"

namespace wspl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Flags shared by every subcommand; unset ones leave the config alone.
struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> threads;
  std::optional<double> threshold;
  std::string downsample;
  std::optional<std::size_t> epochs;
  std::string input;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "JSON run configuration");
  app->add_option("--seed", f.seed, "Master random seed");
  app->add_option("--out", f.out, "Output directory (file for synth)");
  app->add_option("--threads", f.threads, "Worker threads; results do not depend on this")->check(CLI::PositiveNumber);
  app->add_option("--threshold", f.threshold, "On/off threshold on normalized power");
  app->add_option("--downsample", f.downsample, "Block reduction: mean or decimate")
      ->check(CLI::IsMember({"mean", "decimate"}));
}

RunConfig resolve(const CommonFlags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (f.seed) c.model.seed = *f.seed;
  if (!f.out.empty()) c.out_dir = f.out;
  if (f.threads) c.threads = *f.threads;
  if (f.threshold) c.model.on_threshold = *f.threshold;
  if (!f.downsample.empty()) c.downsample = parse_downsample(f.downsample);
  if (f.epochs) c.model.epochs = *f.epochs;
  c.validate();
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

json read_json(const fs::path& path, const char* what) {
  require_file(path, what);
  std::ifstream in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string(what) + " " + path.string() + ": " + e.what());
  }
}

void make_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory " + dir.string());
}

json checksum_entry(const fs::path& path) { return {{"path", path.string()}, {"fnv1a64", file_checksum(path)}}; }

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& config, const json& inputs,
                    const std::vector<std::string>& outputs) {
  json out = json::object();
  for (const auto& name : outputs) out[name] = file_checksum(dir / name);
  const json manifest = {{"toolkit_version", kToolkitVersion},
                         {"command", command},
                         {"seed", config.model.seed},
                         {"config", to_json(config)},
                         {"inputs", inputs},
                         {"outputs", out}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

json stats_json(const NormStats& s) { return {{"min", s.min}, {"max", s.max}}; }

NormStats stats_from(const json& j) { return {j.at("min").get<double>(), j.at("max").get<double>()}; }

struct NormFile {
  NormStats aggregate;
  std::vector<std::string> names;
  std::vector<NormStats> appliances;
};

void write_norm(const fs::path& path, const PreparedWindows& w) {
  json apps = json::array();
  for (std::size_t a = 0; a < w.names.size(); ++a) {
    json e = stats_json(w.appliance_stats[a]);
    e["name"] = w.names[a];
    apps.push_back(e);
  }
  write_text(path, json{{"aggregate", stats_json(w.aggregate_stats)}, {"appliances", apps}}.dump(2) + "\n");
}

NormFile read_norm(const fs::path& path) {
  const json j = read_json(path, "normalization file");
  NormFile n;
  try {
    n.aggregate = stats_from(j.at("aggregate"));
    for (const auto& a : j.at("appliances")) {
      n.names.push_back(a.at("name").get<std::string>());
      n.appliances.push_back(stats_from(a));
    }
  } catch (const json::exception& e) {
    throw InputError("normalization file " + path.string() + ": " + e.what());
  }
  return n;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string loss_csv(const TrainReport& r) {
  std::string s = "epoch,train_loss,val_loss\n";
  for (std::size_t e = 0; e < r.epochs(); ++e) {
    s += std::to_string(e + 1) + "," + fmt_double(r.train_loss[e]) + "," + fmt_double(r.val_loss[e]) + "\n";
  }
  return s;
}

std::vector<double> column(const TensorD& m, std::size_t col) {
  std::vector<double> v(m.dim(0));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = m(i, col);
  return v;
}

std::string plot_name(const std::string& appliance) { return "plot_" + appliance + ".csv"; }

/// Predicts the test windows and writes report.csv plus one plot CSV per
/// appliance into `dir`. Returns the output file names.
std::vector<std::string> evaluate_into(const fs::path& dir, const PreparedWindows& w, const ModelParams& params,
                                       const RunConfig& config, std::ostream& out) {
  const TensorD est = predict(w.test.inputs, params, config.model, config.threads);
  std::vector<ApplianceReport> reports;
  std::vector<std::string> files = {"report.csv"};
  for (std::size_t a = 0; a < w.names.size(); ++a) {
    const std::vector<double> e = column(est, a);
    const std::vector<double> t = column(w.test.targets, a);
    reports.push_back(evaluate_appliance(w.names[a], e, t, w.appliance_stats[a], config.model.on_threshold));

    std::vector<double> e_w(e.size()), t_w(t.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      e_w[i] = denormalize_value(e[i], w.appliance_stats[a]);
      t_w[i] = denormalize_value(t[i], w.appliance_stats[a]);
    }
    std::ostringstream plot;
    write_plot_csv(plot, w.test.timestamps, t_w, e_w);
    write_text(dir / plot_name(w.names[a]), plot.str());
    files.push_back(plot_name(w.names[a]));
  }
  write_text(dir / "report.csv", render_report(reports, ReportFormat::Csv));
  out << render_report(reports, ReportFormat::Table);
  return files;
}

Scene load_scene(const RunConfig& config) {
  require_file(config.scene, "scene file");
  Scene scene = read_scene_csv(fs::path(config.scene));
  if (scene.names.empty()) throw DomainError("scene " + config.scene + " has no appliance columns");
  return scene;
}

/// The scene fixes the number of outputs.
RunConfig with_scene_shape(RunConfig config, const Scene& scene) {
  config.model.n_appliances = scene.names.size();
  config.validate();
  return config;
}

int cmd_synth(const CommonFlags& f, const std::string& spec_path, std::ostream& out) {
  SynthSpec spec = reference_household();
  json inputs = json::object();
  if (!spec_path.empty()) {
    const json j = read_json(spec_path, "synthetic spec");
    try {
      spec = synth_spec_from_json(j);
    } catch (const json::exception& e) {
      throw ConfigError("synthetic spec " + spec_path + ": " + e.what());
    }
    inputs["spec"] = checksum_entry(spec_path);
  }
  if (f.seed) spec.seed = *f.seed;
  const fs::path path = f.out.empty() ? fs::path("scene.csv") : fs::path(f.out);
  if (path.has_parent_path()) make_out_dir(path.parent_path());

  const SynthScene s = synth_generate(spec);
  Scene scene{s.aggregate, {}, s.appliances};
  for (const auto& m : s.meta) scene.names.push_back(m.label);
  write_scene_csv(path, scene);

  const json manifest = {{"toolkit_version", kToolkitVersion},
                         {"command", "synth"},
                         {"seed", spec.seed},
                         {"spec", to_json(spec)},
                         {"inputs", inputs},
                         {"outputs", {{path.filename().string(), file_checksum(path)}}}};
  write_text(path.string() + ".manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << path.string() << " (" << scene.aggregate.size() << " samples, " << scene.names.size()
      << " appliances)\n";
  return kExitOk;
}

int cmd_prepare(const CommonFlags& f, std::ostream& out, std::ostream& err) {
  RunConfig config = resolve(f);
  if (!f.input.empty()) config.data_dir = f.input;
  require_directory(config.data_dir, "data directory");
  const fs::path dir(config.out_dir);
  make_out_dir(dir);

  const HouseData house = load_house(config.data_dir);
  const Scene scene = scene_from_house(house, config, err);
  const fs::path scene_path = dir / "scene.csv";
  write_scene_csv(scene_path, scene);
  config.scene = scene_path.string();

  json inputs = json::object();
  inputs["labels.dat"] = checksum_entry(fs::path(config.data_dir) / "labels.dat");
  for (const auto& meta : house.channels) {
    const std::string name = "channel_" + std::to_string(meta.id) + ".dat";
    inputs[name] = checksum_entry(fs::path(config.data_dir) / name);
  }
  write_text(dir / "config.json", to_json(config).dump(2) + "\n");
  write_manifest(dir, "prepare", config, inputs, {"scene.csv", "config.json"});
  out << "wrote " << scene_path.string() << " (" << scene.aggregate.size() << " samples, " << scene.names.size()
      << " appliances)\n";
  return kExitOk;
}

int cmd_train(const CommonFlags& f, std::ostream& out, std::ostream& err) {
  RunConfig config = resolve(f);
  if (!f.input.empty()) config.scene = f.input;
  const Scene scene = load_scene(config);
  config = with_scene_shape(config, scene);
  const fs::path dir(config.out_dir);
  make_out_dir(dir);
  write_text(dir / "config.json", to_json(config).dump(2) + "\n");

  const PreparedWindows w = prepare_windows(scene, config);
  err << "training on " << w.train.size() << " windows (1 in " << config.train_stride << " per epoch), validating on "
      << w.val.size() << "\n";
  FitOptions options;
  options.threads = config.threads;
  options.epoch_stride = config.train_stride;
  options.on_epoch = [&](std::size_t epoch, const TrainReport& r) {
    char line[160];
    std::snprintf(line, sizeof line, "epoch %zu/%zu  train %.6f  val %.6f  %.1fs\n", epoch + 1, config.model.epochs,
                  r.train_loss.back(), r.val_loss.back(), r.epoch_seconds.back());
    err << line << std::flush;
  };
  const FitResult fitted = fit(w.train, w.val, config.model, options);

  write_text(dir / "loss.csv", loss_csv(fitted.report));
  checkpoint_save(fitted.params, config.model, dir / "model.ckpt");
  write_norm(dir / "norm.json", w);
  std::vector<std::string> files = {"config.json", "loss.csv", "model.ckpt", "norm.json"};
  for (auto& name : evaluate_into(dir, w, fitted.params, config, out)) files.push_back(std::move(name));

  double total = 0.0;
  for (double s : fitted.report.epoch_seconds) total += s;
  const json timing = {{"epoch_seconds", fitted.report.epoch_seconds},
                       {"ms_per_step", fitted.report.ms_per_step},
                       {"infer_ms_per_window", fitted.report.infer_ms_per_window},
                       {"total_seconds", total},
                       {"threads", config.threads}};
  write_text(dir / "timing.json", timing.dump(2) + "\n");
  write_manifest(dir, "train", config, {{"scene", checksum_entry(config.scene)}}, files);
  return kExitOk;
}

int cmd_eval(const CommonFlags& f, const std::string& manifest_path, const std::string& checkpoint_path,
             std::ostream& out) {
  RunConfig config;
  fs::path ckpt = checkpoint_path;
  fs::path run_dir;
  if (!manifest_path.empty()) {
    const json m = read_json(manifest_path, "manifest");
    try {
      config = run_config_from_json(m.at("config"));
    } catch (const json::exception& e) {
      throw InputError("manifest " + manifest_path + ": " + e.what());
    }
    run_dir = fs::path(manifest_path).parent_path();
    if (ckpt.empty()) ckpt = run_dir / "model.ckpt";
    if (m.contains("inputs") && m["inputs"].contains("scene")) {
      const std::string expected = m["inputs"]["scene"].value("fnv1a64", "");
      require_file(config.scene, "scene file");
      if (!expected.empty() && file_checksum(config.scene) != expected) {
        throw InputError("scene " + config.scene + " differs from the one recorded in the manifest");
      }
    }
    if (f.threads) config.threads = *f.threads;
    if (f.threshold) config.model.on_threshold = *f.threshold;
    config.out_dir = f.out.empty() ? (run_dir / "eval").string() : f.out;
  } else {
    config = resolve(f);
    if (ckpt.empty()) throw ConfigError("eval needs --manifest or --checkpoint");
    run_dir = ckpt.parent_path();
  }
  if (!f.input.empty()) config.scene = f.input;
  require_file(ckpt, "checkpoint");
  const Scene scene = load_scene(config);
  config = with_scene_shape(config, scene);
  const Checkpoint cp = checkpoint_load(ckpt, config.model);

  const fs::path dir(config.out_dir);
  make_out_dir(dir);
  write_text(dir / "config.json", to_json(config).dump(2) + "\n");
  const PreparedWindows w = prepare_windows(scene, config);
  std::vector<std::string> files = evaluate_into(dir, w, cp.params, config, out);
  files.push_back("config.json");
  write_manifest(dir, "eval", config, {{"scene", checksum_entry(config.scene)}, {"checkpoint", checksum_entry(ckpt)}},
                 files);
  return kExitOk;
}

int cmd_disaggregate(const CommonFlags& f, const std::string& checkpoint_path, const std::string& norm_path,
                     std::ostream& out) {
  if (checkpoint_path.empty()) throw ConfigError("disaggregate needs --checkpoint");
  if (f.input.empty()) throw ConfigError("disaggregate needs --input");
  require_file(checkpoint_path, "checkpoint");
  require_file(f.input, "aggregate file");
  const fs::path norm = norm_path.empty() ? fs::path(checkpoint_path).parent_path() / "norm.json" : fs::path(norm_path);
  const NormFile stats = read_norm(norm);
  const Checkpoint cp = checkpoint_load(checkpoint_path);
  if (stats.names.size() != cp.config.n_appliances) {
    throw InputError("normalization file " + norm.string() + " lists " + std::to_string(stats.names.size()) +
                     " appliances, checkpoint expects " + std::to_string(cp.config.n_appliances));
  }
  const std::size_t threads = f.threads.value_or(1);

  const Scene input = read_scene_csv(fs::path(f.input));
  const TimeSeries agg = normalize(input.aggregate, stats.aggregate);
  std::vector<TimeSeries> placeholders(cp.config.n_appliances, TimeSeries{agg.timestamps, std::vector<double>(agg.size(), 0.0)});
  const WindowBatch windows = make_windows(agg, placeholders, cp.config.window_len, 1);
  const TensorD est = predict(windows.inputs, cp.params, cp.config, threads);

  const fs::path dir = f.out.empty() ? fs::path("disaggregated") : fs::path(f.out);
  make_out_dir(dir);
  for (std::size_t a = 0; a < stats.names.size(); ++a) {
    std::string text = "timestamp,estimate_watts\n";
    for (std::size_t i = 0; i < windows.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, ",%.6f\n", denormalize_value(est(i, a), stats.appliances[a]));
      text += std::to_string(windows.timestamps[i]) + buf;
    }
    write_text(dir / ("estimate_" + stats.names[a] + ".csv"), text);
  }
  out << "wrote " << stats.names.size() << " estimate files for " << windows.size() << " windows to " << dir.string()
      << "\n";
  return kExitOk;
}

int cmd_gradcheck(const CommonFlags& f, std::size_t seeds, std::ostream& out) {
  GradCheckOptions options;
  options.seeds = seeds;
  if (f.seed) options.base_seed = *f.seed;
  bool ok = true;
  for (const GradCheckEntry& e : gradient_check_all(options)) {
    char line[128];
    std::snprintf(line, sizeof line, "%-14s %.3e  %8zu  %s\n", e.op.c_str(), e.max_rel_error, e.checked,
                  e.passed() ? "ok" : "FAIL");
    out << line;
    ok = ok && e.passed();
  }
  return ok ? kExitOk : kExitDiverged;
}

}  // namespace

Scene scene_from_house(const HouseData& house, const RunConfig& config, std::ostream& log) {
  const std::vector<std::string>& wanted = config.appliances.empty() ? standard_appliance_labels() : config.appliances;
  std::vector<int> mains;
  std::map<std::string, std::vector<int>> by_label;
  for (const auto& meta : house.channels) {
    if (meta.label == "mains") mains.push_back(meta.id);
    else by_label[meta.label].push_back(meta.id);
  }
  if (mains.empty()) throw DomainError("house has no mains channel");

  // One list for alignment: mains first, then each present label's channels.
  std::vector<TimeSeries> raw;
  for (int id : mains) raw.push_back(house.parsed.at(id).series);
  std::vector<std::pair<std::string, std::size_t>> groups;  // label, channel count
  for (const auto& label : wanted) {
    auto it = by_label.find(label);
    if (it == by_label.end()) {
      log << "note: no channel labeled '" << label << "'\n";
      continue;
    }
    for (int id : it->second) raw.push_back(house.parsed.at(id).series);
    groups.emplace_back(label, it->second.size());
  }
  if (groups.empty()) throw DomainError("house has none of the requested appliance channels");

  std::size_t gaps = 0;
  const std::vector<TimeSeries> grid = align(raw, config.raw_period_s, &gaps);
  if (gaps) log << "note: " << gaps << " samples zero-filled across outages\n";

  const auto sum = [&](std::size_t first, std::size_t count) {
    TimeSeries s = grid[first];
    for (std::size_t k = 1; k < count; ++k) {
      for (std::size_t i = 0; i < s.size(); ++i) s.values[i] += grid[first + k].values[i];
    }
    return downsample(s, config.downsample_factor, config.downsample);
  };

  Scene scene;
  scene.aggregate = sum(0, mains.size());
  std::size_t next = mains.size();
  for (const auto& [label, count] : groups) {
    scene.names.push_back(label);
    scene.appliances.push_back(sum(next, count));
    next += count;
  }
  return scene;
}

PreparedWindows prepare_windows(const Scene& scene, const RunConfig& config) {
  const std::size_t W = config.model.window_len;
  const SplitRanges split = split_train_test(scene.aggregate.size(), config.split_ratio, W);
  PreparedWindows w;
  w.names = scene.names;
  const TimeSeries agg_train = scene.aggregate.slice(split.train.begin, split.train.end);
  const TimeSeries agg_test = scene.aggregate.slice(split.test.begin, split.test.end);
  w.aggregate_stats = compute_stats(agg_train);

  std::vector<TimeSeries> train_apps, test_apps;
  for (const auto& a : scene.appliances) {
    const TimeSeries tr = a.slice(split.train.begin, split.train.end);
    const NormStats s = compute_stats(tr);
    w.appliance_stats.push_back(s);
    train_apps.push_back(normalize(tr, s));
    test_apps.push_back(normalize(a.slice(split.test.begin, split.test.end), s));
  }
  const TimeSeries agg_train_n = normalize(agg_train, w.aggregate_stats);
  const TimeSeries agg_test_n = normalize(agg_test, w.aggregate_stats);
  w.train = make_windows(agg_train_n, train_apps, W, 1);
  w.val = make_windows(agg_test_n, test_apps, W, config.val_stride);
  w.test = make_windows(agg_test_n, test_apps, W, 1);
  return w;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Appliance-level power disaggregation from an aggregate meter", "wattspell"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolkitVersion);

  CommonFlags f;
  std::string spec_path, manifest_path, checkpoint_path, norm_path;
  std::size_t seeds = 10;

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic scene CSV");
  add_common(synth, f);
  synth->add_option("--spec", spec_path, "JSON scene specification (default: reference household)");

  CLI::App* prepare = app.add_subcommand("prepare", "Convert a REDD house directory into a scene CSV");
  add_common(prepare, f);
  prepare->add_option("--input", f.input, "House directory (overrides data_dir)");

  CLI::App* train = app.add_subcommand("train", "Train on a scene and evaluate the held-out split");
  add_common(train, f);
  train->add_option("--epochs", f.epochs, "Override the epoch count")->check(CLI::PositiveNumber);
  train->add_option("--input", f.input, "Scene CSV (overrides scene)");

  CLI::App* eval = app.add_subcommand("eval", "Re-evaluate a trained model");
  add_common(eval, f);
  eval->add_option("--manifest", manifest_path, "Manifest of a train run");
  eval->add_option("--checkpoint", checkpoint_path, "Checkpoint file (default: next to the manifest)");
  eval->add_option("--input", f.input, "Scene CSV (overrides scene)");

  CLI::App* disagg = app.add_subcommand("disaggregate", "Estimate appliance power for an aggregate CSV");
  add_common(disagg, f);
  disagg->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();
  disagg->add_option("--input", f.input, "CSV with timestamp,aggregate columns")->required();
  disagg->add_option("--norm", norm_path, "Normalization file (default: norm.json next to the checkpoint)");

  CLI::App* grad = app.add_subcommand("gradcheck", "Finite-difference check of every backward pass");
  add_common(grad, f);
  grad->add_option("--seeds", seeds, "Random cases per operation")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolkitVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(f, spec_path, out);
    if (prepare->parsed()) return cmd_prepare(f, out, err);
    if (train->parsed()) return cmd_train(f, out, err);
    if (eval->parsed()) return cmd_eval(f, manifest_path, checkpoint_path, out);
    if (disagg->parsed()) return cmd_disaggregate(f, checkpoint_path, norm_path, out);
    if (grad->parsed()) return cmd_gradcheck(f, seeds, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TrainingError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace wspl
