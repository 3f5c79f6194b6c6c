#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "rsc/error.hpp"
#include "rsc/log.hpp"
#include "rsc/parallel.hpp"
#include "rsc/random.hpp"
#include "rsc/stats.hpp"

namespace rsc::cli {

namespace fs = std::filesystem;

namespace {

Dataset load_source(const ExperimentConfig& c) {
  c.validate_data_source();
  if (c.data) return load_dataset(*c.data, CsvSchema{c.class_column});
  return gen_synthetic(c.synthetic->spec, c.synthetic->n);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  return f;
}

void finish(std::ofstream& f, const fs::path& path) {
  f.flush();
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

std::string param_text(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "-"; }

std::size_t member_count(const ModelSpec& s) {
  return s.kind == ModelKind::rsc || s.kind == ModelKind::majority ? 1 : s.members;
}

std::size_t sphere_total(const FittedModel& m) {
  if (const auto* s = std::get_if<SphereCoverModel>(&m.model)) return s->spheres.size();
  if (const auto* e = std::get_if<EnsembleModel>(&m.model)) {
    std::size_t total = 0;
    for (const auto& member : e->members) total += member.spheres.size();
    return total;
  }
  return 0;
}

}  // namespace

RunSummary summarize(const std::vector<double>& accuracies) {
  RunSummary s;
  if (accuracies.empty()) return s;
  const double n = static_cast<double>(accuracies.size());
  s.mean = std::accumulate(accuracies.begin(), accuracies.end(), 0.0) / n;
  if (accuracies.size() > 1) {
    double ss = 0.0;
    for (double a : accuracies) ss += (a - s.mean) * (a - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

ModelSpec resolve_model(const ModelEntry& entry, const Dataset& train, std::size_t cv_folds,
                        std::uint64_t seed, std::size_t threads) {
  ModelSpec spec;
  spec.kind = entry.kind;
  spec.members = entry.members;
  spec.filter = entry.filter;
  spec.alpha = entry.alpha.value_or(1);
  if (entry.kind == ModelKind::majority) return spec;

  const auto k = std::min(cv_folds, train.size());
  const auto alpha_grid = entry.alpha_grid.empty() ? default_alpha_grid() : entry.alpha_grid;
  if (entry.kind == ModelKind::arsse) {
    const auto width = entry.filter ? std::min(entry.filter->k, train.attribute_count()) : train.attribute_count();
    std::vector<std::size_t> kappa_grid;
    if (entry.kappa) {
      kappa_grid = {*entry.kappa};
    } else if (!entry.kappa_grid.empty()) {
      kappa_grid = entry.kappa_grid;
    } else {
      kappa_grid = default_kappa_grid(width, entry.filter.has_value());
    }
    if (!entry.kappa) {
      std::erase_if(kappa_grid, [width](std::size_t k) { return k < 1 || k > width; });
      if (kappa_grid.empty()) throw ParseError("kappa grid has no value in [1, " + std::to_string(width) + "]");
    }
    std::vector<int> alphas = entry.alpha ? std::vector<int>{*entry.alpha} : alpha_grid;
    const auto chosen = select_kappa_alpha(train, kappa_grid, alphas, entry.members, k,
                                           derive_seed(seed, "select"), entry.filter, threads);
    spec.kappa = chosen.kappa;
    spec.alpha = chosen.alpha;
    return spec;
  }
  if (!entry.alpha) {
    spec.alpha = select_alpha(train, alpha_grid, k, derive_seed(seed, "select"), entry.filter, threads);
  }
  return spec;
}

void cmd_train(const ExperimentConfig& c, std::ostream& out) {
  c.validate_models();
  if (c.models.size() != 1) throw ParseError("train needs exactly one model spec");
  const auto data = load_source(c);
  const auto& entry = c.models.front();
  const auto spec = resolve_model(entry, data, c.cv_folds, c.seed, c.threads);
  const auto model = fit(spec, data, derive_seed(c.seed, "model"), c.threads);
  double train_acc = 0.0;
  try {
    train_acc = accuracy(model, data);
  } catch (const UnusableModelError&) {
    warn("trained model retained no spheres");
  }
  ensure_dir(c.out);
  const auto path = c.out / "model.json";
  save_model(path, model);
  out << "scheme=" << to_string(spec.kind) << " alpha=" << spec.alpha << " kappa=" << param_text(spec.kappa)
      << " L=" << member_count(spec)
      << " spheres=" << sphere_total(model) << " train_accuracy=" << format_double(train_acc)
      << " model=" << path.string() << '\n';
}

void cmd_predict(const ExperimentConfig& c, std::ostream& out) {
  if (!c.model_file) throw ParseError("predict needs --model");
  if (!c.data) throw ParseError("predict needs --data");
  const auto model = load_model(*c.model_file);

  std::ifstream probe(*c.data);
  if (!probe) throw IoError("cannot open dataset '" + c.data->string() + "'");
  std::string header;
  std::getline(probe, header);
  const auto columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
  probe.close();

  Dataset data;
  bool labeled = false;
  if (columns == model.attributes.size()) {
    data = load_unlabeled(*c.data);
  } else if (columns == model.attributes.size() + 1) {
    data = load_dataset(*c.data, CsvSchema{c.class_column});
    labeled = true;
  } else {
    throw SchemaError("data has " + std::to_string(columns) + " columns; model expects " +
                      std::to_string(model.attributes.size()) + " attributes (plus an optional class)");
  }
  if (data.attributes() != model.attributes) throw SchemaError("data attribute names differ from the model's");

  ensure_dir(c.out);
  const auto path = c.out / "predictions.csv";
  auto f = open_out(path);
  const bool ensemble = std::holds_alternative<EnsembleModel>(model.model);
  f << "index,predicted";
  if (labeled) f << ",actual";
  if (ensemble) f << ",tally";
  f << '\n';
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = predict(model, data.row(i), i);
    const auto& label = model.class_labels[p.label];
    f << i << ',' << label;
    if (labeled) {
      f << ',' << data.label_name(i);
      if (label == data.label_name(i)) ++correct;
    }
    if (ensemble) {
      f << ',';
      for (std::size_t k = 0; k < p.tally->counts.size(); ++k) {
        f << (k ? "|" : "") << model.class_labels[k] << ':' << p.tally->counts[k];
      }
    }
    f << '\n';
  }
  if (labeled) {
    const double acc = static_cast<double>(correct) / static_cast<double>(data.size());
    f << "# accuracy=" << format_double(acc) << '\n';
    out << "accuracy=" << format_double(acc) << '\n';
  }
  finish(f, path);
  out << "predictions=" << path.string() << '\n';
}

void cmd_experiment(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  c.validate_models();
  const auto data = load_source(c);
  ensure_dir(c.out);
  ensure_dir(c.out / "models");
  const auto results_path = c.out / "results.csv";
  const auto params_path = c.out / "params.csv";
  auto results = open_out(results_path);
  auto params = open_out(params_path);
  results << "run";
  for (const auto& m : c.models) results << ',' << m.name;
  results << '\n';
  params << "run,model,scheme,alpha,kappa,L\n";

  const auto model_count = c.models.size();
  std::vector<std::vector<double>> acc(model_count, std::vector<double>(c.runs, 0.0));
  std::vector<std::vector<ModelSpec>> chosen(c.runs, std::vector<ModelSpec>(model_count));
  std::vector<std::vector<double>> seconds(c.runs, std::vector<double>(model_count, 0.0));

  // Runs are independent; each run's outputs depend only on its derived seed.
  std::size_t completed = 0;
  try {
    parallel_for(c.runs, c.threads, [&](std::size_t r) {
      const auto run_seed = derive_seed(c.seed, "run", r);
      const auto parts = split(data, c.test_fraction, run_seed);
      for (std::size_t m = 0; m < model_count; ++m) {
        const auto start = std::chrono::steady_clock::now();
        const auto spec = resolve_model(c.models[m], parts.train, c.cv_folds, run_seed, 1);
        const auto model = fit(spec, parts.train, derive_seed(run_seed, "model"), 1);
        double a = 0.0;
        try {
          a = accuracy(model, parts.test);
        } catch (const UnusableModelError&) {
          warn("run " + std::to_string(r + 1) + ", model " + c.models[m].name + ": no spheres retained");
        }
        acc[m][r] = a;
        chosen[r][m] = spec;
        save_model(c.out / "models" / ("run" + std::to_string(r + 1) + "_" + c.models[m].name + ".json"), model);
        seconds[r][m] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
    });
    completed = c.runs;
  } catch (const std::exception& e) {
    results << "# FAILED: " << e.what() << '\n';
    results.flush();
    throw;
  }

  for (std::size_t r = 0; r < completed; ++r) {
    results << (r + 1);
    for (std::size_t m = 0; m < model_count; ++m) results << ',' << format_double(acc[m][r]);
    results << '\n';
    for (std::size_t m = 0; m < model_count; ++m) {
      const auto& s = chosen[r][m];
      params << (r + 1) << ',' << c.models[m].name << ',' << to_string(s.kind) << ',' << s.alpha << ','
             << param_text(s.kappa) << ',' << member_count(s) << '\n';
      err << "run " << (r + 1) << " " << c.models[m].name << ": " << std::fixed << std::setprecision(3)
          << seconds[r][m] << " s" << std::defaultfloat << '\n';
    }
  }
  finish(results, results_path);
  finish(params, params_path);

  const auto summary_path = c.out / "summary.csv";
  auto summary = open_out(summary_path);
  summary << "model,runs,mean,sd\n";
  for (std::size_t m = 0; m < model_count; ++m) {
    const auto s = summarize(acc[m]);
    summary << c.models[m].name << ',' << c.runs << ',' << format_double(s.mean) << ',' << format_double(s.sd)
            << '\n';
    out << c.models[m].name << ": mean=" << format_double(s.mean) << " sd=" << format_double(s.sd) << '\n';
  }
  finish(summary, summary_path);
}

void cmd_bv(const ExperimentConfig& c, std::ostream& out) {
  c.validate_models();
  const auto data = load_source(c);
  BVOptions options;
  options.replicates = c.bv_replicates;
  options.boot_size = c.bv_boot_size;
  options.test_fraction = c.test_fraction;
  options.threads = c.threads;

  // Parameters left open are selected on the bootstrap pool, never on the test points.
  const auto pool_idx = split_indices(data, c.test_fraction, derive_seed(c.seed, "bv-split")).second;
  const auto pool = data.subset(pool_idx);

  std::vector<std::pair<std::string, BVReport>> reports;
  for (const auto& entry : c.models) {
    const auto spec = resolve_model(entry, pool, c.cv_folds, c.seed, c.threads);
    reports.emplace_back(entry.name, bv_decompose(data, spec, options, c.seed));
  }
  ensure_dir(c.out);
  const auto path = c.out / "bv.csv";
  auto f = open_out(path);
  write_bv_reports(f, reports);
  finish(f, path);
  write_bv_reports(out, reports);
}

void cmd_compare(const ExperimentConfig& c, std::ostream& out) {
  if (!c.matrix) throw ParseError("compare needs --matrix");
  const auto m = load_accuracy_matrix(*c.matrix);
  const auto summary = friedman_test(m);
  double cd = 0.0;
  try {
    cd = nemenyi_cd(m.cols(), m.rows(), c.level);
  } catch (const std::out_of_range& e) {
    throw ParseError(e.what());
  }
  ensure_dir(c.out);
  const auto report_path = c.out / "ranks.txt";
  auto report = open_out(report_path);
  write_rank_report(report, summary, cd, c.level);
  finish(report, report_path);
  render_cd_diagram(summary, cd, c.out / "cd.svg");
  write_rank_report(out, summary, cd, c.level);
}

void cmd_filter(const ExperimentConfig& c, std::ostream& out) {
  if (!c.filter) throw ParseError("filter needs --filter <chi2|infogain|relief>");
  const auto data = load_source(c);
  const auto normalized = normalize(data).first;
  AttributeScores scores;
  switch (c.filter->method) {
    case FilterMethod::chi2:
      scores = chi2_scores(normalized, c.filter->bins);
      break;
    case FilterMethod::infogain:
      scores = infogain_scores(normalized, c.filter->bins);
      break;
    case FilterMethod::relief:
      scores = relief_scores(normalized, std::min(c.filter->relief_samples, normalized.size()),
                             derive_seed(c.seed, "filter"));
      break;
  }
  const auto k = c.filter_k_given ? c.filter->k : data.attribute_count();
  const auto selected = select_top_k(scores, k);

  ensure_dir(c.out);
  const auto scores_path = c.out / "scores.csv";
  auto sf = open_out(scores_path);
  write_scores(sf, scores, data.attributes());
  finish(sf, scores_path);
  const auto filtered_path = c.out / "filtered.csv";
  save_dataset(filtered_path, data.project(selected));
  out << "method=" << to_string(c.filter->method) << " k=" << k << " scores=" << scores_path.string()
      << " filtered=" << filtered_path.string() << '\n';
}

void cmd_gen(const ExperimentConfig& c, std::ostream& out) {
  if (!c.synthetic) throw ParseError("gen needs --family");
  const auto d = gen_synthetic(c.synthetic->spec, c.synthetic->n);
  ensure_dir(c.out);
  const auto path = c.out / (std::string(to_string(c.synthetic->spec.family)) + ".csv");
  save_dataset(path, d);
  out << "wrote " << d.size() << " instances to " << path.string() << '\n';
}

// ---------------------------------------------------------------------------

namespace {

/// Flag values; each one, when given, overrides the matching config key.
struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;

  std::optional<std::string> data;
  std::optional<int> class_column;
  std::optional<std::string> family;
  std::optional<std::size_t> n;
  std::optional<std::size_t> dimensions;
  std::optional<std::uint64_t> synthetic_seed;

  std::optional<std::string> name;
  std::optional<std::string> scheme;
  std::optional<int> alpha;
  std::vector<int> alpha_grid;
  std::optional<std::size_t> kappa;
  std::vector<std::size_t> kappa_grid;
  std::optional<std::size_t> members;

  std::optional<std::string> filter;
  std::optional<std::size_t> bins;
  std::optional<std::size_t> k;
  std::optional<std::size_t> relief_samples;

  std::optional<std::size_t> runs;
  std::optional<double> test_fraction;
  std::optional<std::size_t> cv_folds;
  std::optional<std::size_t> s;
  std::optional<std::size_t> boot_size;

  std::optional<std::string> matrix;
  std::optional<double> level;
  std::optional<std::string> model_file;
};

void add_global_flags(CLI::App& app, Flags& f) {
  app.add_option("--seed", f.seed, "Master seed (u64)");
  app.add_option("--config", f.config, "Config file (JSON)");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--threads", f.threads, "Worker threads");
}

void add_data_flags(CLI::App& app, Flags& f) {
  app.add_option("--data", f.data, "Dataset CSV");
  app.add_option("--class-column", f.class_column, "Class column index (negative counts from the end)");
  app.add_option("--synthetic,--family", f.family, "Synthetic family: twonorm or ringnorm");
  app.add_option("--n", f.n, "Synthetic instance count");
  app.add_option("--dimensions", f.dimensions, "Synthetic dimensions");
  app.add_option("--synthetic-seed", f.synthetic_seed, "Synthetic generator seed (defaults to --seed)");
}

void add_model_flags(CLI::App& app, Flags& f) {
  app.add_option("--name", f.name, "Model name");
  app.add_option("--scheme", f.scheme, "rsc, arse, abrse, arsse or majority");
  app.add_option("--alpha", f.alpha, "Fixed alpha (omit to select by CV)");
  app.add_option("--alpha-grid", f.alpha_grid, "Alpha grid for selection")->delimiter(',');
  app.add_option("--kappa", f.kappa, "Fixed kappa for arsse (omit to select by CV)");
  app.add_option("--kappa-grid", f.kappa_grid, "Kappa grid for selection")->delimiter(',');
  app.add_option("--L", f.members, "Ensemble size");
}

void add_filter_flags(CLI::App& app, Flags& f) {
  app.add_option("--filter", f.filter, "Attribute filter: chi2, infogain or relief");
  app.add_option("--bins", f.bins, "Equal-width bins for chi2 / infogain");
  app.add_option("--k", f.k, "Attributes kept by the filter");
  app.add_option("--relief-samples", f.relief_samples, "Relief sample count");
}

void add_protocol_flags(CLI::App& app, Flags& f) {
  app.add_option("--runs", f.runs, "Independent train/test runs");
  app.add_option("--test-fraction", f.test_fraction, "Held-out fraction");
  app.add_option("--cv-folds", f.cv_folds, "Folds for model selection");
}

json flags_to_json(const Flags& f, const json& base, bool filter_is_model_level) {
  json o = json::object();
  if (f.seed) o["seed"] = *f.seed;
  if (f.out) o["out"] = *f.out;
  if (f.threads) o["threads"] = *f.threads;
  if (f.data) o["data"] = *f.data;
  if (f.class_column) o["class_column"] = *f.class_column;
  if (f.family || f.n || f.dimensions || f.synthetic_seed) {
    json s = json::object();
    if (f.family) s["family"] = *f.family;
    if (f.n) s["n"] = *f.n;
    if (f.dimensions) s["dimensions"] = *f.dimensions;
    if (f.synthetic_seed) s["seed"] = *f.synthetic_seed;
    o["synthetic"] = s;
  }

  json filter = json::object();
  if (f.filter) filter["method"] = *f.filter;
  if (f.bins) filter["bins"] = *f.bins;
  if (f.k) filter["k"] = *f.k;
  if (f.relief_samples) filter["relief_samples"] = *f.relief_samples;

  json model = json::object();
  if (f.name) model["name"] = *f.name;
  if (f.scheme) model["scheme"] = *f.scheme;
  if (f.alpha) model["alpha"] = *f.alpha;
  if (!f.alpha_grid.empty()) model["alpha_grid"] = f.alpha_grid;
  if (f.kappa) model["kappa"] = *f.kappa;
  if (!f.kappa_grid.empty()) model["kappa_grid"] = f.kappa_grid;
  if (f.members) model["L"] = *f.members;
  if (filter_is_model_level && !filter.empty()) model["filter"] = filter;
  if (!filter_is_model_level && !filter.empty()) o["filter"] = filter;

  if (!model.empty()) {
    if (base.contains("models")) {
      json list = base.at("models");
      for (auto& m : list) merge_config(m, model);
      o["models"] = list;
    } else {
      o["model"] = model;
    }
  }

  if (f.runs) o["runs"] = *f.runs;
  if (f.test_fraction) o["test_fraction"] = *f.test_fraction;
  if (f.cv_folds) o["cv_folds"] = *f.cv_folds;
  if (f.s || f.boot_size) {
    json bv = json::object();
    if (f.s) bv["s"] = *f.s;
    if (f.boot_size) bv["boot_size"] = *f.boot_size;
    o["bv"] = bv;
  }
  if (f.matrix) o["matrix"] = *f.matrix;
  if (f.level) o["level"] = *f.level;
  if (f.model_file) o["model_file"] = *f.model_file;
  return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomised sphere cover classifiers, ensembles and comparison statistics", "rsc"};
  app.require_subcommand(1);
  Flags f;
  add_global_flags(app, f);

  auto* train = app.add_subcommand("train", "Fit one model and write model.json");
  auto* predict_cmd = app.add_subcommand("predict", "Label a CSV with a saved model");
  auto* experiment = app.add_subcommand("experiment", "Repeated train/test runs over one or more models");
  auto* bv = app.add_subcommand("bv", "Bias/variance decomposition under 0/1 loss");
  auto* compare = app.add_subcommand("compare", "Friedman test, Nemenyi CD and CD diagram");
  auto* filter = app.add_subcommand("filter", "Rank attributes and write the top-k projection");
  auto* gen = app.add_subcommand("gen", "Generate twonorm or ringnorm data");

  for (auto* sub : {train, experiment, bv, filter}) add_data_flags(*sub, f);
  for (auto* sub : {train, experiment, bv}) {
    add_model_flags(*sub, f);
    add_filter_flags(*sub, f);
    add_protocol_flags(*sub, f);
  }
  add_filter_flags(*filter, f);
  bv->add_option("--s", f.s, "Bootstrap replicates");
  bv->add_option("--boot-size", f.boot_size, "Bootstrap sample size");
  predict_cmd->add_option("--model", f.model_file, "Model JSON from train");
  predict_cmd->add_option("--data", f.data, "CSV to label");
  predict_cmd->add_option("--class-column", f.class_column, "Class column of a labeled CSV");
  compare->add_option("--matrix", f.matrix, "Accuracy matrix CSV");
  compare->add_option("--level", f.level, "Significance level: 0.05 or 0.10");
  add_data_flags(*gen, f);
  for (auto* sub : app.get_subcommands({})) add_global_flags(*sub, f);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    json doc = f.config ? load_config_file(*f.config) : json::object();
    merge_config(doc, flags_to_json(f, doc, /*filter_is_model_level=*/!filter->parsed()));
    if (gen->parsed() && !doc.contains("synthetic")) throw ParseError("gen needs --family");
    auto config = parse_config(doc);

    if (train->parsed()) {
      cmd_train(config, out);
    } else if (predict_cmd->parsed()) {
      cmd_predict(config, out);
    } else if (experiment->parsed()) {
      cmd_experiment(config, out, err);
    } else if (bv->parsed()) {
      cmd_bv(config, out);
    } else if (compare->parsed()) {
      cmd_compare(config, out);
    } else if (filter->parsed()) {
      cmd_filter(config, out);
    } else if (gen->parsed()) {
      cmd_gen(config, out);
    }
    return kOk;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kSchemaError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace rsc::cli
