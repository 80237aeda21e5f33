// Command-line front end: gen, train, eval, sweep, cuts.
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rmi/config.hpp"
#include "rmi/harness.hpp"
#include "rmi/io.hpp"

namespace {

struct Global {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string scale = "desk";
  std::size_t jobs = 0;
  std::string out;
};

rmi::RunConfig resolve_config(const Global& g, const std::string& fallback_json = {}) {
  rmi::RunConfig cfg = rmi::run_config_for(rmi::parse_scale(g.scale));
  if (!g.config.empty()) {
    cfg = rmi::load_run_config(g.config, cfg);
  } else if (!fallback_json.empty()) {
    cfg = rmi::load_run_config(fallback_json, cfg);
  }
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

std::vector<std::size_t> parse_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_sizes(const std::string& s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw std::invalid_argument("kernel size '" + item + "' is not of the form HxW");
    out.emplace_back(std::stoull(item.substr(0, x)), std::stoull(item.substr(x + 1)));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radar mutual-interference simulation, mitigation and evaluation"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Global g;
  bool print_default = false;
  app.add_option("--config", g.config, "JSON run configuration (missing keys keep the scale defaults)");
  app.add_option("--seed", g.seed, "Base seed (overrides the config)");
  app.add_option("--scale", g.scale, "Default parameter set")->check(CLI::IsMember({"full", "desk"}));
  app.add_option("--jobs", g.jobs, "Worker threads (default: RADAR_MITIG_THREADS or 1)");
  app.add_option("--out", g.out, "Output path");
  app.add_flag("--print-default-config", print_default, "Print the configuration for --scale and exit");

  auto* gen = app.add_subcommand("gen", "Simulate train/val/test datasets");
  std::string variant = "rdd", repr = "ris";
  std::size_t max_train_nI = 0;
  gen->add_option("--variant", variant, "rdd or rpd")->check(CLI::IsMember({"rdd", "rpd"}));
  gen->add_option("--repr", repr, "ris or lms")->check(CLI::IsMember({"ris", "lms"}));
  gen->add_option("--max-train-interferers", max_train_nI, "Cap N_I in the train/val splits");

  auto* trn = app.add_subcommand("train", "Train a denoiser on a generated dataset");
  std::string dataset, model = "model-a";
  std::string loss, scaler;
  std::optional<std::size_t> epochs, batch, max_steps, patience;
  std::optional<double> lr;
  trn->add_option("--dataset", dataset, "Dataset directory")->required();
  trn->add_option("--model", model, "Architecture preset");
  trn->add_option("--loss", loss, "mse, sinr or wmse");
  trn->add_option("--scaler", scaler, "zmuvs or css");
  trn->add_option("--epochs", epochs, "Maximum epochs");
  trn->add_option("--batch", batch, "Batch size");
  trn->add_option("--lr", lr, "Learning rate");
  trn->add_option("--patience", patience, "Early-stopping patience (epochs)");
  trn->add_option("--max-steps-per-epoch", max_steps, "Cap optimizer steps per epoch");

  auto* ev = app.add_subcommand("eval", "Monte-Carlo evaluation on the test split");
  std::string methods = "noisy,interfered,zeroing,rfmin,imat";
  ev->add_option("--dataset", dataset, "Dataset directory")->required();
  ev->add_option("--methods", methods, "Comma list: interfered,noisy,zeroing,rfmin,imat,cnn:<checkpoint>");

  auto* sw = app.add_subcommand("sweep", "Train and evaluate an architecture grid");
  std::string layers = "4,6,8", kernels = "2,8,16,32", sizes = "1x1,3x3,5x5,7x7";
  sw->add_option("--dataset", dataset, "Dataset directory")->required();
  sw->add_option("--layers", layers, "Comma list of L");
  sw->add_option("--kernels", kernels, "Comma list of K");
  sw->add_option("--sizes", sizes, "Comma list of HxW kernel sizes");
  sw->add_option("--epochs", epochs, "Maximum epochs");
  sw->add_option("--max-steps-per-epoch", max_steps, "Cap optimizer steps per epoch");

  auto* cu = app.add_subcommand("cuts", "Range and velocity cuts through one scenario");
  std::uint64_t scenario_seed = 1;
  double distance = 7.9, velocity = 5.5;
  bool keep_scenario = false;
  cu->add_option("--scenario", scenario_seed, "Scenario seed");
  cu->add_option("--methods", methods, "Comma list of methods");
  cu->add_option("-d,--distance", distance, "Cut distance (m)");
  cu->add_option("-v,--velocity", velocity, "Cut velocity (m/s)");
  cu->add_flag("--keep-scenario", keep_scenario, "Do not move the first object to (d, v)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (print_default) {
      std::cout << rmi::to_json(resolve_config(g)) << '\n';
      return 0;
    }
    const std::size_t jobs = rmi::resolve_jobs(g.jobs);
    auto training_overrides = [&](rmi::TrainingConfig t) {
      if (!loss.empty()) t.loss = rmi::parse_loss(loss);
      if (!scaler.empty()) t.scaler = rmi::parse_scaler(scaler);
      if (epochs) t.max_epochs = *epochs;
      if (batch) t.batch_size = *batch;
      if (lr) t.lr = *lr;
      if (patience) t.patience = *patience;
      if (max_steps) t.max_steps_per_epoch = *max_steps;
      if (g.seed) t.seed = *g.seed;
      return t;
    };

    if (*gen) {
      rmi::RunConfig cfg = resolve_config(g);
      if (max_train_nI) cfg.max_train_interferers = max_train_nI;
      const std::string out = g.out.empty() ? "dataset" : g.out;
      rmi::cmd_gen(cfg, out, rmi::parse_variant(variant), rmi::parse_repr(repr), jobs);
      std::cout << "wrote dataset to " << out << '\n';
    } else if (*trn) {
      const rmi::RunConfig cfg = resolve_config(g, dataset + "/config.json");
      const std::string out = g.out.empty() ? model + ".ckpt" : g.out;
      const auto r = rmi::cmd_train(dataset, rmi::preset(model), training_overrides(cfg.training), out);
      std::printf("best epoch %zu, validation loss %.6g; wrote %s\n", r.best_epoch, r.best_val_loss, out.c_str());
    } else if (*ev) {
      const std::string out = g.out.empty() ? "eval" : g.out;
      const auto report = rmi::cmd_eval(dataset, rmi::parse_methods(methods), jobs, out);
      std::cout << report.summary_csv();
    } else if (*sw) {
      const rmi::RunConfig cfg = resolve_config(g, dataset + "/config.json");
      rmi::SweepGrid grid;
      grid.layers = parse_list(layers);
      grid.kernels = parse_list(kernels);
      grid.kernel_sizes = parse_sizes(sizes);
      const std::string out = g.out.empty() ? "sweep.csv" : g.out;
      rmi::cmd_sweep(dataset, grid, training_overrides(cfg.training), jobs, out);
      std::cout << rmi::read_text_file(out);
    } else if (*cu) {
      const rmi::RunConfig cfg = resolve_config(g);
      const std::string out = g.out.empty() ? "cuts" : g.out;
      const auto t = rmi::cmd_cuts(cfg, scenario_seed, rmi::parse_methods(methods), distance, velocity, out,
                                   !keep_scenario);
      std::printf("range bin %zu, Doppler bin %zu; wrote %s\n", t.range_bin, t.doppler_bin, out.c_str());
    } else {
      std::cout << app.help();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
