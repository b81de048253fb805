// spdc: command-line front end for the source-design toolkit.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spdc/spdc.hpp"

namespace {

int fail(const std::string& kind, const std::vector<std::string>& messages, int code) {
  nlohmann::ordered_json err{{"error", kind}, {"messages", messages}};
  std::cerr << err.dump() << '\n';
  return code;
}

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument(std::string(what) + ": expected lo:hi");
  return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brightness, heralding and correlation design for narrow-band SPDC sources"};
  app.require_subcommand(1);
  app.fallthrough();

  spdc::CommandOptions opt;
  std::string format = "";
  unsigned threads = 0;
  std::string kappa_range, zeta_range;

  app.add_option("--config", opt.config_path, "Source design file")->check(CLI::ExistingFile);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv", "ndjson"}));
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  app.add_option("--quad-tol", opt.pipeline.quad_tol, "Relative quadrature tolerance")
      ->check(CLI::Range(1e-14, 1e-3));
  app.add_option("--basis-order", opt.pipeline.basis_order, "Radial orders P in the Laguerre-Gauss sums")
      ->check(CLI::Range(1, 400));

  auto* sfg = app.add_subcommand("sfg", "Focusing integral, SFG overlap and Q_SFG");
  auto* pairs = app.add_subcommand("pairs", "Effective linewidth and pair rate");
  auto* singles = app.add_subcommand("singles", "Singles rates and heralding efficiencies");
  auto* corr = app.add_subcommand("correlation", "Signal-idler correlation amplitude f(tau)");
  corr->add_option("--points", opt.correlation_points, "Minimum number of delay samples")->check(CLI::Range(2, 100000));
  auto* optimize = app.add_subcommand("optimize", "Maximize zeta_R |Upsilon|^2 over kappa and zeta_R");
  optimize->add_option("--kappa-range", kappa_range, "kappa bounds lo:hi (default -20:5)");
  optimize->add_option("--zeta-range", zeta_range, "zeta_R bounds lo:hi (default 0.02:5)");
  optimize->add_flag("--trace", opt.trace, "Emit every evaluated point instead of the optimum");
  auto* sweep = app.add_subcommand("sweep", "Full pipeline over one or two parameter axes");
  sweep->add_option("--sweep", opt.sweep_specs, "Axis as name=start:stop:count, e.g. kappa=-10:2:200")
      ->required()
      ->expected(1, 2);
  auto* validate = app.add_subcommand("validate", "Run the bundled oracle comparisons");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", {e.what()}, 64);
  }

  opt.pipeline.threads = threads == 0 ? spdc::default_thread_count() : threads;

  try {
    if (!kappa_range.empty()) {
      std::tie(opt.bounds.kappa_min, opt.bounds.kappa_max) = parse_range(kappa_range, "--kappa-range");
    }
    if (!zeta_range.empty()) {
      std::tie(opt.bounds.zeta_min, opt.bounds.zeta_max) = parse_range(zeta_range, "--zeta-range");
    }
    spdc::Table table;
    std::string fmt = format.empty() ? "table" : format;
    if (validate->parsed()) {
      table = spdc::cmd_validate(opt);
    } else {
      if (opt.config_path.empty()) return fail("usage", {"--config is required for this subcommand"}, 64);
      const auto cfg = spdc::load_run_config(opt.config_path);
      if (format.empty()) fmt = cfg.format;
      const auto design = spdc::resolve_design(cfg, opt.pipeline);
      if (sfg->parsed()) table = spdc::cmd_sfg(design, opt);
      else if (pairs->parsed()) table = spdc::cmd_pairs(design, opt);
      else if (singles->parsed()) table = spdc::cmd_singles(design, opt);
      else if (corr->parsed()) table = spdc::cmd_correlation(design, opt);
      else if (optimize->parsed()) table = spdc::cmd_optimize(design, opt);
      else if (sweep->parsed()) table = spdc::cmd_sweep(design, opt);
    }
    spdc::write_output(std::cout, table, fmt);
    if (validate->parsed()) {
      for (const auto& row : table.rows) {
        if (!std::get<bool>(row.back())) return 1;
      }
    }
  } catch (const spdc::ConfigError& e) {
    return fail("config", e.issues(), 2);
  } catch (const std::exception& e) {
    return fail("runtime", {e.what()}, 1);
  }
  return 0;
}
