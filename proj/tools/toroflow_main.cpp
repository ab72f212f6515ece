#include <CLI11.hpp>
#include <cstdio>
#include <sstream>
#include <vector>

#include "toroflow/commands.hpp"

namespace {

std::vector<double> parse_eps_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size())
      throw toroflow::ConfigError("bad eps list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "toroflow: steady compressible Euler flows on asymmetric toroidal "
      "domains; exports level-set meshes and velocity samples, and verifies "
      "the defining identities"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  double psi_c = -1.0;  // sentinel: default to the shell's psi_max
  int ntheta = 0, nzeta = 0;
  std::string eps_csv = "0,0.1,0.3,0.6";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key-value config file");
    sub->add_option("--psi", psi_c, "psi level (default: shell psi_max)");
    sub->add_option("--ntheta", ntheta, "poloidal samples (default: config)");
    sub->add_option("--nzeta", nzeta, "toroidal samples (default: config)");
  };

  auto* s_surface =
      app.add_subcommand("surface", "export a psi level-set mesh as CSV");
  add_common(s_surface);
  s_surface->add_option("--out", out_path, "output path")
      ->default_val("surface.csv");

  auto* s_field = app.add_subcommand(
      "field", "export exact vs first-order velocity samples per eps");
  add_common(s_field);
  s_field->add_option("--eps", eps_csv, "comma-separated eps list");
  s_field->add_option("--out", out_path, "output base path")
      ->default_val("field");

  auto* s_verify =
      app.add_subcommand("verify", "run the verification suite");
  s_verify->add_option("--config", config_path, "key-value config file");
  s_verify->add_option("--out", out_path, "report path (JSON lines)")
      ->default_val("report.jsonl");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const toroflow::RunConfig cfg =
        config_path.empty() ? toroflow::RunConfig{}
                            : toroflow::RunConfig::from_file(config_path);
    if (psi_c < 0.0) psi_c = cfg.psi_max;
    if (s_surface->parsed())
      return toroflow::cmd_surface(cfg, psi_c, ntheta, nzeta, out_path);
    if (s_field->parsed())
      return toroflow::cmd_field(cfg, psi_c, parse_eps_list(eps_csv), out_path,
                                 ntheta, nzeta);
    return toroflow::cmd_verify(cfg, out_path);
  } catch (const toroflow::NonConvergence& e) {
    std::fprintf(stderr, "error: %s (residual %.3e after %d iterations)\n",
                 e.what(), e.residual, e.iterations);
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
