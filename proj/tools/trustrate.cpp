// trustrate: generate corpora, rate services, compose labels, run the
// validation suites.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "trustrate/trustrate.hpp"

namespace cp = trustrate::campaign;

namespace {

cp::CampaignConfig load(const std::string& config, const std::string& out) {
  auto c = cp::load_config(config);
  if (!out.empty()) c.output_dir = out;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-box trust rating of AI services"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("--verbose,-v", verbose, "Print the label card after rating");

  std::string config, out;
  auto* gen = app.add_subcommand("generate", "Write the test corpora of a campaign");
  gen->add_option("--config", config, "Campaign config (JSON)")->required();
  gen->add_option("--out", out, "Output directory (overrides the config)");

  auto* rate = app.add_subcommand("rate", "Rate the configured service");
  rate->add_option("--config", config, "Campaign config (JSON)")->required();
  rate->add_option("--out", out, "Output directory (overrides the config)");

  std::string label_a, label_b;
  auto* compose = app.add_subcommand("compose", "Rating of a sequential composition of two translators");
  compose->add_option("first", label_a, "Label of the first service (BS, UCS, DSBS)")->required();
  compose->add_option("second", label_b, "Label of the second service")->required();

  std::string suite;
  auto* validate = app.add_subcommand("validate", "Run a validation suite on the builtin services");
  validate->add_option("suite", suite, "oracle | calibration")
      ->required()
      ->check(CLI::IsMember({"oracle", "calibration"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 64;
  }

  try {
    if (*gen) {
      cp::cmd_generate(load(config, out));
      return 0;
    }
    if (*rate) {
      const auto res = cp::cmd_rate(load(config, out), std::cout);
      if (verbose && res.card_path) std::cout << trustrate::io::read_file(res.card_path->string());
      return res.exit_code;
    }
    if (*compose) {
      std::cout << cp::cmd_compose(label_a, label_b) << "\n";
      return 0;
    }
    if (*validate) {
      const auto res = suite == "oracle" ? cp::oracle_suite() : cp::calibration_suite();
      cp::print_suite(res, std::cout);
      return res.passed ? 0 : 1;
    }
  } catch (const trustrate::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 64;
  } catch (const trustrate::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
