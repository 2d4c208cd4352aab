#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "prevkit/report.hpp"

namespace {

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-population prevalence estimation with an imperfect "
               "diagnostic test"};
  app.require_subcommand(1);
  app.set_config("--config")->configurable(false);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::int64_t reps = 5000;
  std::string out_path = "-";
  std::string format = "csv";
  unsigned threads = 1;
  app.add_option("--seed", seed, "master RNG seed")
      ->envname("PREVKIT_SEED");
  app.add_option("--reps", reps, "replications per scenario");
  app.add_option("--out", out_path, "output file path, '-' for stdout");
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker threads");

  // estimate: one-shot analysis of a single observed sample
  auto* est_cmd = app.add_subcommand("estimate", "estimate prevalence from one sample");
  std::int64_t e_n = 0, e_pos = 0, e_pop = 0;
  double e_se = 1.0, e_sp = 1.0, e_alpha = 0.05;
  bool e_text = false;
  est_cmd->add_option("--n", e_n, "sample size")->required();
  est_cmd->add_option("--n-pos", e_pos, "positive count")->required();
  est_cmd->add_option("--pop-size", e_pop, "population size")->required();
  est_cmd->add_option("--se", e_se, "test sensitivity")->check(CLI::Range(0.0, 1.0));
  est_cmd->add_option("--sp", e_sp, "test specificity")->check(CLI::Range(0.0, 1.0));
  est_cmd->add_option("--alpha", e_alpha, "1 - nominal level")->check(CLI::Range(0.0, 1.0));
  est_cmd->add_flag("--text", e_text, "human-readable output instead of CSV");

  // scenario: Monte Carlo summary of one simulation cell
  auto* scen_cmd = app.add_subcommand("scenario", "run one simulation cell");
  std::int64_t s_pop = 0;
  double s_pi_c = 0.0, s_phi = 0.0, s_se = 1.0, s_sp = 1.0, s_alpha = 0.05;
  std::string s_emit;
  scen_cmd->add_option("--pop-size", s_pop, "population size")->required();
  scen_cmd->add_option("--pi-c", s_pi_c, "true prevalence")->required();
  scen_cmd->add_option("--phi", s_phi, "sampling rate")->required();
  scen_cmd->add_option("--se", s_se, "test sensitivity")->check(CLI::Range(0.0, 1.0));
  scen_cmd->add_option("--sp", s_sp, "test specificity")->check(CLI::Range(0.0, 1.0));
  scen_cmd->add_option("--alpha", s_alpha, "1 - nominal level")->check(CLI::Range(0.0, 1.0));
  scen_cmd->add_option("--emit-replications", s_emit,
                       "write per-replication CSV to this path");

  // tables: the full reference scenario grid
  auto* tab_cmd = app.add_subcommand("tables", "run the full scenario grid");

  // figure1: standard-error sweep over population size
  auto* fig_cmd = app.add_subcommand("figure1", "standard-error sweep over N");
  double f_se = 0.9, f_sp = 0.95;
  std::int64_t f_step = 20, f_min = 120, f_max = 2000, f_n = 100;
  double f_pi_c = 0.2;
  std::string f_svg;
  fig_cmd->add_option("--se", f_se, "test sensitivity")->check(CLI::Range(0.0, 1.0));
  fig_cmd->add_option("--sp", f_sp, "test specificity")->check(CLI::Range(0.0, 1.0));
  fig_cmd->add_option("--step", f_step, "population grid step");
  fig_cmd->add_option("--n-min", f_min, "smallest population size");
  fig_cmd->add_option("--n-max", f_max, "largest population size");
  fig_cmd->add_option("--sample-size", f_n, "fixed sample size");
  fig_cmd->add_option("--pi-c", f_pi_c, "true prevalence");
  fig_cmd->add_option("--svg", f_svg, "also write an SVG line chart here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (est_cmd->parsed()) {
      const prevkit::TestKit kit(e_se, e_sp);
      const prevkit::SampleSummary sample(e_pop, e_n, e_pos);
      const prevkit::PrevalenceEstimate est = prevkit::estimate(sample, kit);
      const prevkit::Interval wald =
          prevkit::wald_ci(est.pi_c_hat, est.se_pi_c, e_alpha);
      const prevkit::Interval cred =
          prevkit::credible_misclass(sample, kit, e_alpha);
      using prevkit::detail::fmt6;
      std::string body;
      if (e_text) {
        body += "test positivity:        " + fmt6(est.pi_hat) + "\n";
        body += "corrected prevalence:   " + fmt6(est.pi_c_hat) + "\n";
        body += "standard error:         " + fmt6(est.se_pi_c) + "\n";
        body += "Wald interval:          [" + fmt6(wald.lower) + ", " +
                fmt6(wald.upper) + "]\n";
        body += "credible interval:      [" + fmt6(cred.lower) + ", " +
                fmt6(cred.upper) + "]\n";
      } else if (format == "json") {
        nlohmann::json j = {{"pi_hat", est.pi_hat},
                            {"pi_c_hat", est.pi_c_hat},
                            {"se_pi_c", est.se_pi_c},
                            {"wald_lo", wald.lower},
                            {"wald_hi", wald.upper},
                            {"cred_lo", cred.lower},
                            {"cred_hi", cred.upper}};
        body = j.dump(2) + "\n";
      } else {
        body = "pi_hat,pi_c_hat,se_pi_c,wald_lo,wald_hi,cred_lo,cred_hi\n";
        body += fmt6(est.pi_hat);
        body += ',' + fmt6(est.pi_c_hat);
        body += ',' + fmt6(est.se_pi_c);
        body += ',' + fmt6(wald.lower);
        body += ',' + fmt6(wald.upper);
        body += ',' + fmt6(cred.lower);
        body += ',' + fmt6(cred.upper);
        body += '\n';
      }
      write_output(out_path, body);
    } else if (scen_cmd->parsed()) {
      const prevkit::ScenarioConfig cfg(s_pop, s_pi_c, s_phi,
                                        prevkit::TestKit(s_se, s_sp), reps,
                                        s_alpha, seed);
      const auto rows = prevkit::run_replications(cfg, threads);
      if (!s_emit.empty())
        write_output(s_emit, prevkit::replications_to_csv(rows));
      const prevkit::ScenarioSummary summary = prevkit::summarize(cfg, rows);
      const std::vector<prevkit::ScenarioSummary> one{summary};
      write_output(out_path, format == "json" ? prevkit::summaries_to_json(one)
                                              : prevkit::summaries_to_csv(one));
    } else if (tab_cmd->parsed()) {
      if (out_path == "-" && !app.count("--out")) out_path = "tables.csv";
      const auto rows =
          prevkit::run_table_grid(prevkit::reference_grid(reps, seed), threads);
      write_output(out_path, format == "json" ? prevkit::summaries_to_json(rows)
                                              : prevkit::summaries_to_csv(rows));
    } else if (fig_cmd->parsed()) {
      prevkit::SweepConfig sweep;
      sweep.kit = prevkit::TestKit(f_se, f_sp);
      sweep.n_min = f_min;
      sweep.n_max = f_max;
      sweep.n_step = f_step;
      sweep.sample_size = f_n;
      sweep.true_prevalence = f_pi_c;
      sweep.replications = reps;
      sweep.seed = seed;
      const auto rows = prevkit::run_figure1_sweep(sweep, threads);
      write_output(out_path, format == "json" ? prevkit::sweep_to_json(rows)
                                              : prevkit::sweep_to_csv(rows));
      if (!f_svg.empty()) write_output(f_svg, prevkit::sweep_to_svg(rows));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
