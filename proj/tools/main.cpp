#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "uogp/errors.hpp"
#include "uogp/version.hpp"

namespace {

int exit_code_for(const uogp::Error& error) {
  switch (error.kind()) {
    case uogp::ErrorKind::Numerical:
      return 3;
    case uogp::ErrorKind::Fixture:
      return 4;
    case uogp::ErrorKind::Validation:
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace uogp;
  using namespace uogp::cli;

  CLI::App app{
      "uogp: rigorous union-bound thresholds for ultrametric overlap "
      "structures of the symmetric binary perceptron"};
  app.set_version_flag("--version,-V", std::string(kVersion));
  app.require_subcommand(1);
  app.footer(
      "exit codes: 0 success, 2 validation error, 3 numerical failure,\n"
      "            4 fixture mismatch\n"
      "environment: UOGP_MAX_WORKERS caps the worker thread count");

  const std::map<std::string, OverlapMode> mode_names{
      {"literal", OverlapMode::literal},
      {"level-consistent", OverlapMode::level_consistent}};
  const std::map<std::string, Refinement> refine_names{
      {"none", Refinement::none},
      {"nelder-mead", Refinement::nelder_mead},
      {"coordinate", Refinement::coordinate}};

  OverlapMode mode = OverlapMode::level_consistent;
  OutputOptions output;

  auto add_output_options = [&](CLI::App* cmd) {
    cmd->add_option("--out", output.out, "write results to this file");
    cmd->add_option("--format", output.format,
                    "output file format (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_mode_option = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode,
                    "sign-overlap target rule for depth >= 2 chains "
                    "(default level-consistent)")
        ->transform(CLI::CheckedTransformer(mode_names, CLI::ignore_case));
  };

  // table
  int table_id = 0;
  SearchOptions search;
  auto* table_cmd = app.add_subcommand(
      "table",
      "recompute a result table and report deltas against the embedded "
      "reference values");
  table_cmd->add_option("id", table_id, "table id (2..18)")->required();
  table_cmd
      ->add_option("--grid", search.grid,
                   "grid points per overlap-gap exponent")
      ->capture_default_str();
  table_cmd
      ->add_option("--refine", search.refine,
                   "refinement after the grid scan (default nelder-mead)")
      ->transform(CLI::CheckedTransformer(refine_names, CLI::ignore_case));
  table_cmd
      ->add_option("--max-evals", search.max_evaluations,
                   "evaluation budget for the refinement")
      ->capture_default_str();
  table_cmd
      ->add_option("--nodes", search.nodes,
                   "quadrature nodes per level for reported values")
      ->capture_default_str();
  table_cmd
      ->add_option("--coarse-nodes", search.coarse_nodes,
                   "quadrature nodes per level during the scan")
      ->capture_default_str();
  add_mode_option(table_cmd);
  add_output_options(table_cmd);
  table_cmd->footer(
      "columns: table,k,alpha,reference,delta,q,q_reference,h,log_p");

  // bound
  std::vector<int> bound_k;
  std::vector<double> bound_q;
  double kappa = 1.0;
  int bound_nodes = 80;
  std::string dump_path;
  auto* bound_cmd = app.add_subcommand(
      "bound", "evaluate the union bound at a fixed overlap sequence");
  bound_cmd->add_option("--k", bound_k, "cluster sizes, e.g. --k 1,2,4")
      ->required()
      ->delimiter(',');
  bound_cmd
      ->add_option("--q", bound_q,
                   "inner overlaps 1 > q_1 > ... > q_s > 0, e.g. "
                   "--q 0.9932,0.964")
      ->required()
      ->delimiter(',');
  bound_cmd->add_option("--kappa", kappa, "margin half-width")
      ->capture_default_str();
  bound_cmd->add_option("--nodes", bound_nodes, "quadrature nodes per level")
      ->capture_default_str();
  bound_cmd->add_option(
      "--dump-constraints", dump_path,
      "write the entropy constraint system as sparse triplets "
      "('-' for stdout); needs tuple size >= 4");
  add_mode_option(bound_cmd);
  add_output_options(bound_cmd);
  bound_cmd->footer("columns: k,q,kappa,mode,h,log_p,p,alpha");

  // figure
  int figure_id = 0;
  auto* figure_cmd = app.add_subcommand(
      "figure", "emit the point set behind a summary figure (data only)");
  figure_cmd->add_option("id", figure_id, "figure id (1..3)")->required();
  add_output_options(figure_cmd);
  figure_cmd->footer("columns: figure,label,alpha");

  // verify
  std::string scope;
  std::uint64_t seed = 777;
  std::uint64_t samples = 1000000;
  int verify_nodes = 80;
  std::string fixture_file;
  auto* verify_cmd =
      app.add_subcommand("verify", "run one of the built-in oracle suites");
  verify_cmd->add_option("scope", scope, "which oracle suite to run")
      ->required()
      ->check(CLI::IsMember({"quadrature", "entropy", "enumeration",
                             "fixtures"}));
  verify_cmd
      ->add_option("--seed", seed, "Monte Carlo seed (quadrature scope)")
      ->capture_default_str();
  verify_cmd
      ->add_option("--samples", samples,
                   "Monte Carlo samples per spec (quadrature scope)")
      ->capture_default_str();
  verify_cmd
      ->add_option("--nodes", verify_nodes,
                   "quadrature nodes per level (quadrature scope)")
      ->capture_default_str();
  verify_cmd->add_option(
      "--file", fixture_file,
      "verify this fixture file instead of the embedded table "
      "(fixtures scope)");
  add_output_options(verify_cmd);
  verify_cmd->footer("columns: scope,check,status,detail");

  // suggest-k
  std::vector<double> c_hat;
  auto* suggest_cmd = app.add_subcommand(
      "suggest-k",
      "round a connection-ratio sequence to an admissible cluster chain");
  suggest_cmd
      ->add_option("--c", c_hat,
                   "connection ratios, e.g. --c 1,4.3528,12.7310,29.6479")
      ->required()
      ->delimiter(',');
  add_output_options(suggest_cmd);
  suggest_cmd->footer("columns: c,k");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (table_cmd->parsed())
      return run_table(table_id, search, mode, output);
    if (bound_cmd->parsed())
      return run_bound(bound_k, bound_q, kappa, mode, bound_nodes, dump_path,
                       output);
    if (figure_cmd->parsed()) return run_figure(figure_id, output);
    if (verify_cmd->parsed())
      return run_verify(scope, seed, samples, verify_nodes, fixture_file,
                        output);
    if (suggest_cmd->parsed()) return run_suggest_k(c_hat, output);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 3;
  }
  return 0;
}
