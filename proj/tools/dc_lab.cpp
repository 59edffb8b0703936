// dc_lab: construct, verify and search for Λ-orthogonal encoding families.
//
// Exit status: 0 success / pass, 1 verification failed, 2 bad input.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dclab/dclab.hpp>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_input = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> weights_from_args(const std::vector<std::string>& args) {
  std::vector<std::string> items;
  for (const auto& a : args) {
    std::stringstream ss(a);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) items.push_back(tok);
    }
  }
  if (items.empty()) throw InputError("no Schmidt weights given");
  return dclab::parse_weights(items);
}

dclab::SchmidtState state_from_args(const std::vector<std::string>& args) {
  const auto w = weights_from_args(args);
  return dclab::make_state(w.size(), w);
}

std::size_t threads_from_env() {
  const char* env = std::getenv("DC_LAB_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  std::size_t n = 0;
  const std::string_view s(env);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc{} || end != s.data() + s.size() || n == 0) {
    throw InputError("DC_LAB_THREADS must be a positive integer, got '" + std::string(s) + "'");
  }
  return n;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed: " + path);
}

dclab::EncodingFamily build_family(const std::string& name, std::optional<std::size_t> d_opt) {
  auto need_d = [&](std::size_t min_d) {
    if (!d_opt) throw InputError(name + " needs a dimension d");
    if (*d_opt < min_d) throw InputError(name + " needs d >= " + std::to_string(min_d));
    return *d_opt;
  };
  auto fixed_d = [&](std::size_t d) {
    if (d_opt && *d_opt != d) throw InputError(name + " exists only for d = " + std::to_string(d));
  };
  if (name == "weyl") return dclab::weyl_family(need_d(1));
  if (name == "five") {
    fixed_d(3);
    return dclab::qutrit_five_family();
  }
  if (name == "f46") {
    fixed_d(4);
    return dclab::family_f46();
  }
  if (name == "f47") {
    fixed_d(4);
    return dclab::family_f47();
  }
  if (name == "two-d-minus-one") return dclab::family_2dm1(need_d(4));
  if (name == "d-plus-two") return dclab::family_dp2(need_d(2));
  if (name == "shift-diag") {
    const std::size_t d = need_d(1);
    const std::vector<dclab::ComplexMatrix> diags(d, dclab::ComplexMatrix::identity(d));
    return dclab::shift_diag_family(d, diags);
  }
  throw InputError("unknown family '" + name +
                   "' (expected weyl, five, f46, f47, two-d-minus-one, d-plus-two, shift-diag)");
}

std::string fmt(double v) { return dclab::format_double(v); }

int cmd_construct(const std::string& name, std::optional<std::size_t> d, const std::string& output) {
  const auto fam = build_family(name, d);
  const std::string doc = dclab::write_family(fam);
  std::ostream& info = output.empty() ? std::cerr : std::cout;
  if (output.empty()) {
    std::cout << doc;
  } else {
    write_text(output, doc);
  }
  info << "family " << fam.label() << ": d=" << fam.dim() << " members=" << fam.size()
       << " target_lambda0=" << (fam.target_lambda0() ? fmt(*fam.target_lambda0()) : "none") << '\n';
  return exit_ok;
}

int cmd_verify(const std::string& path, const std::vector<std::string>& lambdas, double tol) {
  const auto fam = dclab::read_family_file(path);
  const auto s = state_from_args(lambdas);
  if (s.dim() != fam.dim()) {
    throw InputError("state has " + std::to_string(s.dim()) + " weights but the family has d = " +
                     std::to_string(fam.dim()));
  }
  const auto rep = dclab::verify_family(fam, s, tol);
  std::cout << "family: " << (fam.label().empty() ? "(unlabeled)" : fam.label()) << " d=" << fam.dim()
            << " K=" << fam.size() << '\n'
            << "max_pairwise_residual: " << fmt(rep.max_pairwise_residual) << " (pair " << rep.worst_i << ','
            << rep.worst_j << ")\n"
            << "max_unitarity_residual: " << fmt(rep.max_unitarity_residual) << '\n'
            << "max_norm_deviation: " << fmt(rep.max_norm_deviation) << '\n'
            << "tolerance: " << fmt(tol) << '\n';
  if (dclab::is_saturated(s, fam.size())) {
    const auto kc = dclab::kc_span_check(fam, s);
    std::cout << "kc_span_dimension: " << kc.span_dimension << '\n';
    for (std::size_t m = 0; m < kc.residuals.size(); ++m) {
      std::cout << "kc_residual[" << m << "]: " << fmt(kc.residuals[m]) << '\n';
    }
  }
  std::cout << "result: " << (rep.pass ? "PASS" : "FAIL") << '\n';
  return rep.pass ? exit_ok : exit_fail;
}

int cmd_state_info(const std::vector<std::string>& lambdas) {
  const auto s = state_from_args(lambdas);
  const std::size_t d = s.dim();
  std::cout << "d: " << d << '\n' << "lambdas:";
  for (double l : s.lambdas()) std::cout << ' ' << fmt(l);
  std::cout << '\n'
            << "entropy_bits: " << std::setprecision(10) << std::fixed << dclab::entropy_bits(s) << '\n'
            << std::defaultfloat << "wcsg_bound: " << dclab::wcsg_bound(s) << '\n'
            << "shift_family_obstructed: " << std::boolalpha << dclab::shift_family_obstructed(s) << '\n'
            << "diagonal_identity_obstructed: " << dclab::diagonal_identity_obstructed(s) << '\n';
  if (d + 1 <= dclab::wcsg_bound(s) && dclab::bns_excluded(s, d + 1)) {
    std::cout << "note: K=" << d + 1 << " excluded by strict bound (lambda0 >= d/(d+1))\n";
  }
  return exit_ok;
}

int cmd_search(const std::vector<std::string>& lambdas, const dclab::SearchConfig& cfg, const std::string& output) {
  const auto s = state_from_args(lambdas);
  const auto res = dclab::estimate_nmax(s, cfg);
  std::cout << "seed: " << res.seed << '\n' << "wcsg_bound: " << dclab::wcsg_bound(s) << '\n';
  for (const auto& o : res.per_k) {
    std::cout << "K=" << o.k << ": " << dclab::to_string(o.status);
    if (o.status != dclab::KStatus::excluded_by_bound) {
      std::cout << " objective=" << fmt(o.best_objective) << " max_pair_residual=" << fmt(o.max_pair_residual)
                << " restarts=" << o.restarts_run;
    }
    std::cout << '\n';
  }
  std::cout << "n_max_estimate: " << res.n_max_estimate << '\n';
  if (!output.empty()) {
    const auto it = res.witnesses.find(res.n_max_estimate);
    if (it == res.witnesses.end()) throw InputError("no witness to write");
    write_text(output, dclab::write_family(it->second));
  }
  return exit_ok;
}

int cmd_sweep(std::size_t d, std::size_t resolution, const dclab::SearchConfig& cfg, const std::string& output) {
  if (d != 3) std::cerr << "warning: sweeps are laid out for d = 3; weights beyond lambda1 share one value\n";
  if (resolution < 4) throw InputError("resolution must be at least 4");
  const auto map = dclab::region_sweep(resolution, cfg, d);
  if (output.empty()) {
    dclab::write_sweep_csv(std::cout, map);
  } else {
    std::ostringstream ss;
    dclab::write_sweep_csv(ss, map);
    write_text(output, ss.str());
    std::cerr << "wrote " << map.cells.size() << " rows to " << output << '\n';
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dense-coding encoding families: construct, verify, search"};
  app.require_subcommand(1);

  dclab::SearchConfig cfg;
  cfg.base_seed = 1;
  double tol = 1e-10;
  std::string output;
  std::string family_name;
  std::optional<std::size_t> family_d;
  std::string family_path;
  std::vector<std::string> lambdas;
  std::size_t sweep_d = 3;
  std::size_t resolution = 12;

  auto add_search_flags = [&](CLI::App* sub) {
    sub->add_option("--restarts", cfg.restarts, "Random restarts per K")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.base_seed, "Base seed");
    sub->add_option("--max-k", cfg.max_k, "Largest K to try (0 = d^2)");
    sub->add_option("--tol", cfg.accept_tol, "Acceptance threshold on the objective")->check(CLI::PositiveNumber);
    sub->add_flag("--pin-fr", cfg.pin_fr, "Pin entry (0,1) of the first free member (only when lambda1 = ... = lambda_{d-1})");
  };

  auto* construct = app.add_subcommand("construct", "Build a family and write it as JSON");
  construct->add_option("family", family_name, "weyl | five | f46 | f47 | two-d-minus-one | d-plus-two | shift-diag")
      ->required();
  construct->add_option("d", family_d, "Dimension");
  construct->add_option("--output,-o", output, "Output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Check a family document against a state");
  verify->add_option("family", family_path, "Family JSON file")->required();
  verify->add_option("lambdas", lambdas, "Schmidt weights, e.g. 2/3 1/3 0 0")->required();
  verify->add_option("--tol", tol, "Residual tolerance")->check(CLI::PositiveNumber);

  auto* state_info = app.add_subcommand("state-info", "Entropy, bounds and obstruction flags for a state");
  state_info->add_option("lambdas", lambdas, "Schmidt weights")->required();

  auto* search = app.add_subcommand("search", "Estimate N_max for one state");
  search->add_option("lambdas", lambdas, "Schmidt weights")->required();
  search->add_option("--output,-o", output, "Write the largest witness family as JSON");
  add_search_flags(search);

  auto* sweep = app.add_subcommand("sweep", "Estimate N_max over the weight triangle, CSV output");
  sweep->add_option("--d", sweep_d, "Dimension");
  sweep->add_option("--resolution", resolution, "Subdivisions per triangle side");
  sweep->add_option("--output,-o", output, "CSV path (default stdout)");
  add_search_flags(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    cfg.threads = threads_from_env();
    if (*construct) return cmd_construct(family_name, family_d, output);
    if (*verify) return cmd_verify(family_path, lambdas, tol);
    if (*state_info) return cmd_state_info(lambdas);
    if (*search) return cmd_search(lambdas, cfg, output);
    if (*sweep) return cmd_sweep(sweep_d, resolution, cfg, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  }
  return exit_input;
}
