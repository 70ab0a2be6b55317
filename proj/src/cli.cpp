#include "qcorr/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "qcorr/monogamy.hpp"
#include "qcorr/statefile.hpp"

namespace qcorr {

namespace {

using nlohmann::ordered_json;

ordered_json basis_to_json(const std::optional<QubitBasis>& basis) {
  if (!basis) return nullptr;
  ordered_json j;
  j["theta"] = basis->theta;
  j["phi"] = basis->phi;
  return j;
}

ordered_json measure_result_to_json(const MeasureResult& r) {
  ordered_json j;
  j["value"] = r.value;
  j["argmin_basis"] = basis_to_json(r.argmin_basis);
  j["optimizer_evals"] = r.optimizer_evals;
  j["converged"] = r.converged;
  return j;
}

ordered_json report_to_json(const MonogamyReport& r) {
  ordered_json j;
  j["measure"] = r.measure;
  j["q_a_bc"] = r.q_a_bc;
  j["q_a_b"] = r.q_a_b;
  j["q_a_c"] = r.q_a_c;
  j["deficit"] = r.deficit;
  j["tolerance"] = r.tolerance;
  j["verdict"] = to_string(r.verdict);
  j["converged"] = r.converged;
  return j;
}

ordered_json params_to_json(const BrunParams& p) {
  ordered_json j;
  j["p"] = p.p;
  j["a"] = p.a;
  j["f"] = p.f;
  j["g"] = ordered_json::array({p.g.real(), p.g.imag()});
  j["gamma"] = p.gamma;
  return j;
}

ordered_json channel_to_json(const KrausChannel& ch) {
  ordered_json ops = ordered_json::array();
  for (const auto& k : ch.ops) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index c = 0; c < k.cols(); ++c)
        row.push_back(ordered_json::array({k(r, c).real(), k(r, c).imag()}));
      rows.push_back(std::move(row));
    }
    ops.push_back(std::move(rows));
  }
  ordered_json j;
  j["kraus"] = std::move(ops);
  return j;
}

ordered_json envelope_for(const RunConfig& config, const std::string& command) {
  ordered_json env;
  env["tool_version"] = kToolVersion;
  env["command"] = command;
  env["seed"] = config.seed;

  ordered_json tol;
  tol["structural"] = kTolStructural;
  tol["trace"] = kTolTrace;
  tol["exact"] = kTolExact;
  double deficit_tol = 1e-6 + 2.0 * kOptimizer.refine_tol;
  if (!config.measure.empty())
    deficit_tol = default_deficit_tolerance(measure_from_string(config.measure));
  if (config.tolerance_override) deficit_tol = *config.tolerance_override;
  tol["deficit"] = deficit_tol;
  tol["chain"] = 1e-6;
  tol["extension"] = 1e-6;
  env["tolerances"] = std::move(tol);

  ordered_json opt;
  opt["grid"] = ordered_json::array({kOptimizer.grid_theta, kOptimizer.grid_phi});
  ordered_json refinements;
  refinements["starts"] = kOptimizer.refine_starts;
  refinements["max_steps"] = kOptimizer.refine_max_steps;
  refinements["tol"] = kOptimizer.refine_tol;
  opt["refinements"] = std::move(refinements);
  env["optimizer"] = std::move(opt);

  ordered_json conv;
  conv["measured_side"] = "first subsystem (A) unless a head is named";
  conv["measurements"] = "rank-1 projective on the measured qubit";
  conv["brun_g_sampling"] = "|g|^2 uniform on [0, 1-f^2], phase uniform; g recorded as [re, im]";
  env["conventions"] = std::move(conv);
  return env;
}

std::string csv_cell(const ordered_json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

void write_report_csv(const ordered_json& payload, const RunConfig& config,
                      const std::string& command) {
  std::string out;
  out += "# tool_version: " + std::string(kToolVersion) + "\n";
  out += "# command: " + command + "\n";
  out += "# seed: " + std::to_string(config.seed) + "\n";
  out += "# optimizer_grid: " + std::to_string(kOptimizer.grid_theta) + "x" +
         std::to_string(kOptimizer.grid_phi) + "\n";
  out += "# refine: starts=" + std::to_string(kOptimizer.refine_starts) +
         " max_steps=" + std::to_string(kOptimizer.refine_max_steps) +
         " tol=" + format_double(kOptimizer.refine_tol) + "\n";
  out += "# conventions: measured side A; rank-1 projective measurements; "
         "g sampled with |g|^2 uniform, phase uniform\n";

  const auto& rows = payload.at("rows");
  if (!rows.is_array() || rows.empty()) fail(Errc::IoError, "csv payload has no rows");
  std::string header;
  for (auto it = rows[0].begin(); it != rows[0].end(); ++it) {
    if (!header.empty()) header += ",";
    header += it.key();
  }
  out += header + "\n";
  for (const auto& row : rows) {
    std::string line;
    for (auto it = row.begin(); it != row.end(); ++it) {
      if (!line.empty()) line += ",";
      line += csv_cell(it.value());
    }
    out += line + "\n";
  }
  write_file_atomic(config.output_path, out);
}

}  // namespace

void write_report(const ordered_json& payload, const RunConfig& config,
                  const std::string& command) {
  if (config.output_path.empty()) return;
  if (config.format == RunConfig::Format::Csv) {
    write_report_csv(payload, config, command);
    return;
  }
  ordered_json env = envelope_for(config, command);
  env["payload"] = payload;
  write_file_atomic(config.output_path, dump_json(env));
}

namespace {

DensityMatrix as_density(const StateVariant& state) {
  if (std::holds_alternative<DensityMatrix>(state)) return std::get<DensityMatrix>(state);
  if (std::holds_alternative<PureState>(state)) return to_density(std::get<PureState>(state));
  return separable_state(std::get<SeparableDecomposition>(state));
}

std::size_t label_index(const std::vector<int>& dims, const std::string& label) {
  const auto labels = default_labels(dims.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  fail(Errc::UnknownLabel, "no subsystem named '" + label + "'");
}

SeparableDecomposition load_decomposition(const std::string& path) {
  auto state = parse_state_file(path);
  if (!std::holds_alternative<SeparableDecomposition>(state))
    fail(Errc::UsageError, "'" + path + "' is not a decomposition file");
  return std::get<SeparableDecomposition>(state);
}

int run_validate(const std::string& file) {
  StateVariant state;
  try {
    state = parse_state_file(file);
  } catch (const Error& e) {
    std::cout << "INVALID: " << e.what() << "\n";
    return 1;
  }
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DensityMatrix>) {
          auto [vals, vecs] = eig_hermitian(s.mat);
          int rank = 0;
          for (Eigen::Index i = 0; i < vals.size(); ++i)
            if (vals(i) > 1e-9) ++rank;
          std::cout << "VALID density matrix, dim " << s.dim() << ", rank " << rank << "\n";
        } else if constexpr (std::is_same_v<T, PureState>) {
          std::cout << "VALID pure state, dim " << s.dim() << "\n";
        } else {
          std::cout << "VALID decomposition with " << s.size() << " terms\n";
        }
      },
      state);
  return 0;
}

int run_measure(const std::string& kind, const std::string& measured, const std::string& file,
                RunConfig config, const std::string& command) {
  const StateVariant state = parse_state_file(file);
  config.measure = "";
  ordered_json payload;
  payload["kind"] = kind;
  payload["measured"] = measured;
  payload["input"] = file;

  double value = 0.0;
  if (kind == "gdiscord" || kind == "discord") {
    const DensityMatrix rho = as_density(state);
    const MeasureResult r = kind == "gdiscord" ? geometric_discord(rho, measured)
                                               : discord(rho, measured);
    payload["result"] = measure_result_to_json(r);
    value = r.value;
  } else if (kind == "gdiscord-pure") {
    if (!std::holds_alternative<PureState>(state))
      fail(Errc::UsageError, "gdiscord-pure needs a pure-state file");
    const auto& psi = std::get<PureState>(state);
    value = geometric_discord_pure(psi, label_index(psi.dims, measured));
    payload["result"] = ordered_json{{"value", value}};
  } else if (kind == "concurrence") {
    value = concurrence_2q(as_density(state));
    payload["result"] = ordered_json{{"value", value}};
  } else if (kind == "tangle") {
    if (!std::holds_alternative<PureState>(state))
      fail(Errc::UsageError, "tangle needs a pure-state file");
    const auto& psi = std::get<PureState>(state);
    value = tangle_pure(psi, label_index(psi.dims, measured));
    payload["result"] = ordered_json{{"value", value}};
  } else if (kind == "entropy") {
    value = vn_entropy(as_density(state));
    payload["result"] = ordered_json{{"value", value}};
  } else if (kind == "mutual-info") {
    const DensityMatrix rho = as_density(state);
    std::vector<std::string> rest;
    for (const auto& l : rho.labels)
      if (l != measured) rest.push_back(l);
    value = mutual_information(rho, {measured}, rest);
    payload["result"] = ordered_json{{"value", value}};
  } else {
    fail(Errc::UsageError, "unknown measure kind '" + kind + "'");
  }

  write_report(payload, config, command);
  std::cout << kind << "(" << measured << ") = " << format_double(value) << "\n";
  return 0;
}

int run_deficit(const std::string& measure, const std::string& file,
                const std::optional<std::string>& head, RunConfig config,
                const std::string& command) {
  const StateVariant state = parse_state_file(file);
  if (std::holds_alternative<SeparableDecomposition>(state))
    fail(Errc::UsageError, "deficit needs a tripartite state file, not a decomposition");
  const DensityMatrix rho = as_density(state);
  const MonogamyReport rep =
      deficit(rho, measure_from_string(measure), head, config.tolerance_override);

  ordered_json payload;
  payload["input"] = file;
  payload["report"] = report_to_json(rep);
  write_report(payload, config, command);

  std::cout << to_string(rep.verdict) << ": deficit = " << format_double(rep.deficit) << " ("
            << rep.measure << "; Q_A|BC = " << format_double(rep.q_a_bc)
            << ", Q_A|B = " << format_double(rep.q_a_b)
            << ", Q_A|C = " << format_double(rep.q_a_c) << ")\n";
  return 0;
}

int run_verify_theorem3(RunConfig config, const std::string& command) {
  const Theorem3Summary summary = verify_theorem3(config.samples, config.seed);

  ordered_json payload;
  payload["samples"] = summary.samples;
  payload["min_deficit"] = summary.min_deficit;
  payload["max_deficit"] = summary.max_deficit;
  payload["argmin_params"] = params_to_json(summary.argmin);
  ordered_json hist;
  hist["edges"] = summary.histogram_edges;
  hist["counts"] = summary.histogram_counts;
  payload["histogram"] = std::move(hist);
  payload["pass"] = summary.pass;
  config.measure = "gdiscord";
  write_report(payload, config, command);

  std::cout << (summary.pass ? "PASS" : "FAIL") << ": min deficit "
            << format_double(summary.min_deficit) << " over " << summary.samples
            << " samples (seed " << config.seed << ")\n";
  return summary.pass ? 0 : 1;
}

int run_certificate(const std::string& dec_file, const std::string& measure, RunConfig config,
                    const std::string& command) {
  const SeparableDecomposition dec = load_decomposition(dec_file);
  config.measure = measure;
  const ViolationCertificate cert = theorem1_certificate(dec, measure_from_string(measure));

  ordered_json payload;
  payload["decomposition"] = to_json(cert.decomposition);
  payload["state"] = to_json(cert.state);
  payload["report"] = report_to_json(cert.report);
  ordered_json chain;
  chain["q_sigma_ab"] = cert.chain.q_sigma_ab;
  chain["q_rho_abc"] = cert.chain.q_rho_abc;
  chain["marginal_residual"] = cert.chain.marginal_residual;
  chain["ok"] = cert.chain.ok;
  payload["chain_check"] = std::move(chain);
  write_report(payload, config, command);

  std::cout << "Violated: deficit = " << format_double(cert.report.deficit) << " (tolerance "
            << format_double(cert.report.tolerance)
            << "); chain ok; marginal residual = " << format_double(cert.chain.marginal_residual)
            << "\n";
  return 0;
}

int run_extend(const std::string& dec_file, const std::string& measure, int n_max,
               RunConfig config, const std::string& command) {
  const SeparableDecomposition dec = load_decomposition(dec_file);
  config.measure = measure;
  const auto reports = extension_check(dec, measure_from_string(measure), n_max);

  int smallest = -1;
  ordered_json rows = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json row;
    row["n"] = r.n;
    row["q_per_copy"] = r.q_per_copy;
    row["q_joint"] = r.q_joint;
    row["rhs"] = r.rhs;
    row["bound"] = r.bound;
    row["violated"] = r.violated;
    rows.push_back(std::move(row));
    if (r.violated && smallest < 0) smallest = r.n;
  }
  ordered_json payload;
  payload["n_max"] = n_max;
  payload["reports"] = std::move(rows);
  payload["smallest_violating_n"] = smallest < 0 ? ordered_json(nullptr) : ordered_json(smallest);
  write_report(payload, config, command);

  if (smallest < 0) {
    std::cout << "no violation up to n = " << n_max << "\n";
    return 1;
  }
  std::cout << "violation at n = " << smallest << ": n*q_per_copy = "
            << format_double(smallest * reports.front().q_per_copy)
            << " > q_joint = " << format_double(reports[static_cast<std::size_t>(smallest - 1)].q_joint)
            << "\n";
  return 0;
}

int run_search_pure_violation(RunConfig config, const std::string& command) {
  const PureViolationSearch search =
      discord_pure_violation_search(config.samples, config.seed);

  ordered_json payload;
  payload["samples_run"] = search.samples_run;
  payload["found"] = search.found;
  payload["threshold"] = 1e-3;
  payload["min_deficit"] = search.min_deficit;
  if (search.found) {
    payload["witness_index"] = search.witness_index;
    payload["witness"] = to_json(search.witness);
    payload["report"] = report_to_json(search.report);
  }
  config.measure = "discord";
  write_report(payload, config, command);

  if (!search.found) {
    std::cout << "no pure-state discord violation below -1e-3 in " << search.samples_run
              << " samples (min deficit " << format_double(search.min_deficit) << ")\n";
    return 1;
  }
  std::cout << "found: sample " << search.witness_index << " has discord deficit "
            << format_double(search.report.deficit) << " (seed " << config.seed << ")\n";
  return 0;
}

int run_search_gdiscord_increase(int trials, RunConfig config, const std::string& command) {
  const ChannelSearchResult search =
      channel_monotonicity_check(MeasureKind::GeometricDiscord, trials, config.seed);

  ordered_json payload;
  payload["trials"] = trials;
  payload["max_increase"] = search.max_increase;
  payload["before"] = search.before;
  payload["after"] = search.after;
  payload["witness_trial"] = search.witness_trial;
  payload["witness_state"] = to_json(search.witness_state);
  payload["witness_channel"] = channel_to_json(search.witness_channel);
  config.measure = "gdiscord";
  write_report(payload, config, command);

  if (search.max_increase <= 1e-6) {
    std::cout << "no increase found in " << trials << " trials (max "
              << format_double(search.max_increase) << ")\n";
    return 1;
  }
  std::cout << "found: trial " << search.witness_trial << " increases gdiscord by "
            << format_double(search.max_increase) << " (seed " << config.seed << ")\n";
  return 0;
}

int run_scan_brun(RunConfig config, const std::string& command) {
  const auto rows = scan_brun(config.samples, config.seed);

  ordered_json out_rows = ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    ordered_json row;
    row["sample"] = i;
    row["p"] = r.params.p;
    row["a"] = r.params.a;
    row["f"] = r.params.f;
    row["g_re"] = r.params.g.real();
    row["g_im"] = r.params.g.imag();
    row["gamma"] = r.params.gamma;
    row["q_abc"] = r.q_a_bc;
    row["q_ab"] = r.q_a_b;
    row["q_ac"] = r.q_a_c;
    row["deficit"] = r.deficit;
    out_rows.push_back(std::move(row));
  }
  ordered_json payload;
  payload["rows"] = std::move(out_rows);
  config.measure = "gdiscord";
  write_report(payload, config, command);

  double min_deficit = rows.front().deficit;
  for (const auto& r : rows) min_deficit = std::min(min_deficit, r.deficit);
  std::cout << "scanned " << rows.size() << " samples, min deficit "
            << format_double(min_deficit) << "\n";
  return 0;
}

std::string join_args(const std::vector<std::string>& argv) {
  std::string out;
  for (std::size_t i = 1; i < argv.size(); ++i) {
    if (i > 1) out += " ";
    out += argv[i];
  }
  return out;
}

}  // namespace

int dispatch(const std::vector<std::string>& argv) {
  CLI::App app{"correlation measures and monogamy checks for small quantum registers"};
  app.require_subcommand(1);

  RunConfig config;
  std::string file, dec_file, kind, measured = "A", measure = "gdiscord", head;
  int n_max = 10, trials = 1000;
  double tolerance = -1.0;
  std::string format = "json";

  auto* validate = app.add_subcommand("validate", "check a state file against the invariants");
  validate->add_option("file", file, "state file")->required();

  auto* meas = app.add_subcommand("measure", "evaluate a correlation measure on a state file");
  meas->add_option("--kind", kind,
                   "gdiscord | discord | gdiscord-pure | concurrence | tangle | entropy | mutual-info")
      ->required();
  meas->add_option("--measured", measured, "measured subsystem label (default A)");
  meas->add_option("--out", config.output_path, "report file");
  meas->add_option("file", file, "state file")->required();

  auto* def = app.add_subcommand("deficit", "monogamy deficit of a tripartite state");
  def->add_option("--measure", measure, "gdiscord | discord | tangle")->required();
  def->add_option("--head", head, "measured head subsystem (default: first)");
  def->add_option("--tolerance", tolerance, "verdict tolerance override");
  def->add_option("--out", config.output_path, "report file");
  def->add_option("file", file, "state file")->required();

  auto* verify = app.add_subcommand("verify", "run a quantified check");
  auto* t3 = verify->add_subcommand("theorem3",
                                    "pure three-qubit monogamy sweep for geometric discord");
  t3->add_option("--samples", config.samples, "number of sampled states")->default_val(10000);
  t3->add_option("--seed", config.seed, "rng seed")->default_val(42);
  t3->add_option("--out", config.output_path, "report file");
  verify->require_subcommand(1);

  auto* cert = app.add_subcommand("certificate", "produce a violation certificate");
  auto* t1 = cert->add_subcommand("theorem1", "monogamy violation from a separable state");
  t1->add_option("--dec", dec_file, "decomposition file")->required();
  t1->add_option("--measure", measure, "gdiscord | discord")->default_val("gdiscord");
  t1->add_option("--out", config.output_path, "report file");
  cert->require_subcommand(1);

  auto* ext = app.add_subcommand("extend", "symmetric-extension monogamy stress test");
  ext->add_option("--dec", dec_file, "decomposition file")->required();
  ext->add_option("--measure", measure, "gdiscord | discord")->default_val("gdiscord");
  ext->add_option("--n-max", n_max, "largest extension")->default_val(10);
  ext->add_option("--out", config.output_path, "report file");

  auto* search = app.add_subcommand("search", "randomized witness searches");
  auto* spv = search->add_subcommand("discord-pure-violation",
                                     "pure three-qubit states violating discord monogamy");
  spv->add_option("--samples", config.samples, "sample budget")->default_val(10000);
  spv->add_option("--seed", config.seed, "rng seed")->default_val(42);
  spv->add_option("--out", config.output_path, "report file");
  auto* sgi = search->add_subcommand("gdiscord-increase",
                                     "local channels increasing geometric discord");
  sgi->add_option("--trials", trials, "trial budget")->default_val(1000);
  sgi->add_option("--seed", config.seed, "rng seed")->default_val(42);
  sgi->add_option("--out", config.output_path, "report file");
  search->require_subcommand(1);

  auto* scan = app.add_subcommand("scan", "parameter sweeps");
  auto* sb = scan->add_subcommand("brun", "deficit per sampled parameter point");
  sb->add_option("--samples", config.samples, "number of samples")->default_val(100);
  sb->add_option("--seed", config.seed, "rng seed")->default_val(42);
  sb->add_option("--out", config.output_path, "report file")->required();
  sb->add_option("--format", format, "csv | json")->default_val("csv");
  scan->require_subcommand(1);

  std::vector<const char*> cargs;
  cargs.reserve(argv.size());
  for (const auto& a : argv) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (tolerance >= 0.0) config.tolerance_override = tolerance;
  const std::string command = join_args(argv);

  try {
    if (*validate) return run_validate(file);
    if (*meas) return run_measure(kind, measured, file, config, command);
    if (*def)
      return run_deficit(measure, file, head.empty() ? std::nullopt : std::optional(head),
                         config, command);
    if (*t3) return run_verify_theorem3(config, command);
    if (*t1) {
      return run_certificate(dec_file, measure, config, command);
    }
    if (*ext) return run_extend(dec_file, measure, n_max, config, command);
    if (*spv) return run_search_pure_violation(config, command);
    if (*sgi) return run_search_gdiscord_increase(trials, config, command);
    if (*sb) {
      if (format != "csv" && format != "json") fail(Errc::UsageError, "format must be csv or json");
      config.format = format == "csv" ? RunConfig::Format::Csv : RunConfig::Format::Json;
      return run_scan_brun(config, command);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::UsageError:
      case Errc::ParseError:
      case Errc::ValidationError:
      case Errc::UnknownName:
      case Errc::UnknownLabel:
      case Errc::UnsupportedMeasure:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace qcorr
