#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io_util.hpp"
#include "verify.hpp"
#include "gkb/thresholds.hpp"

namespace {

using namespace gkb;
using namespace gkb::cli;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitIo = 3;
constexpr int kExitVerify = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Channel selection shared by bound and sweep.
struct ChannelFlags {
  bool loss = false, amp = false, noise = false;
  std::optional<double> eta, g, omega, nbar, zeta;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--thermal-loss", loss, "Thermal loss channel (eta, omega)");
    cmd->add_flag("--thermal-amp", amp, "Thermal amplification channel (g, omega)");
    cmd->add_flag("--added-noise", noise, "Added noise channel (zeta)");
    cmd->add_option("--eta", eta, "Transmissivity, 0 < eta < 1");
    cmd->add_option("--g", g, "Gain, g > 1");
    cmd->add_option("--omega", omega, "Environment noise, omega = 2 n_th + 1 >= 1");
    cmd->add_option("--nbar", nbar, "Environment thermal photons n_th (omega = 2 n_th + 1)");
    cmd->add_option("--zeta", zeta, "Added thermal photons, 0 < zeta <= 4");
  }

  // Resolves to a validated spec; missing/conflicting flags are usage errors,
  // out-of-domain values are domain errors (thrown by validate()).
  ChannelSpec resolve() const {
    const int picked = int(loss) + int(amp) + int(noise);
    if (picked != 1) {
      throw UsageError("select exactly one of --thermal-loss / --thermal-amp / --added-noise");
    }
    if (omega && nbar) {
      throw UsageError("--omega and --nbar are mutually exclusive");
    }
    std::optional<double> w = omega;
    if (nbar) w = 2.0 * *nbar + 1.0;
    ChannelSpec spec;
    if (loss) {
      if (!eta || !w) throw UsageError("--thermal-loss needs --eta and --omega (or --nbar)");
      spec = ThermalLoss{*eta, *w};
    } else if (amp) {
      if (!g || !w) throw UsageError("--thermal-amp needs --g and --omega (or --nbar)");
      spec = ThermalAmp{*g, *w};
    } else {
      if (!zeta) throw UsageError("--added-noise needs --zeta");
      spec = AddedNoise{*zeta};
    }
    validate(spec);
    return spec;
  }

  nlohmann::json echo() const {
    nlohmann::json p = nlohmann::json::object();
    if (eta) p["eta"] = *eta;
    if (g) p["g"] = *g;
    if (omega) p["omega"] = *omega;
    if (nbar) p["nbar"] = *nbar;
    if (zeta) p["zeta"] = *zeta;
    return p;
  }
};

struct OptimizerFlags {
  OptimizerOptions opts;
  void attach(CLI::App* cmd) {
    cmd->add_option("--gamma-max", opts.gamma_max, "Upper end of the gamma search window");
    cmd->add_option("--coarse-points", opts.coarse_points, "Coarse log-grid size");
    cmd->add_option("--refine-tol", opts.refine_tol, "Golden-section interval tolerance");
    cmd->add_option("--value-tol", opts.value_tol, "Golden-section value tolerance, bits");
  }
  nlohmann::json echo() const {
    return {{"gamma_max", opts.gamma_max},
            {"coarse_points", opts.coarse_points},
            {"refine_tol", opts.refine_tol},
            {"value_tol", opts.value_tol}};
  }
};

int env_threads() {
  const char* v = std::getenv("GKB_THREADS");
  if (!v || !*v) return 0;
  try {
    const int n = std::stoi(v);
    return n < 0 ? 0 : n;
  } catch (...) {
    throw UsageError("GKB_THREADS must be a non-negative integer");
  }
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

// axis spec "name=min:max:points[:log|linear]"
SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw UsageError("bad --sweep '" + text + "': expected name=min:max:points[:log|linear]");
  }
  SweepAxis axis;
  axis.name = text.substr(0, eq);
  std::vector<std::string> parts;
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4) {
    throw UsageError("bad --sweep '" + text + "': expected min:max:points[:log|linear]");
  }
  try {
    axis.min = std::stod(parts[0]);
    axis.max = std::stod(parts[1]);
    axis.points = std::stoi(parts[2]);
  } catch (...) {
    throw UsageError("bad --sweep '" + text + "': non-numeric field");
  }
  axis.spacing = AxisSpacing::linear;
  if (parts.size() == 4) {
    if (parts[3] == "log") {
      axis.spacing = AxisSpacing::log;
    } else if (parts[3] != "linear") {
      throw UsageError("bad --sweep '" + text + "': spacing must be log or linear");
    }
  }
  return axis;
}

std::string bound_record(const BoundResult& b) {
  std::ostringstream os;
  os << "channel: " << channel_name(b.channel) << "\n"
     << "direction: " << to_string(b.direction) << "\n"
     << "gamma_star: " << format_double(b.gamma_star) << "\n"
     << "delta_g: " << format_double(b.delta_g) << "\n"
     << "info_term: " << format_double(b.info_term) << "\n"
     << "lower_bound: " << format_double(b.lower_bound) << "\n"
     << "upper_bound: " << format_double(b.upper_bound) << "\n"
     << "diag: " << (b.boundary_argmax ? "boundary_argmax" : "ok") << "\n";
  return os.str();
}

int cmd_bound(const ChannelFlags& ch, const OptimizerFlags& of, const std::string& json_path,
              const std::string& command_line) {
  const ChannelSpec spec = ch.resolve();
  const BoundResult b = lower_bound(spec, of.opts);
  std::cout << bound_record(b);
  if (!json_path.empty()) {
    RunManifest man;
    man.subcommand = "bound";
    man.command_line = command_line;
    man.parameters = {{"channel", channel_name(spec)},
                      {"channel_params", ch.echo()},
                      {"optimizer", of.echo()}};
    man.rows = 1;
    man.diagnostics[b.boundary_argmax ? "boundary_argmax" : "ok"] = 1;
    const nlohmann::json doc = {{"manifest", man.to_json()},
                                {"result",
                                 {{"channel", channel_name(spec)},
                                  {"direction", to_string(b.direction)},
                                  {"gamma_star", b.gamma_star},
                                  {"delta_g", b.delta_g},
                                  {"info_term", b.info_term},
                                  {"lower_bound", b.lower_bound},
                                  {"upper_bound", b.upper_bound},
                                  {"diag", b.boundary_argmax ? "boundary_argmax" : "ok"}}}};
    write_file(json_path, doc.dump(2) + "\n");
  }
  return kExitOk;
}

// Like ChannelFlags::resolve, but parameters covered by a sweep axis may be
// omitted: they get an in-domain placeholder that apply-axis overwrites on
// every row.
ChannelSpec resolve_sweep_base(const ChannelFlags& ch, const std::vector<SweepAxis>& axes) {
  const int picked = int(ch.loss) + int(ch.amp) + int(ch.noise);
  if (picked != 1) {
    throw UsageError("select exactly one of --thermal-loss / --thermal-amp / --added-noise");
  }
  if (ch.omega && ch.nbar) throw UsageError("--omega and --nbar are mutually exclusive");
  auto has_axis = [&axes](const std::string& n) {
    for (const auto& a : axes) {
      if (a.name == n) return true;
    }
    return false;
  };
  if (axes.size() == 2 && axes[0].name == axes[1].name) {
    throw UsageError("the two sweep axes must differ");
  }
  const std::vector<std::string> allowed =
      ch.loss ? std::vector<std::string>{"eta", "omega", "gamma"}
              : ch.amp ? std::vector<std::string>{"g", "omega", "gamma"}
                       : std::vector<std::string>{"zeta", "gamma"};
  for (const auto& a : axes) {
    if (std::find(allowed.begin(), allowed.end(), a.name) == allowed.end()) {
      throw UsageError("axis '" + a.name + "' does not apply to this channel");
    }
  }
  std::optional<double> w = ch.omega;
  if (ch.nbar) w = 2.0 * *ch.nbar + 1.0;
  if (ch.loss) {
    if (!ch.eta && !has_axis("eta")) throw UsageError("--thermal-loss needs --eta or an eta axis");
    if (!w && !has_axis("omega")) {
      throw UsageError("--thermal-loss needs --omega/--nbar or an omega axis");
    }
    return ThermalLoss{ch.eta.value_or(0.5), w.value_or(1.0)};
  }
  if (ch.amp) {
    if (!ch.g && !has_axis("g")) throw UsageError("--thermal-amp needs --g or a g axis");
    if (!w && !has_axis("omega")) {
      throw UsageError("--thermal-amp needs --omega/--nbar or an omega axis");
    }
    return ThermalAmp{ch.g.value_or(2.0), w.value_or(1.0)};
  }
  if (!ch.zeta && !has_axis("zeta")) {
    throw UsageError("--added-noise needs --zeta or a zeta axis");
  }
  return AddedNoise{ch.zeta.value_or(1.0)};
}

int cmd_sweep(const ChannelFlags& ch, const OptimizerFlags& of,
              const std::vector<std::string>& axis_texts, const std::string& out_path,
              const std::string& format, const std::string& command_line) {
  if (axis_texts.empty() || axis_texts.size() > 2) {
    throw UsageError("pass one or two --sweep axes");
  }
  if (format != "csv" && format != "json") {
    throw UsageError("--format must be csv or json");
  }
  SweepGrid grid;
  for (const auto& t : axis_texts) grid.axes.push_back(parse_axis(t));
  grid.base = resolve_sweep_base(ch, grid.axes);
  validate(grid.base);  // placeholders are in-domain; this rejects bad fixed flags

  const int threads = env_threads();
  const SweepTable table = run_sweep(grid, of.opts, threads);

  RunManifest man;
  man.subcommand = "sweep";
  man.command_line = command_line;
  nlohmann::json axes = nlohmann::json::array();
  for (const auto& a : grid.axes) {
    axes.push_back({{"name", a.name},
                    {"min", a.min},
                    {"max", a.max},
                    {"points", a.points},
                    {"spacing", a.spacing == AxisSpacing::log ? "log" : "linear"}});
  }
  man.parameters = {{"channel", channel_name(grid.base)},
                    {"channel_params", ch.echo()},
                    {"axes", axes},
                    {"format", format},
                    {"optimizer", of.echo()}};
  man.threads = threads;
  man.rows = table.rows.size();
  man.diagnostics = diag_summary(table);

  if (format == "csv") {
    // The CSV itself carries no timestamp, so reruns are byte-identical; the
    // manifest sidecar holds the volatile metadata.
    write_file(out_path, sweep_to_csv(table));
    write_file(out_path + ".manifest.json", man.to_json().dump(2) + "\n");
  } else {
    const nlohmann::json doc = {{"manifest", man.to_json()}, {"rows", sweep_to_json(table)}};
    write_file(out_path, doc.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_threshold(const std::string& family_text, const std::string& scan_text,
                  const std::string& bracket_text, double tolerance, const OptimizerFlags& of,
                  const std::string& out_path, const std::string& command_line) {
  if (family_text != "loss" && family_text != "amp") {
    throw UsageError("--family must be loss or amp");
  }
  const ThresholdFamily family = family_text == "loss" ? ThresholdFamily::loss_vs_eta
                                                       : ThresholdFamily::amp_vs_g;
  SweepAxis scan = parse_axis((family_text == "loss" ? "eta=" : "g=") + scan_text);
  std::pair<double, double> bracket{1.0, 200.0};
  if (!bracket_text.empty()) {
    const auto colon = bracket_text.find(':');
    if (colon == std::string::npos) throw UsageError("--omega-bracket expects lo:hi");
    try {
      bracket.first = std::stod(bracket_text.substr(0, colon));
      bracket.second = std::stod(bracket_text.substr(colon + 1));
    } catch (...) {
      throw UsageError("--omega-bracket expects numeric lo:hi");
    }
  }

  std::string csv = "scan_param,omega_th_lower_bound,omega_th_info_term,diag\n";
  std::map<std::string, std::size_t> diag_counts;
  for (double p : axis_values(scan)) {
    ThresholdQuery q{family, p, bracket, tolerance};
    const ThresholdResult res = security_threshold(q, of.opts);
    const double info_th = threshold_of_info(family, p);
    csv += format_double(p);
    csv += ',';
    csv += format_double(res.omega_th);
    csv += ',';
    csv += format_double(info_th);
    csv += ',';
    csv += to_string(res.status);
    csv += '\n';
    ++diag_counts[to_string(res.status)];
  }
  std::cout << csv;
  if (!out_path.empty()) {
    RunManifest man;
    man.subcommand = "threshold";
    man.command_line = command_line;
    man.parameters = {{"family", family_text},
                      {"scan", scan_text},
                      {"omega_bracket", {bracket.first, bracket.second}},
                      {"tol", tolerance},
                      {"optimizer", of.echo()}};
    man.rows = static_cast<std::size_t>(scan.points);
    man.diagnostics = diag_counts;
    write_file(out_path, csv);
    write_file(out_path + ".manifest.json", man.to_json().dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_verify(double mu, double tolerance) {
  if (!(mu >= 1.0)) throw std::domain_error("mu must be >= 1, got " + std::to_string(mu));
  return run_verify(mu, tolerance, std::cout) ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower bounds on the secret-key capacity of phase-insensitive "
               "Gaussian channels"};
  app.set_version_flag("--version", std::string("gkb ") + gkb::kVersion);
  app.require_subcommand(1);

  ChannelFlags bound_ch, sweep_ch;
  OptimizerFlags bound_opt, sweep_opt, thr_opt;

  CLI::App* bound = app.add_subcommand("bound", "Evaluate the bound at one parameter point");
  bound_ch.attach(bound);
  bound_opt.attach(bound);
  std::string bound_json;
  bound->add_option("--json", bound_json, "Also write the record (with manifest) as JSON");

  CLI::App* sweep = app.add_subcommand("sweep", "Evaluate the bound over a parameter grid");
  sweep_ch.attach(sweep);
  sweep_opt.attach(sweep);
  std::vector<std::string> axis_texts;
  std::string out_path, format = "csv";
  sweep->add_option("--sweep", axis_texts, "Axis as name=min:max:points[:log|linear]")
      ->expected(1, 2);
  sweep->add_option("--out", out_path, "Output file")->required();
  sweep->add_option("--format", format, "csv (default) or json");

  CLI::App* thr = app.add_subcommand("threshold", "Security thresholds along eta or g");
  std::string family_text, scan_text, bracket_text;
  double thr_tol = 1e-6;
  thr->add_option("--family", family_text, "loss or amp")->required();
  thr->add_option("--scan", scan_text, "min:max:points[:log|linear] over eta or g")->required();
  thr->add_option("--omega-bracket", bracket_text, "lo:hi (default 1:200)");
  thr->add_option("--tol", thr_tol, "Bisection tolerance on omega");
  thr_opt.attach(thr);
  std::string thr_out;
  thr->add_option("--out", thr_out, "Also write rows to a CSV file (with manifest)");

  CLI::App* verify = app.add_subcommand("verify", "Run the self-verification suite");
  double verify_mu = 1e6, verify_tol = 0.0;
  verify->add_option("--mu", verify_mu, "Finite-mu oracle parameter (default 1e6)");
  verify->add_option("--tolerance", verify_tol,
                     "Oracle-agreement tolerance in bits (default scales with mu)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string command_line = join_args(argc, argv);
  try {
    if (bound->parsed()) return cmd_bound(bound_ch, bound_opt, bound_json, command_line);
    if (sweep->parsed()) {
      return cmd_sweep(sweep_ch, sweep_opt, axis_texts, out_path, format, command_line);
    }
    if (thr->parsed()) {
      return cmd_threshold(family_text, scan_text, bracket_text, thr_tol, thr_opt, thr_out,
                           command_line);
    }
    return cmd_verify(verify_mu, verify_tol);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}
