#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expchaos/expchaos.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // usage errors and anything that is not NotFound
constexpr int kExitNotFound = 2;
constexpr double kRhoWarn = 650.0;

struct Failure {
  int code;
};

// Any non-OK status becomes a message and an exit code.
void check(ec_status s, const char* what) {
  if (s == EC_OK) return;
  std::cerr << "expchaos: " << what << ": " << ec_status_name(s) << ": " << ec_last_error() << "\n";
  throw Failure{s == EC_NOT_FOUND ? kExitNotFound : kExitFailure};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  ec_string_free(s);
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) {
    std::cerr << "expchaos: cannot write '" << path << "'\n";
    throw Failure{kExitFailure};
  }
}

struct DiscArgs {
  double re = 0.0, im = 0.0, radius = 0.1;
  ec_disc get() const { return {{re, im}, radius}; }
};

void add_disc(CLI::App* sub, DiscArgs& d) {
  sub->add_option("--center-re", d.re, "disc center, real part")->capture_default_str();
  sub->add_option("--center-im", d.im, "disc center, imaginary part")->capture_default_str();
  sub->add_option("--radius", d.radius, "disc radius")->capture_default_str();
}

struct GridArgs {
  ec_grid g{-3.0, 3.0, -3.0, 3.0, 64, 64};
};

void add_grid(CLI::App* sub, GridArgs& a) {
  sub->add_option("--re-min", a.g.re_min)->capture_default_str();
  sub->add_option("--re-max", a.g.re_max)->capture_default_str();
  sub->add_option("--im-min", a.g.im_min)->capture_default_str();
  sub->add_option("--im-max", a.g.im_max)->capture_default_str();
  sub->add_option("--width", a.g.width)->capture_default_str();
  sub->add_option("--height", a.g.height)->capture_default_str();
}

void report_out(ec_status s, ec_report* r, const char* what, const std::string& out) {
  check(s, what);  // r is only read after the search has filled it
  char* text = nullptr;
  const ec_status js = ec_report_json(r, &text);
  ec_report_free(r);
  check(js, "report");
  emit(take(text), out);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string slurp(const std::string& path);

// Value of --config in argv, or "".
std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return "";
}

// Splices "--key value" pairs from the config file in right after the
// subcommand name. Options take their last value, so explicit flags win.
// Keys the chosen subcommand does not know are ignored.
void apply_config(CLI::App& app, std::vector<std::string>& args) {
  const std::string path = config_path(args);
  if (path.empty()) return;
  std::size_t at = args.size();
  CLI::App* sub = nullptr;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (auto* s = app.get_subcommand_no_throw(args[i])) {
      sub = s;
      at = i + 1;
      break;
    }
  }
  std::istringstream in(slurp(path));
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::cerr << "expchaos: " << path << ":" << lineno << ": expected key = value\n";
      throw Failure{kExitFailure};
    }
    const std::string key = "--" + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "--config") continue;
    if ((sub && sub->get_option_no_throw(key)) || app.get_option_no_throw(key)) {
      extra.push_back(key);
      extra.push_back(value);
    }
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "expchaos: cannot read '" << path << "'\n";
    throw Failure{kExitFailure};
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerics for the chaotic dynamics of the complex exponential map"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = EC_DEFAULT_SEED;
  std::string out, config;
  app.add_option("--config", config, "key = value file; flags given on the command line win");
  app.add_option("--seed", seed, "generator seed for witness searches")->capture_default_str();
  app.add_option("--out", out, "output file (default stdout; required for renders)");

  // orbit / classify
  double zre = 0.0, zim = 0.0;
  int steps = 40;
  std::string format = "csv";
  ec_classify_params cp;
  ec_classify_params_default(&cp);
  auto orbit_opts = [&](CLI::App* s) {
    s->add_option("--re", zre, "starting point, real part")->capture_default_str();
    s->add_option("--im", zim, "starting point, imaginary part")->capture_default_str();
    s->add_option("--steps", steps, "maximum number of steps")->capture_default_str()->check(CLI::NonNegativeNumber);
    s->add_option("--threshold", cp.escape_re_threshold, "escape threshold on Re")->capture_default_str();
    s->add_option("--k-consec", cp.k_consec, "consecutive steps above threshold")->capture_default_str();
    s->add_option("--tol-axis", cp.tol_axis)->capture_default_str();
    s->add_option("--periodic-tol", cp.periodic_tol)->capture_default_str();
    s->add_option("--period-scan", cp.period_scan_limit)->capture_default_str();
  };
  auto* orbit = app.add_subcommand("orbit", "forward orbit with log-polar shadows");
  orbit_opts(orbit);
  orbit->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  auto* classify = app.add_subcommand("classify", "classify a forward orbit");
  orbit_opts(classify);

  DiscArgs disc;
  double t_star = 50.0;
  int m_max = 12;
  auto* escape = app.add_subcommand("escape-point", "point of the disc landing on [0, inf)");
  add_disc(escape, disc);
  escape->add_option("--t-star", t_star, "target height on the real axis")->capture_default_str();
  escape->add_option("--m-max", m_max, "largest stage tried")->capture_default_str();

  double vre = -1.0, vim = 0.0;
  int n_min = 0;
  auto* trans = app.add_subcommand("transitivity", "z in the disc with f^n(z) == v exactly");
  add_disc(trans, disc);
  trans->add_option("--v-re", vre, "target, real part")->capture_default_str();
  trans->add_option("--v-im", vim, "target, imaginary part")->capture_default_str();
  trans->add_option("--n-min", n_min, "smallest hit time accepted")->capture_default_str();

  auto* periodic = app.add_subcommand("periodic", "repelling periodic point in the disc");
  add_disc(periodic, disc);

  double s_exp = 0.0;
  auto* sens = app.add_subcommand("sensitivity", "sensitive-dependence pair in the disc");
  add_disc(sens, disc);
  sens->add_option("--s", s_exp, "target -e^s")->capture_default_str();

  std::string report_path;
  auto* verify = app.add_subcommand("verify", "replay a witness report");
  verify->add_option("report", report_path, "report JSON file")->required();

  GridArgs grid;
  ec_render_params rp;
  ec_render_params_default(&rp);
  std::string palette = "grayscale";
  auto* rescape = app.add_subcommand("render-escape", "escape-time map as binary PPM");
  add_grid(rescape, grid);
  rescape->add_option("--max-steps", rp.max_steps)->capture_default_str()->check(CLI::PositiveNumber);
  rescape->add_option("--threshold", rp.escape_re_threshold)->capture_default_str();
  rescape->add_option("--palette", palette)->check(CLI::IsMember({"grayscale", "classification"}))->capture_default_str();
  rescape->add_option("--threads", rp.threads)->capture_default_str();

  std::string domain = "UnitDisc";
  int dthreads = 1;
  auto* rdens = app.add_subcommand("render-density", "log hyperbolic density as binary PPM");
  add_grid(rdens, grid);
  rdens->add_option("--domain", domain, "UnitDisc, RightHalfPlane, StripPi, SlitPlanePos or SlitPlaneNeg")
      ->capture_default_str();
  rdens->add_option("--threads", dthreads)->capture_default_str();

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    apply_config(app, args);
  } catch (const Failure& f) {
    return f.code;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (orbit->parsed() || classify->parsed()) {
      ec_orbit* o = nullptr;
      check(ec_orbit_iterate({zre, zim}, steps, &cp, &o), "orbit");
      std::string text;
      if (orbit->parsed()) {
        char* s = nullptr;
        const ec_status st = format == "json" ? ec_orbit_json(o, &s) : ec_orbit_csv(o, &s);
        text = take(s);
        if (st != EC_OK) ec_orbit_free(o);
        check(st, "orbit");
      } else {
        ec_classification c{};
        ec_orbit_classification(o, &c);
        text = ec_orbit_class_name(c.kind);
        if (c.kind == EC_PERIODIC_DETECTED) text += " period=" + std::to_string(c.period);
        if (c.kind == EC_OVERFLOWED) text += " at_step=" + std::to_string(c.at_step);
        text += " steps=" + std::to_string(ec_orbit_length(o) - 1);
      }
      ec_orbit_free(o);
      emit(text, out);
    } else if (escape->parsed()) {
      ec_report* r = nullptr;
      const ec_status st = ec_find_escaping_point(disc.get(), t_star, m_max, &r);
      report_out(st, r, "escape-point", out);
    } else if (trans->parsed()) {
      double rho = 0.0;
      if (ec_rho_for_target({vre, vim}, &rho) == EC_OK && rho > kRhoWarn)
        std::cerr << "expchaos: warning: branch height " << rho
                  << " is close to the double overflow limit; the search will likely fail\n";
      ec_report* r = nullptr;
      const ec_status st = ec_transitivity_witness(disc.get(), {vre, vim}, n_min, seed, &r);
      report_out(st, r, "transitivity", out);
    } else if (periodic->parsed()) {
      ec_report* r = nullptr;
      const ec_status st = ec_find_periodic(disc.get(), seed, &r);
      report_out(st, r, "periodic", out);
    } else if (sens->parsed()) {
      ec_report* r = nullptr;
      const ec_status st = ec_sensitivity_witness(disc.get(), s_exp, seed, &r);
      report_out(st, r, "sensitivity", out);
    } else if (verify->parsed()) {
      const std::string text = slurp(report_path);
      ec_report* r = nullptr;
      check(ec_report_from_json(text.c_str(), &r), "verify");
      int ok = 0;
      char* failures = nullptr;
      const ec_status st = ec_report_verify(r, &ok, &failures);
      ec_report_free(r);
      check(st, "verify");
      const std::string f = take(failures);
      emit(ok ? "ok" : "FAILED " + f, out);
      if (!ok) return kExitFailure;
    } else if (rescape->parsed() || rdens->parsed()) {
      if (out.empty() || out == "-") {
        std::cerr << "expchaos: renders need --out <file.ppm>\n";
        return kExitFailure;
      }
      ec_image* img = nullptr;
      if (rescape->parsed()) {
        rp.palette = palette == "classification" ? EC_PALETTE_CLASSIFICATION : EC_PALETTE_GRAYSCALE;
        check(ec_render_escape(&grid.g, &rp, &img), "render-escape");
      } else {
        check(ec_render_density(domain.c_str(), &grid.g, dthreads, &img), "render-density");
      }
      char hash[17] = {};
      const ec_status ws = ec_image_write_ppm(img, out.c_str());
      ec_image_hash(img, hash);
      ec_image_free(img);
      check(ws, "write");
      std::cout << out << " " << hash << "\n";
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return kExitOk;
}
