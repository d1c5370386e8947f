#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "surfstates/curve_io.hpp"
#include "surfstates/error.hpp"
#include "surfstates/magnetic.hpp"

namespace surfids {

using surfstates::Error;
using surfstates::ErrorKind;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ConfigInvalid, path + ": " + what);
}

std::string join(const std::set<std::string>& keys) {
  std::string out;
  for (const auto& k : keys) out += (out.empty() ? "" : ", ") + k;
  return out;
}

void check_keys(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) {
  if (!node.IsMap()) invalid(path, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) invalid(path.empty() ? key : path + "." + key, "unknown key (allowed: " + join(allowed) + ")");
  }
}

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) invalid(path, "expected a number");
  const auto text = node.as<std::string>();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    invalid(path, "expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) invalid(path, "expected a finite number, got '" + text + "'");
  return v;
}

double positive(const YAML::Node& node, const std::string& path) {
  const double v = number(node, path);
  if (!(v > 0.0)) invalid(path, "must be positive");
  return v;
}

long long integer(const YAML::Node& node, const std::string& path) {
  const double v = number(node, path);
  if (v != std::floor(v) || std::abs(v) > 9e15) invalid(path, "expected an integer");
  return static_cast<long long>(v);
}

std::string word(const YAML::Node& node, const std::string& path, const std::set<std::string>& choices) {
  if (!node.IsScalar()) invalid(path, "expected one of " + join(choices));
  const auto v = node.as<std::string>();
  if (!choices.empty() && !choices.count(v)) invalid(path, "expected one of " + join(choices) + ", got '" + v + "'");
  return v;
}

std::vector<double> numbers(const YAML::Node& node, const std::string& path) {
  std::vector<double> out;
  if (node.IsScalar()) return {number(node, path)};
  if (!node.IsSequence()) invalid(path, "expected a number or a list of numbers");
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(number(node[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::uint64_t seed_value(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) invalid(path, "expected a non-negative integer");
  const auto text = node.as<std::string>();
  try {
    std::size_t used = 0;
    if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
    const auto v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    invalid(path, "expected a non-negative 64-bit integer, got '" + text + "'");
  }
}

Eigen::MatrixXd parse_field(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"matrix", "b", "n"});
  if (node["matrix"] && (node["b"] || node["n"])) invalid(path, "give either matrix or (b, n), not both");
  if (node["matrix"]) {
    const auto m = node["matrix"];
    const auto mp = child(path, "matrix");
    if (!m.IsSequence() || m.size() == 0) invalid(mp, "expected a square list of rows");
    const auto d = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd B(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto row = numbers(m[i], mp + "[" + std::to_string(i) + "]");
      if (static_cast<Eigen::Index>(row.size()) != d) invalid(mp, "matrix is not square");
      for (Eigen::Index j = 0; j < d; ++j) B(i, j) = row[j];
    }
    try {
      surfstates::canonicalize_field(B);
    } catch (const surfstates::NotAntisymmetric& e) {
      invalid(mp, e.what());
    }
    return B;
  }
  if (!node["b"]) invalid(path, "missing matrix or b");
  const auto b = numbers(node["b"], child(path, "b"));
  for (double v : b)
    if (!(v > 0.0)) invalid(child(path, "b"), "frequencies must be positive");
  const long long n = node["n"] ? integer(node["n"], child(path, "n")) : 0;
  if (n < 0) invalid(child(path, "n"), "must be non-negative");
  return surfstates::canonical_field_matrix(surfstates::MagneticStructure::from_frequencies(b, static_cast<int>(n)));
}

ParallelConfig parse_parallel(const YAML::Node& node, const std::string& path) {
  check_keys(node, path,
             {"kind", "energies", "floor", "alpha", "potential", "strength", "width", "dimension", "half_width", "h",
              "count"});
  ParallelConfig p;
  if (!node["kind"]) invalid(path, "missing kind");
  p.kind = word(node["kind"], child(path, "kind"), {"explicit", "delta", "grid"});
  if (node["count"]) {
    const auto c = integer(node["count"], child(path, "count"));
    if (c < 1) invalid(child(path, "count"), "must be at least 1");
    p.count = static_cast<int>(c);
  }
  auto need = [&](const char* key) {
    if (!node[key]) invalid(child(path, key), "required for kind " + p.kind);
    return node[key];
  };
  if (p.kind == "explicit") {
    p.energies = numbers(need("energies"), child(path, "energies"));
    std::sort(p.energies.begin(), p.energies.end());
    if (node["floor"]) p.floor = number(node["floor"], child(path, "floor"));
    if (!node["count"]) p.count = static_cast<int>(p.energies.size());
    for (double e : p.energies)
      if (!(e < p.floor)) invalid(child(path, "energies"), "every level must lie below the floor");
  } else {
    p.half_width = positive(need("half_width"), child(path, "half_width"));
    p.h = positive(need("h"), child(path, "h"));
    if (p.kind == "delta") {
      p.alpha = positive(need("alpha"), child(path, "alpha"));
    } else {
      p.potential = word(need("potential"), child(path, "potential"), {"harmonic", "square_well", "gaussian_well"});
      if (node["strength"]) p.strength = positive(node["strength"], child(path, "strength"));
      if (node["width"]) p.width = positive(node["width"], child(path, "width"));
      if (node["dimension"]) {
        const auto l = integer(node["dimension"], child(path, "dimension"));
        if (l < 1 || l > 3) invalid(child(path, "dimension"), "must be 1, 2 or 3");
        p.dimension = static_cast<int>(l);
      }
    }
  }
  return p;
}

ProfileConfig parse_profile(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"shape", "amplitude", "half_width", "kappa", "exponent", "rate", "longitudinal"});
  ProfileConfig p;
  if (!node["shape"]) invalid(path, "missing shape");
  p.shape = word(node["shape"], child(path, "shape"), {"compact", "power", "gaussian"});
  if (node["amplitude"]) p.amplitude = positive(node["amplitude"], child(path, "amplitude"));
  if (node["half_width"]) p.half_width = positive(node["half_width"], child(path, "half_width"));
  if (node["kappa"]) p.kappa = positive(node["kappa"], child(path, "kappa"));
  if (node["exponent"]) p.exponent = positive(node["exponent"], child(path, "exponent"));
  if (node["rate"]) p.rate = positive(node["rate"], child(path, "rate"));
  if (p.shape == "power" && !node["kappa"]) invalid(child(path, "kappa"), "required for the power shape");
  if (node["longitudinal"]) {
    const auto l = node["longitudinal"];
    const auto lp = child(path, "longitudinal");
    check_keys(l, lp, {"kind", "half_width"});
    if (!l["kind"]) invalid(lp, "missing kind");
    p.longitudinal = word(l["kind"], child(lp, "kind"), {"constant", "indicator"});
    if (l["half_width"]) p.longitudinal_half_width = positive(l["half_width"], child(lp, "half_width"));
  }
  return p;
}

EnergyGrid parse_energies(const YAML::Node& node, const std::string& path) {
  EnergyGrid g;
  if (node.IsMap()) {
    check_keys(node, path, {"from", "to", "count"});
    if (!node["from"] || !node["to"] || !node["count"]) invalid(path, "needs from, to and count");
    const double a = number(node["from"], child(path, "from"));
    const double b = number(node["to"], child(path, "to"));
    const auto n = integer(node["count"], child(path, "count"));
    if (n < 1) invalid(child(path, "count"), "must be at least 1");
    if (n > 1 && !(b > a)) invalid(path, "to must exceed from");
    for (long long k = 0; k < n; ++k) g.values.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(k) / (n - 1));
  } else {
    g.values = numbers(node, path);
  }
  if (!std::is_sorted(g.values.begin(), g.values.end())) invalid(path, "energies must be sorted");
  return g;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& source_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  c.source_dir = source_dir;
  if (!root || root.IsNull()) invalid("config", "empty document");
  check_keys(root, "", {"model", "numerics", "study"});

  if (!root["model"]) invalid("model", "missing block");
  const auto model = root["model"];
  check_keys(model, "model", {"field", "parallel", "profile", "coupling"});
  if (!model["field"]) invalid("model.field", "missing block");
  c.B = parse_field(model["field"], "model.field");
  if (model["parallel"]) c.parallel = parse_parallel(model["parallel"], "model.parallel");
  if (model["profile"]) c.profile = parse_profile(model["profile"], "model.profile");
  if (model["coupling"]) {
    const auto n = model["coupling"];
    check_keys(n, "model.coupling", {"law", "E0", "kappa"});
    if (n["law"]) c.coupling.law = word(n["law"], "model.coupling.law", {"uniform", "power"});
    if (n["E0"]) c.coupling.E0 = positive(n["E0"], "model.coupling.E0");
    if (n["kappa"]) c.coupling.kappa = positive(n["kappa"], "model.coupling.kappa");
  }
  if (c.profile && !model["coupling"]) invalid("model.coupling", "required when a profile is given");

  if (root["numerics"]) {
    const auto n = root["numerics"];
    const std::string p = "numerics";
    check_keys(n, p,
               {"L", "h", "mode", "levels", "halo", "tail_tol", "energies", "realizations", "seed", "dense_cap",
                "max_dimension"});
    if (n["L"]) {
      c.L = numbers(n["L"], "numerics.L");
      for (double v : c.L)
        if (!(v > 0.0)) invalid("numerics.L", "side lengths must be positive");
    }
    if (n["h"]) c.h = positive(n["h"], "numerics.h");
    if (n["mode"]) c.mode = word(n["mode"], "numerics.mode", {"injected", "full_grid"});
    if (n["levels"]) {
      const auto v = integer(n["levels"], "numerics.levels");
      if (v < 0) invalid("numerics.levels", "must be non-negative");
      c.levels = static_cast<int>(v);
    }
    if (n["halo"]) {
      if (n["halo"].IsScalar() && n["halo"].as<std::string>() == "auto") {
        c.halo = -1;
      } else {
        const auto v = integer(n["halo"], "numerics.halo");
        if (v < 0) invalid("numerics.halo", "must be non-negative or auto");
        c.halo = static_cast<int>(v);
      }
    }
    if (n["tail_tol"]) c.tail_tol = positive(n["tail_tol"], "numerics.tail_tol");
    if (n["energies"]) c.energies = parse_energies(n["energies"], "numerics.energies");
    if (n["realizations"]) {
      const auto v = integer(n["realizations"], "numerics.realizations");
      if (v < 1) invalid("numerics.realizations", "must be at least 1");
      c.realizations = static_cast<std::size_t>(v);
    }
    if (n["seed"]) c.seed = seed_value(n["seed"], "numerics.seed");
    if (n["dense_cap"]) {
      const auto v = integer(n["dense_cap"], "numerics.dense_cap");
      if (v < 0) invalid("numerics.dense_cap", "must be non-negative");
      c.dense_cap = static_cast<std::size_t>(v);
    }
    if (n["max_dimension"]) {
      const auto v = integer(n["max_dimension"], "numerics.max_dimension");
      if (v < 1) invalid("numerics.max_dimension", "must be positive");
      c.max_dimension = static_cast<std::size_t>(v);
    }
  }

  if (root["study"]) {
    const auto s = root["study"];
    check_keys(s, "study", {"ladder_cap", "sandwich", "lifshits"});
    if (s["ladder_cap"]) c.ladder_cap = positive(s["ladder_cap"], "study.ladder_cap");
    if (s["sandwich"]) {
      const auto w = s["sandwich"];
      const std::string p = "study.sandwich";
      check_keys(w, p,
                 {"kinds", "delta", "lambda_star", "delta_minus", "delta_plus", "j", "lambda_count", "stat_tol",
                  "finite_size_tol"});
      if (w["kinds"]) {
        const auto k = w["kinds"];
        const std::set<std::string> allowed{"global", "finite_volume", "ground_edge", "internal_edge"};
        if (k.IsScalar()) {
          c.sandwich.kinds.push_back(word(k, p + ".kinds", allowed));
        } else if (k.IsSequence()) {
          for (std::size_t i = 0; i < k.size(); ++i)
            c.sandwich.kinds.push_back(word(k[i], p + ".kinds[" + std::to_string(i) + "]", allowed));
        } else {
          invalid(p + ".kinds", "expected a list");
        }
      }
      if (w["delta"]) c.sandwich.delta = number(w["delta"], p + ".delta");
      if (w["lambda_star"]) c.sandwich.lambda_star = number(w["lambda_star"], p + ".lambda_star");
      if (w["delta_minus"]) c.sandwich.delta_minus = number(w["delta_minus"], p + ".delta_minus");
      if (w["delta_plus"]) c.sandwich.delta_plus = number(w["delta_plus"], p + ".delta_plus");
      if (w["j"]) {
        const auto v = integer(w["j"], p + ".j");
        if (v < 1) invalid(p + ".j", "levels are numbered from 1");
        c.sandwich.j = static_cast<int>(v);
      }
      if (w["lambda_count"]) {
        const auto v = integer(w["lambda_count"], p + ".lambda_count");
        if (v < 1) invalid(p + ".lambda_count", "must be at least 1");
        c.sandwich.lambda_count = static_cast<int>(v);
      }
      if (w["stat_tol"]) c.sandwich.stat_tol = number(w["stat_tol"], p + ".stat_tol");
      if (w["finite_size_tol"]) c.sandwich.finite_size_tol = number(w["finite_size_tol"], p + ".finite_size_tol");
    }
    if (s["lifshits"]) {
      const auto f = s["lifshits"];
      const std::string p = "study.lifshits";
      check_keys(f, p,
                 {"input", "synthetic", "exponent", "constant", "axis", "edge", "lambda_min", "lambda_max", "points",
                  "confidence"});
      auto& l = c.lifshits;
      if (f["input"]) l.input = word(f["input"], p + ".input", {});
      if (f["synthetic"]) l.synthetic = word(f["synthetic"], p + ".synthetic", {"power", "loglog"});
      if (f["exponent"]) l.synthetic_exponent = number(f["exponent"], p + ".exponent");
      if (f["constant"]) l.synthetic_constant = positive(f["constant"], p + ".constant");
      if (f["axis"]) l.axis = word(f["axis"], p + ".axis", {"log_lambda", "loglog_lambda"});
      if (f["edge"]) l.edge = number(f["edge"], p + ".edge");
      if (f["lambda_min"]) l.lambda_min = positive(f["lambda_min"], p + ".lambda_min");
      if (f["lambda_max"]) l.lambda_max = positive(f["lambda_max"], p + ".lambda_max");
      if (f["points"]) {
        const auto v = integer(f["points"], p + ".points");
        if (v < 2) invalid(p + ".points", "must be at least 2");
        l.points = static_cast<int>(v);
      }
      if (f["confidence"]) {
        l.confidence = number(f["confidence"], p + ".confidence");
        if (!(l.confidence > 0.0 && l.confidence < 1.0)) invalid(p + ".confidence", "must lie in (0, 1)");
      }
      if (l.input.empty() == l.synthetic.empty()) invalid(p, "give exactly one of input or synthetic");
      if (!(l.lambda_max > l.lambda_min)) invalid(p, "needs 0 < lambda_min < lambda_max");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

std::string canonical_text(const ExperimentConfig& c) {
  using surfstates::format_number;
  std::ostringstream out;
  auto list = [&](const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
    return s + "]";
  };
  auto opt = [&](const std::optional<double>& v) { return v ? format_number(*v) : std::string("default"); };
  out << "model.field.matrix: [";
  for (Eigen::Index i = 0; i < c.B.rows(); ++i) {
    std::vector<double> row(c.B.cols());
    for (Eigen::Index j = 0; j < c.B.cols(); ++j) row[j] = c.B(i, j);
    out << (i ? ", " : "") << list(row);
  }
  out << "]\n";
  if (c.parallel) {
    const auto& p = *c.parallel;
    out << "model.parallel.kind: " << p.kind << "\n";
    out << "model.parallel.count: " << p.count << "\n";
    if (p.kind == "explicit") {
      out << "model.parallel.energies: " << list(p.energies) << "\n";
      out << "model.parallel.floor: " << format_number(p.floor) << "\n";
    } else {
      out << "model.parallel.half_width: " << format_number(p.half_width) << "\n";
      out << "model.parallel.h: " << format_number(p.h) << "\n";
      if (p.kind == "delta") {
        out << "model.parallel.alpha: " << format_number(p.alpha) << "\n";
      } else {
        out << "model.parallel.potential: " << p.potential << "\n";
        out << "model.parallel.strength: " << format_number(p.strength) << "\n";
        out << "model.parallel.width: " << format_number(p.width) << "\n";
        out << "model.parallel.dimension: " << p.dimension << "\n";
      }
    }
  }
  if (c.profile) {
    const auto& p = *c.profile;
    out << "model.profile.shape: " << p.shape << "\n";
    out << "model.profile.amplitude: " << format_number(p.amplitude) << "\n";
    if (p.shape == "compact") out << "model.profile.half_width: " << format_number(p.half_width) << "\n";
    if (p.shape == "power") out << "model.profile.kappa: " << format_number(p.kappa) << "\n";
    if (p.shape == "gaussian") {
      out << "model.profile.exponent: " << format_number(p.exponent) << "\n";
      out << "model.profile.rate: " << format_number(p.rate) << "\n";
    }
    out << "model.profile.longitudinal.kind: " << p.longitudinal << "\n";
    if (p.longitudinal == "indicator")
      out << "model.profile.longitudinal.half_width: " << format_number(p.longitudinal_half_width) << "\n";
    out << "model.coupling.law: " << c.coupling.law << "\n";
    out << "model.coupling.E0: " << format_number(c.coupling.E0) << "\n";
    if (c.coupling.law == "power") out << "model.coupling.kappa: " << format_number(c.coupling.kappa) << "\n";
  }
  out << "numerics.L: " << list(c.L) << "\n";
  out << "numerics.h: " << format_number(c.h) << "\n";
  out << "numerics.mode: " << c.mode << "\n";
  out << "numerics.levels: " << c.levels << "\n";
  out << "numerics.halo: " << (c.halo < 0 ? std::string("auto") : std::to_string(c.halo)) << "\n";
  out << "numerics.tail_tol: " << format_number(c.tail_tol) << "\n";
  out << "numerics.energies: " << list(c.energies.values) << "\n";
  out << "numerics.realizations: " << c.realizations << "\n";
  out << "numerics.seed: " << c.seed << "\n";
  out << "numerics.dense_cap: " << c.dense_cap << "\n";
  out << "numerics.max_dimension: " << c.max_dimension << "\n";
  out << "study.ladder_cap: " << opt(c.ladder_cap) << "\n";
  std::string kinds;
  for (const auto& k : c.sandwich.kinds) kinds += (kinds.empty() ? "" : ", ") + k;
  out << "study.sandwich.kinds: [" << kinds << "]\n";
  out << "study.sandwich.j: " << c.sandwich.j << "\n";
  out << "study.sandwich.delta: " << opt(c.sandwich.delta) << "\n";
  out << "study.sandwich.lambda_star: " << opt(c.sandwich.lambda_star) << "\n";
  out << "study.sandwich.delta_minus: " << opt(c.sandwich.delta_minus) << "\n";
  out << "study.sandwich.delta_plus: " << opt(c.sandwich.delta_plus) << "\n";
  out << "study.sandwich.lambda_count: " << c.sandwich.lambda_count << "\n";
  out << "study.sandwich.stat_tol: " << format_number(c.sandwich.stat_tol) << "\n";
  out << "study.sandwich.finite_size_tol: " << format_number(c.sandwich.finite_size_tol) << "\n";
  const auto& l = c.lifshits;
  if (!l.input.empty() || !l.synthetic.empty()) {
    out << "study.lifshits.input: " << l.input << "\n";
    out << "study.lifshits.synthetic: " << l.synthetic << "\n";
    out << "study.lifshits.exponent: " << format_number(l.synthetic_exponent) << "\n";
    out << "study.lifshits.constant: " << format_number(l.synthetic_constant) << "\n";
    out << "study.lifshits.axis: " << l.axis << "\n";
    out << "study.lifshits.edge: " << format_number(l.edge) << "\n";
    out << "study.lifshits.lambda_min: " << format_number(l.lambda_min) << "\n";
    out << "study.lifshits.lambda_max: " << format_number(l.lambda_max) << "\n";
    out << "study.lifshits.points: " << l.points << "\n";
    out << "study.lifshits.confidence: " << format_number(l.confidence) << "\n";
  }
  return out.str();
}

std::string digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
  return out;
}

surfstates::ParallelSpectrum build_parallel(const ParallelConfig& p) {
  using namespace surfstates;
  if (p.kind == "explicit") return solve_parallel(ExplicitSpectrumModel{p.energies, p.floor}, std::nullopt, p.count);
  const int l = p.kind == "delta" ? 1 : p.dimension;
  const auto grid = LatticeWindow::cube(l, 2.0 * p.half_width, p.h);
  if (p.kind == "delta") return solve_parallel(DeltaWellModel{p.alpha}, grid, p.count);
  GridPotentialModel model;
  const double s = p.strength;
  const double w = p.width;
  if (p.potential == "harmonic") {
    model.u = [s](const std::vector<double>& y) {
      double r2 = 0.0;
      for (double v : y) r2 += v * v;
      return s * r2;
    };
    model.confining = true;
  } else if (p.potential == "square_well") {
    model.u = [s, w](const std::vector<double>& y) {
      double r2 = 0.0;
      for (double v : y) r2 += v * v;
      return r2 < w * w ? -s : 0.0;
    };
  } else {
    model.u = [s, w](const std::vector<double>& y) {
      double r2 = 0.0;
      for (double v : y) r2 += v * v;
      return -s * std::exp(-r2 / (w * w));
    };
  }
  model.name = p.potential;
  return solve_parallel(model, grid, p.count);
}

surfstates::SurfaceModel build_model(const ExperimentConfig& c) {
  using namespace surfstates;
  if (!c.parallel) throw Error(ErrorKind::ConfigInvalid, "model.parallel: required for this study");
  SurfaceModel m;
  m.B = c.B;
  m.parallel = build_parallel(*c.parallel);
  const int kept = static_cast<int>(m.parallel.eigenpairs.size());
  if (c.mode == "full_grid") {
    if (!m.parallel.grid) throw Error(ErrorKind::ConfigInvalid, "numerics.mode: full_grid needs a grid parallel model");
    m.mode = LongitudinalMode::full_grid();
  } else {
    const int r = c.levels == 0 ? kept : c.levels;
    if (r > kept) {
      throw Error(ErrorKind::ConfigInvalid,
                  "numerics.levels: " + std::to_string(r) + " requested but only " + std::to_string(kept) + " bound states");
    }
    m.mode = LongitudinalMode::injected(r);
  }
  if (c.profile) {
    const auto& p = *c.profile;
    TransverseShape shape;
    if (p.shape == "compact") {
      shape = CompactShape{p.half_width, p.amplitude};
    } else if (p.shape == "power") {
      shape = PowerLawShape{p.kappa, p.amplitude};
    } else {
      shape = GaussianClassShape{p.exponent, p.rate, p.amplitude};
    }
    LongitudinalFactor factor = ConstantFactor{};
    if (p.longitudinal == "indicator") factor = IndicatorFactor{p.longitudinal_half_width};
    const auto law = c.coupling.law == "uniform" ? CouplingLaw::uniform(c.coupling.E0)
                                                 : CouplingLaw::power(c.coupling.kappa, c.coupling.E0);
    m.disorder = DisorderModel{{shape, factor}, law, c.halo, c.tail_tol};
  }
  return m;
}

surfstates::LatticeWindow window_for(const ExperimentConfig& c, double L) {
  if (!(c.h > 0.0)) throw Error(ErrorKind::ConfigInvalid, "numerics.h: required for this study");
  try {
    return surfstates::LatticeWindow::cube(static_cast<int>(c.B.rows()), L, c.h);
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("numerics.L/h: ") + e.what());
  }
}

}  // namespace surfids
