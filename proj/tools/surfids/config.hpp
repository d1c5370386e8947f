#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "surfstates/counting.hpp"
#include "surfstates/disorder.hpp"
#include "surfstates/hamiltonians.hpp"

namespace surfids {

struct ParallelConfig {
  std::string kind = "explicit";  // explicit | delta | grid
  std::vector<double> energies;   // explicit
  double floor = 0.0;             // explicit
  double alpha = 0.0;             // delta
  std::string potential;          // grid: harmonic | square_well | gaussian_well
  double strength = 1.0;          // harmonic coefficient or well depth
  double width = 1.0;             // well width
  int dimension = 1;              // grid: longitudinal dimension
  double half_width = 0.0;        // grid and delta: domain [-half_width, half_width]^l
  double h = 0.0;                 // grid spacing
  int count = 1;                  // number of bound states to keep
};

struct ProfileConfig {
  std::string shape = "compact";  // compact | power | gaussian
  double amplitude = 1.0;
  double half_width = 0.5;
  double kappa = 0.0;
  double exponent = 2.0;
  double rate = 1.0;
  std::string longitudinal = "constant";  // constant | indicator
  double longitudinal_half_width = 1.0;
};

struct CouplingConfig {
  std::string law = "uniform";  // uniform | power
  double E0 = 1.0;
  double kappa = 1.0;
};

struct EnergyGrid {
  std::vector<double> values;
};

struct SandwichConfig {
  std::vector<std::string> kinds;  // global | finite_volume | ground_edge | internal_edge
  std::optional<double> delta;
  std::optional<double> lambda_star;
  std::optional<double> delta_minus;
  std::optional<double> delta_plus;
  int j = 1;
  int lambda_count = 20;
  double stat_tol = 2.0;
  double finite_size_tol = 0.0;
};

struct LifshitsConfig {
  std::string input;                 // curve CSV, relative to the config file
  std::string synthetic;             // power | loglog (used when input is empty)
  double synthetic_exponent = 0.0;
  double synthetic_constant = 1.0;
  std::string axis = "log_lambda";   // log_lambda | loglog_lambda
  double edge = 0.0;                 // lambda = E - edge for curve input
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int points = 40;
  double confidence = 0.95;
};

struct ExperimentConfig {
  std::filesystem::path source_dir;

  // model
  Eigen::MatrixXd B;
  std::optional<ParallelConfig> parallel;
  std::optional<ProfileConfig> profile;
  CouplingConfig coupling;

  // numerics
  std::vector<double> L;
  double h = 0.0;
  std::string mode = "injected";
  int levels = 0;  // 0 means all kept bound states
  int halo = -1;
  double tail_tol = 1e-6;
  EnergyGrid energies;
  std::size_t realizations = 1;
  std::uint64_t seed = 0;
  std::size_t dense_cap = surfstates::kDefaultDenseCap;
  std::size_t max_dimension = surfstates::kDefaultMaxDimension;

  // study
  std::optional<double> ladder_cap;
  SandwichConfig sandwich;
  LifshitsConfig lifshits;

  bool has_disorder() const { return profile.has_value(); }
};

/// Parses and validates a YAML config. Throws surfstates::Error(ConfigInvalid) with a field path.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& source_dir = {});

/// Canonical text of the resolved config; identical configs give identical text.
std::string canonical_text(const ExperimentConfig& config);

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string digest(const std::string& text);

surfstates::ParallelSpectrum build_parallel(const ParallelConfig& config);
surfstates::SurfaceModel build_model(const ExperimentConfig& config);
surfstates::LatticeWindow window_for(const ExperimentConfig& config, double L);

}  // namespace surfids
