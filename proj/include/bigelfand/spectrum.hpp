// Stability analysis: spherical-harmonic mode forms for the quadratic-form
// inequality int e^u phi^2 <= int |lap phi|^2, verdicts on truncated domains
// with a Hardy-Rellich tail certificate, the threshold beta1, and Morse
// indices for the ball problem.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bigelfand/banded.hpp"
#include "bigelfand/radial.hpp"

namespace bgf::spectrum {

enum class Bc {
  clamped_value,   // phi = 0 at both interval ends, phi' free
  origin_regular,  // left end: phi free for k = 0, phi = 0 for k >= 1; right end clamped
};

struct ModeSpectrum {
  int mode_k = 0;
  double mu_k = 0.0;   // k(k+N-2)
  double nu_min = 0.0; // smallest generalized Rayleigh quotient
  double rho = 0.0, R = 0.0;
  Bc bc = Bc::clamped_value;
};

enum class Stability { stable, stable_outside_compact, unstable_everywhere_outside };

struct StabilityVerdict {
  Stability status = Stability::unstable_everywhere_outside;
  std::optional<double> rho_star;  // present for stable_outside_compact
  int k_scan_max = 0;
  bool tail_certified = false;
  std::vector<ModeSpectrum> modes;       // full-domain scan, k = 0..k_max
  int minimizing_k = 0;
  double nu_min_full = 0.0;
  std::vector<std::pair<double, double>> annulus_scan;  // (rho, min-over-k nu)
};

struct SpectrumConfig {
  int k_max = 8;
  double truncation_radius = 40.0;
  double tol_spec = 1e-3;
  // geometric rho scan for the stable-outside-compact search
  double rho_min = 0.25, rho_max = 4.0, rho_factor = 2.0;
};

// Energy form A = int (phi'' + (N-1)phi'/r - mu_k phi/r^2)^2 r^{N-1} dr and
// potential form B = int scale e^u phi^2 r^{N-1} dr, second-order finite
// differences on the profile grid restricted to [rho, R].
num::QuadraticFormPair assemble_mode_forms(const radial::RadialProfile& p, int mode_k, double rho,
                                           double R, Bc bc, double potential_scale = 1.0);

// Pointwise margin N^2(N-4)^2/(16 r^4) - e^u and the largest radius at which
// it is negative (0 when nonnegative everywhere).
struct HardyRellichMargin {
  std::vector<double> margin;
  double last_negative_radius = 0.0;
  bool tail_certified_beyond(double radius) const { return last_negative_radius < radius; }
};
HardyRellichMargin hardy_rellich_margin(const radial::RadialProfile& p, double potential_scale = 1.0);

// Throws std::runtime_error when the truncated-domain evidence is ambiguous
// (tail not certifiable yet every tested annulus looks stable).
StabilityVerdict classify_stability(const radial::RadialProfile& p, const SpectrumConfig& cfg = {});

// Bisection on beta of the classify_stability status (not-stable below,
// stable above); asserts beta1 > beta0.
num::Bracket find_beta1(int dim, double tol, const radial::ShootConfig& shoot_cfg = {},
                        const SpectrumConfig& spec_cfg = {});

struct InterpolatedCheck {
  double worst_ratio = 0.0;
  std::size_t n_samples = 0;
};

// Worst ratio int e^{u/2} phi^2 / int |grad phi|^2 over a family of radial
// bump test functions; requires a verified-stable input.
InterpolatedCheck interpolated_form_check(const radial::RadialProfile& p,
                                          const StabilityVerdict& verdict,
                                          double potential_scale = 1.0);

struct MorseIndex {
  int index = 0;
  bool borderline = false;  // some eigenvalue within 1e-8 of 1 (excluded from the count)
  std::vector<int> per_mode;
};

// Morse index of a Navier ball solution: generalized eigenvalues nu < 1
// summed over modes k <= k_max with the multiplicity of each spherical
// harmonic space.
MorseIndex morse_index_navier(const radial::RadialProfile& ball_profile, double lambda, int k_max);

// dimension of the degree-k spherical harmonic space on S^{N-1}
long harmonic_multiplicity(int dim, int k);

std::string verdict_to_string(Stability s);

// JSON report {beta, dim, modes:[{k, nu_min}], verdict, rho_star, tail_certified}
std::string spectrum_report_json(const radial::RadialProfile& p, const StabilityVerdict& v);

}  // namespace bgf::spectrum
