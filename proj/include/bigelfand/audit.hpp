// Numerical verification of the derived estimates along computed solutions:
// capacitary growth fits, the pointwise lower bound v >= sqrt(2) e^{u/2},
// the Kato differential inequality, Liouville tail decay, and the
// first-estimate inequalities with scaled cutoffs.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bigelfand/numerics.hpp"
#include "bigelfand/radial.hpp"
#include "bigelfand/spectrum.hpp"

namespace bgf::audit {

struct EstimateReport {
  std::string estimate_id;
  std::optional<num::PowerFit> fit;
  std::optional<double> min_margin;
  std::optional<double> margin_location;
  double tolerance = 0.0;
  bool passed = false;
  std::string inputs;
  std::string note;
};

std::string report_to_json_line(const EstimateReport& r);

// Annulus integrals int_{A_R} e^{p u} fitted as a power of R and compared
// against the capacitary bound exponent N - 4p.
EstimateReport capacitary_audit(const radial::RadialProfile& p, double p_val,
                                std::span<const double> radii);

// same machinery for the v-moment: int_{A_R} v^q against N - 2q
EstimateReport capacitary_audit_v(const radial::RadialProfile& p, double q_val,
                                  std::span<const double> radii);

// min over nodes of v - sqrt(2) e^{u/2}; requires a verified-stable input
EstimateReport pointwise_lower_bound(const radial::RadialProfile& p,
                                     const spectrum::StabilityVerdict& verdict);

struct KatoReport {
  double min_margin = 0.0;
  double location = 0.0;
  std::size_t positive_nodes = 0;
  bool vacuous = false;      // w <= 0 everywhere
  bool non_solution = false; // inequality failed beyond discretization error
  bool passed = false;
};

// margin of lap w - e^{u/2} w / sqrt(2) for w = sqrt(2) e^{u/2} - v on the
// nodes where w > 0
KatoReport kato_check(const radial::RadialProfile& p);

struct LiouvilleReport {
  double value_at_rmax = 0.0;
  double extrapolated = 0.0;
  bool limit_zero = false;
  double singular_constant = 0.0;  // 8(N-2)(N-4)
};

LiouvilleReport liouville_decay(const radial::RadialProfile& p);

struct LemmaFeReport {
  double alpha = 0.0, cutoff_radius = 0.0;
  double lhs1 = 0, rhs1_main = 0, rhs1_grad = 0;  // lhs <= main + C * grad
  double lhs2 = 0, rhs2_main = 0, rhs2_grad = 0;
  double c1_required = 0.0, c2_required = 0.0;  // smallest admissible C
  bool v_positive = true;
  // alpha = 1 degeneracy: relative defect of the exact identity
  // int |grad(v phi)|^2 = int v^2 |grad phi|^2 + int e^u v phi^2
  std::optional<double> identity_defect;
};

LemmaFeReport lemma_fe_audit(const radial::RadialProfile& p, double alpha, double cutoff_radius);

}  // namespace bgf::audit
