#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace gsavg {

/// Transforms applied to per-block scaled squared distances.
enum class GammaKind {
  exp_saturate,  // 1 - exp(-t)
  sqrt_half,     // sqrt(t) / 2
  log1p,         // log(1 + t)
  identity,      // t
};

inline constexpr std::array<GammaKind, 4> kAllGammas{
    GammaKind::exp_saturate, GammaKind::sqrt_half, GammaKind::log1p, GammaKind::identity};

/// Unchecked evaluation for hot loops; t must be >= 0.
inline double apply_gamma(GammaKind kind, double t) {
  switch (kind) {
    case GammaKind::exp_saturate: return -std::expm1(-t);
    case GammaKind::sqrt_half: return 0.5 * std::sqrt(t);
    case GammaKind::log1p: return std::log1p(t);
    case GammaKind::identity: return t;
  }
  return t;
}

/// Checked evaluation. Accepts t in [0, +inf]; throws std::domain_error on
/// negative or NaN arguments.
double eval_gamma(GammaKind kind, double t);

/// True only for the saturating exponential.
bool is_bounded(GammaKind kind);

/// Derivative is non-constant and completely monotone. Hard-coded per kind.
bool is_admissible(GammaKind kind);

/// CLI spelling: exp, sqrt, log, identity.
std::string_view gamma_name(GammaKind kind);
/// Accepts the CLI spellings and the long enum names.
GammaKind parse_gamma(std::string_view name);

}  // namespace gsavg
