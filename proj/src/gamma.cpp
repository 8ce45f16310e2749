#include "gsavg/gamma.hpp"

#include <stdexcept>
#include <string>

namespace gsavg {

double eval_gamma(GammaKind kind, double t) {
  if (std::isnan(t)) throw std::domain_error("gamma: argument is NaN");
  if (t < 0.0) throw std::domain_error("gamma: argument is negative");
  if (std::isinf(t)) return kind == GammaKind::exp_saturate ? 1.0 : t;
  return apply_gamma(kind, t);
}

bool is_bounded(GammaKind kind) { return kind == GammaKind::exp_saturate; }

bool is_admissible(GammaKind kind) { return kind != GammaKind::identity; }

std::string_view gamma_name(GammaKind kind) {
  switch (kind) {
    case GammaKind::exp_saturate: return "exp";
    case GammaKind::sqrt_half: return "sqrt";
    case GammaKind::log1p: return "log";
    case GammaKind::identity: return "identity";
  }
  return "?";
}

GammaKind parse_gamma(std::string_view name) {
  if (name == "exp" || name == "exp_saturate") return GammaKind::exp_saturate;
  if (name == "sqrt" || name == "sqrt_half") return GammaKind::sqrt_half;
  if (name == "log" || name == "log1p") return GammaKind::log1p;
  if (name == "identity" || name == "id") return GammaKind::identity;
  throw std::invalid_argument("unknown gamma '" + std::string(name) + "' (expected exp|sqrt|log|identity)");
}

}  // namespace gsavg
