#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gsavg/blocks.hpp"
#include "gsavg/dataset.hpp"
#include "gsavg/gamma.hpp"
#include "gsavg/kernels.hpp"

namespace gsavg {

enum class Variant { avg, savg, gsavg };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

/// Outcome of classifying one point. A score of exactly zero goes to class 2
/// and is flagged as a tie.
struct Decision {
  double score = 0.0;
  int label = 2;
  bool tie = false;

  static Decision from_score(double score);
};

/// Fitted average-distance classifier. Immutable after fit(); all methods
/// are const and safe to call concurrently.
///
/// avg and savg use the scaled squared Euclidean distance directly. gsavg
/// uses the block dissimilarity with the stored blocking and gamma.
class TrainedModel {
 public:
  Variant variant() const { return variant_; }
  GammaKind gamma() const { return gamma_; }
  const Blocking& blocking() const { return blocking_; }
  double dev1() const { return dev_[0]; }
  double dev2() const { return dev_[1]; }
  std::size_t dim() const { return blocking_.dim(); }
  std::size_t class_size(int label) const { return class_rows_[label - 1].rows.rows(); }
  std::uint64_t train_fingerprint() const { return train_fingerprint_; }
  const Dataset& train() const { return train_; }

  /// Mean dissimilarity from z to the training rows of one class.
  double cross_mean(std::span<const double> z, int label) const;

  double discriminant(std::span<const double> z) const;
  Decision classify(std::span<const double> z) const;

  /// Discriminants for every row of `points`; identical to calling
  /// discriminant() row by row.
  std::vector<double> discriminants(const Matrix& points, Exec exec = Exec::parallel) const;

  friend TrainedModel fit(const Dataset&, Variant, std::optional<Blocking>,
                          std::optional<GammaKind>);

 private:
  Variant variant_ = Variant::gsavg;
  GammaKind gamma_ = GammaKind::identity;
  Blocking blocking_;
  Dataset train_;
  std::uint64_t train_fingerprint_ = 0;
  // Class rows; in block order for gsavg, original order otherwise.
  std::array<BlockedRows, 2> class_rows_;
  std::array<double, 2> dev_{0.0, 0.0};
};

/// Fits a classifier. gsavg requires both blocking and gamma; avg/savg ignore
/// them (singleton blocks, identity gamma). Each class needs >= 2 rows.
TrainedModel fit(const Dataset& train, Variant variant, std::optional<Blocking> blocking = {},
                 std::optional<GammaKind> gamma = {});

/// Combines cross means and within-class deviations into the discriminant
/// (c2 - dev2/2) - (c1 - dev1/2).
inline double combine_discriminant(double cross1, double cross2, double dev1, double dev2) {
  return (cross2 - dev2 / 2.0) - (cross1 - dev1 / 2.0);
}

/// Fraction of rows of `test` whose predicted label differs from the truth.
double misclassification_rate(const TrainedModel& model, const Dataset& test,
                              Exec exec = Exec::parallel);

}  // namespace gsavg
