#include "gsavg/classifiers.hpp"

#include <stdexcept>
#include <string>

#include "gsavg/dissim.hpp"

namespace gsavg {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::avg: return "avg";
    case Variant::savg: return "savg";
    case Variant::gsavg: return "gsavg";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "avg") return Variant::avg;
  if (name == "savg") return Variant::savg;
  if (name == "gsavg") return Variant::gsavg;
  throw std::invalid_argument("unknown classifier variant '" + std::string(name) +
                              "' (expected avg|savg|gsavg)");
}

Decision Decision::from_score(double score) {
  if (std::isnan(score)) throw std::invalid_argument("decision: score is NaN");
  Decision d;
  d.score = score;
  d.label = score > 0.0 ? 1 : 2;
  d.tie = score == 0.0;
  return d;
}

TrainedModel fit(const Dataset& train, Variant variant, std::optional<Blocking> blocking,
                 std::optional<GammaKind> gamma) {
  train.validate(true);
  for (int label : {1, 2}) {
    if (train.count(label) < 2) {
      throw std::invalid_argument("fit: class " + std::to_string(label) +
                                  " has fewer than 2 training rows; within-class deviation is undefined");
    }
  }
  TrainedModel m;
  m.variant_ = variant;
  m.train_ = train;
  m.train_fingerprint_ = fingerprint(train);
  const std::size_t dim = train.dim();

  if (variant == Variant::gsavg) {
    if (!blocking || !gamma) throw std::invalid_argument("fit: gsavg requires a blocking and a gamma");
    if (blocking->dim() != dim) {
      throw std::invalid_argument("fit: blocking covers " + std::to_string(blocking->dim()) +
                                  " features but the data has " + std::to_string(dim));
    }
    m.blocking_ = *blocking;
    m.gamma_ = *gamma;
  } else {
    m.blocking_ = Blocking::singletons(dim);
    m.gamma_ = GammaKind::identity;
  }

  const BlockLayout layout(m.blocking_);
  for (int label : {1, 2}) {
    const std::size_t c = static_cast<std::size_t>(label - 1);
    m.class_rows_[c] = BlockedRows(train.class_rows(label), layout);
    switch (variant) {
      case Variant::avg: m.dev_[c] = 0.0; break;
      case Variant::savg:
        m.dev_[c] = upper_triangle_mean(kernels::pairwise_euclid(m.class_rows_[c].rows));
        break;
      case Variant::gsavg:
        m.dev_[c] = upper_triangle_mean(kernels::pairwise_block(m.class_rows_[c], m.gamma_));
        break;
    }
  }
  return m;
}

double TrainedModel::cross_mean(std::span<const double> z, int label) const {
  if (z.size() != dim()) {
    throw std::invalid_argument("discriminant: point has " + std::to_string(z.size()) +
                                " features, model expects " + std::to_string(dim()));
  }
  require_finite(z, "discriminant");
  const BlockedRows& rows = class_rows_[static_cast<std::size_t>(label - 1)];
  double sum = 0.0;
  if (variant_ == Variant::gsavg) {
    std::vector<double> zb(dim());
    for (std::size_t k = 0; k < zb.size(); ++k) zb[k] = z[rows.layout.order[k]];
    for (std::size_t i = 0; i < rows.rows.rows(); ++i)
      sum += kernels::blocked_pair(zb.data(), rows.rows.row(i).data(), rows.layout, gamma_);
  } else {
    for (std::size_t i = 0; i < rows.rows.rows(); ++i)
      sum += kernels::euclid_pair(z.data(), rows.rows.row(i).data(), dim());
  }
  return sum / static_cast<double>(rows.rows.rows());
}

double TrainedModel::discriminant(std::span<const double> z) const {
  return combine_discriminant(cross_mean(z, 1), cross_mean(z, 2), dev_[0], dev_[1]);
}

Decision TrainedModel::classify(std::span<const double> z) const {
  return Decision::from_score(discriminant(z));
}

std::vector<double> TrainedModel::discriminants(const Matrix& points, Exec exec) const {
  if (points.rows() == 0) return {};
  if (points.cols() != dim()) {
    throw std::invalid_argument("discriminant: points have " + std::to_string(points.cols()) +
                                " features, model expects " + std::to_string(dim()));
  }
  require_finite(points.data(), "discriminant");
  std::array<Matrix, 2> cross;
  if (variant_ == Variant::gsavg) {
    const BlockedRows pts(points, class_rows_[0].layout);
    for (std::size_t c = 0; c < 2; ++c) cross[c] = kernels::cross_block(pts, class_rows_[c], gamma_, exec);
  } else {
    for (std::size_t c = 0; c < 2; ++c) cross[c] = kernels::cross_euclid(points, class_rows_[c].rows, exec);
  }
  std::vector<double> out(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    std::array<double, 2> means{};
    for (std::size_t c = 0; c < 2; ++c) {
      double sum = 0.0;
      for (double v : cross[c].row(i)) sum += v;
      means[c] = sum / static_cast<double>(cross[c].cols());
    }
    out[i] = combine_discriminant(means[0], means[1], dev_[0], dev_[1]);
  }
  return out;
}

double misclassification_rate(const TrainedModel& model, const Dataset& test, Exec exec) {
  if (test.size() == 0) throw std::invalid_argument("misclassification_rate: empty test set");
  if (test.labels.size() != test.size()) throw std::invalid_argument("misclassification_rate: label count mismatch");
  const auto scores = model.discriminants(test.features, exec);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (Decision::from_score(scores[i]).label != test.labels[i]) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(test.size());
}

}  // namespace gsavg
