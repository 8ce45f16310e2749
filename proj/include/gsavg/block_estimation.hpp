#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gsavg/blocks.hpp"
#include "gsavg/dataset.hpp"
#include "gsavg/gamma.hpp"
#include "gsavg/kernels.hpp"

namespace gsavg {

enum class CorrelationMethod { pearson, spearman };

std::string_view correlation_name(CorrelationMethod m);
CorrelationMethod parse_correlation(std::string_view name);

/// D x D matrix of 1 - |rho| between features, both classes pooled.
struct FeatureDissimilarity {
  Matrix values;
  /// Features with zero variance (rank variance for spearman). Their
  /// correlations are taken as 0.
  std::vector<std::size_t> constant_features;
  std::vector<std::string> warnings;
};

FeatureDissimilarity correlation_dissimilarity(const Dataset& train, CorrelationMethod method,
                                               Exec exec = Exec::parallel);

/// Average ranks (ties share the mean rank), 1-based.
std::vector<double> average_ranks(std::span<const double> values);

/// One agglomeration step. Cluster ids: leaves are 0..D-1, the cluster made
/// by merge s (0-based) is D+s. `rep_a < rep_b` are the smallest leaf index
/// of each side; `a` is the side holding rep_a.
struct Merge {
  std::size_t a = 0;
  std::size_t b = 0;
  double height = 0.0;
  std::size_t size = 0;
  std::size_t rep_a = 0;
  std::size_t rep_b = 0;
};

struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;

  std::vector<double> heights() const;
};

/// UPGMA: the linkage between clusters is the mean of all cross-cluster
/// leaf dissimilarities. Among pairs at the minimal linkage the one with the
/// lexicographically smallest (smaller rep, larger rep) merges first.
/// Throws std::invalid_argument on non-square, asymmetric or NaN input.
Dendrogram average_linkage(const Matrix& dissimilarity);

/// Cubic-time version that recomputes every linkage from the leaf matrix.
/// Test oracle for average_linkage().
Dendrogram average_linkage_reference(const Matrix& dissimilarity);

/// Lower-interpolated p-th percentile of the merge heights.
double height_percentile(const Dendrogram& dendro, double p);

/// Blocks formed by the merges (taken in sequence) with height <= h_p.
/// p = 0 always yields singletons and p = 1 a single block. Blocks are
/// ordered by their smallest member.
Blocking cut_at_percentile(const Dendrogram& dendro, double p);

/// Blocks after applying the first `count` merges.
Blocking cut_after_merges(const Dendrogram& dendro, std::size_t count);

/// {0, 0.1, ..., 1}.
std::vector<double> default_percentile_grid();
std::vector<double> parse_grid(std::string_view text);

struct PercentileSelection {
  std::vector<double> grid;
  std::vector<double> errors;
  std::vector<Blocking> blockings;
  std::size_t chosen_index = 0;
  double chosen = 0.0;
  Blocking chosen_blocking;
  std::vector<std::string> warnings;
};

/// Leave-one-out error of gsavg with a fixed blocking: every training row is
/// classified by the model fitted on the remaining rows.
double loocv_error(const Dataset& train, const Blocking& blocking, GammaKind gamma,
                   Exec exec = Exec::parallel);

/// Picks the cut minimizing the leave-one-out error (smallest p on ties).
/// The dendrogram is built once from all of `train`.
PercentileSelection select_percentile_loocv(const Dataset& train, GammaKind gamma,
                                            std::span<const double> grid,
                                            CorrelationMethod method,
                                            Exec exec = Exec::parallel);

/// Same, reusing a dendrogram built by the caller.
PercentileSelection select_cut_loocv(const Dataset& train, const Dendrogram& dendro,
                                     GammaKind gamma, std::span<const double> grid,
                                     Exec exec = Exec::parallel);

}  // namespace gsavg
