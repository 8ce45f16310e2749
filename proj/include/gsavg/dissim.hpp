#pragma once

#include <span>

#include "gsavg/blocks.hpp"
#include "gsavg/gamma.hpp"
#include "gsavg/matrix.hpp"

namespace gsavg {

/// Block dissimilarity: mean over blocks of gamma(||u_b - v_b||^2 / D_b).
///
/// Summation runs over blocks in order and over the (ascending) members of
/// each block, so the value is reproducible bit for bit. Throws
/// std::invalid_argument on length mismatch and on NaN or infinite entries.
double block_dissimilarity(std::span<const double> u, std::span<const double> v,
                           const Blocking& blocking, GammaKind gamma);

/// Mean block dissimilarity over the distinct pairs of `samples` (rows).
/// Needs at least two rows.
double within_class_deviation(const Matrix& samples, const Blocking& blocking,
                              GammaKind gamma);

/// Mean block dissimilarity between `z` and each row of `samples`.
double cross_mean_dissimilarity(std::span<const double> z, const Matrix& samples,
                                const Blocking& blocking, GammaKind gamma);

/// Scaled squared Euclidean distance ||u - v||^2 / D.
double scaled_sq_euclidean(std::span<const double> u, std::span<const double> v);

/// Mean of the strict upper triangle of a symmetric pair matrix, summed row
/// by row. This is the reduction shared by every within-class statistic.
double upper_triangle_mean(const Matrix& pairs);

/// Same, restricted to the rows/columns listed in `members` (ascending).
double upper_triangle_mean(const Matrix& pairs, std::span<const std::size_t> members);

void require_finite(std::span<const double> v, const char* what);

}  // namespace gsavg
