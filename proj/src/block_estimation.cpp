#include "gsavg/block_estimation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gsavg/classifiers.hpp"
#include "gsavg/dissim.hpp"

namespace gsavg {

std::string_view correlation_name(CorrelationMethod m) {
  return m == CorrelationMethod::pearson ? "pearson" : "spearman";
}

CorrelationMethod parse_correlation(std::string_view name) {
  if (name == "pearson") return CorrelationMethod::pearson;
  if (name == "spearman") return CorrelationMethod::spearman;
  throw std::invalid_argument("unknown correlation method '" + std::string(name) +
                              "' (expected pearson|spearman)");
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 (0-based) share the mean of ranks i+1..j.
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

FeatureDissimilarity correlation_dissimilarity(const Dataset& train, CorrelationMethod method,
                                               Exec exec) {
  const std::size_t n = train.size();
  const std::size_t dim = train.dim();
  if (n < 3) throw std::invalid_argument("correlation_dissimilarity: need at least 3 observations");
  require_finite(train.features.data(), "correlation_dissimilarity");

  FeatureDissimilarity out;
  // Row d holds feature d centred and scaled to unit norm.
  Matrix columns(dim, n);
  std::vector<double> w(n);
  for (std::size_t d = 0; d < dim; ++d) {
    for (std::size_t r = 0; r < n; ++r) w[r] = train.features(r, d);
    if (method == CorrelationMethod::spearman) w = average_ranks(w);
    double sum = 0.0;
    for (double v : w) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double& v : w) {
      v -= mean;
      ss += v * v;
    }
    auto dst = columns.row(d);
    if (ss == 0.0) {
      out.constant_features.push_back(d);
      std::fill(dst.begin(), dst.end(), 0.0);
      continue;
    }
    const double norm = std::sqrt(ss);
    for (std::size_t r = 0; r < n; ++r) dst[r] = w[r] / norm;
  }

  const Matrix gram = kernels::column_gram(columns, exec);
  out.values = Matrix(dim, dim);
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b)
      out.values(a, b) = a == b ? 0.0 : 1.0 - std::min(1.0, std::abs(gram(a, b)));

  if (!out.constant_features.empty()) {
    std::string msg = "constant feature(s) treated as uncorrelated:";
    for (std::size_t k = 0; k < out.constant_features.size() && k < 10; ++k)
      msg += " " + std::to_string(out.constant_features[k] + 1);
    if (out.constant_features.size() > 10) msg += " ...";
    out.warnings.push_back(msg);
  }
  return out;
}

std::vector<double> Dendrogram::heights() const {
  std::vector<double> h;
  h.reserve(merges.size());
  for (const auto& m : merges) h.push_back(m.height);
  return h;
}

namespace {

void check_dissimilarity(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("average_linkage: matrix is not square");
  if (m.rows() == 0) throw std::invalid_argument("average_linkage: empty matrix");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (std::abs(m(i, i)) > 1e-12) throw std::invalid_argument("average_linkage: nonzero diagonal");
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (std::isnan(m(i, j)) || std::isinf(m(i, j))) {
        throw std::invalid_argument("average_linkage: non-finite entry");
      }
      if (j > i && std::abs(m(i, j) - m(j, i)) > 1e-12) {
        throw std::invalid_argument("average_linkage: matrix is not symmetric");
      }
    }
  }
}

// Candidate merge key: (linkage, smaller rep, larger rep), compared lexicographically.
struct Key {
  double link;
  std::size_t lo;
  std::size_t hi;
  bool operator<(const Key& o) const {
    if (link != o.link) return link < o.link;
    if (lo != o.lo) return lo < o.lo;
    return hi < o.hi;
  }
};

}  // namespace

Dendrogram average_linkage(const Matrix& dissimilarity) {
  check_dissimilarity(dissimilarity);
  const std::size_t n = dissimilarity.rows();
  Dendrogram dendro;
  dendro.leaves = n;
  if (n == 1) return dendro;

  // Slot s holds the cluster whose smallest leaf is s; sums(a, b) is the sum
  // of leaf dissimilarities between the clusters in slots a and b.
  Matrix sums = dissimilarity;
  std::vector<std::size_t> size(n, 1), id(n);
  std::iota(id.begin(), id.end(), 0);
  std::vector<char> active(n, 1);
  std::vector<std::size_t> nn(n, 0);
  std::vector<Key> best(n);

  auto linkage = [&](std::size_t a, std::size_t b) {
    return sums(a, b) / (static_cast<double>(size[a]) * static_cast<double>(size[b]));
  };
  auto key = [&](std::size_t a, std::size_t b) {
    return Key{linkage(a, b), std::min(a, b), std::max(a, b)};
  };
  auto rescan = [&](std::size_t i) {
    bool found = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      const Key k = key(i, j);
      if (!found || k < best[i]) {
        best[i] = k;
        nn[i] = j;
        found = true;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) rescan(i);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i] && (pick == n || best[i] < best[pick])) pick = i;
    }
    const std::size_t a = std::min(pick, nn[pick]);
    const std::size_t b = std::max(pick, nn[pick]);

    Merge m;
    m.a = id[a];
    m.b = id[b];
    m.height = linkage(a, b);
    m.size = size[a] + size[b];
    m.rep_a = a;
    m.rep_b = b;
    dendro.merges.push_back(m);

    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double s = sums(a, k) + sums(b, k);
      sums(a, k) = s;
      sums(k, a) = s;
    }
    size[a] += size[b];
    active[b] = 0;
    id[a] = n + step;

    if (step + 2 == n) break;
    rescan(a);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a) continue;
      if (nn[k] == a || nn[k] == b) {
        rescan(k);
      } else {
        const Key cand = key(k, a);
        if (cand < best[k]) {
          best[k] = cand;
          nn[k] = a;
        }
      }
    }
  }
  return dendro;
}

Dendrogram average_linkage_reference(const Matrix& dissimilarity) {
  check_dissimilarity(dissimilarity);
  const std::size_t n = dissimilarity.rows();
  Dendrogram dendro;
  dendro.leaves = n;
  struct Cluster {
    std::vector<std::size_t> leaves;
    std::size_t id;
  };
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({{i}, i});

  for (std::size_t step = 0; step + 1 < n; ++step) {
    bool have = false;
    Key best{};
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = 0; j < clusters.size(); ++j) {
        if (i == j) continue;
        double sum = 0.0;
        for (auto x : clusters[i].leaves)
          for (auto y : clusters[j].leaves) sum += dissimilarity(x, y);
        const double link = sum / static_cast<double>(clusters[i].leaves.size() * clusters[j].leaves.size());
        const std::size_t ri = clusters[i].leaves.front();
        const std::size_t rj = clusters[j].leaves.front();
        const Key k{link, std::min(ri, rj), std::max(ri, rj)};
        if (!have || k < best) {
          best = k;
          bi = ri < rj ? i : j;
          bj = ri < rj ? j : i;
          have = true;
        }
      }
    }
    Merge m;
    m.a = clusters[bi].id;
    m.b = clusters[bj].id;
    m.height = best.link;
    m.rep_a = best.lo;
    m.rep_b = best.hi;
    auto merged = clusters[bi].leaves;
    merged.insert(merged.end(), clusters[bj].leaves.begin(), clusters[bj].leaves.end());
    std::sort(merged.begin(), merged.end());
    m.size = merged.size();
    dendro.merges.push_back(m);
    clusters[bi] = {std::move(merged), n + step};
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return dendro;
}

double height_percentile(const Dendrogram& dendro, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("percentile must lie in [0, 1]");
  auto h = dendro.heights();
  if (h.empty()) return 0.0;
  std::sort(h.begin(), h.end());
  // Lower interpolation; the slack absorbs products like 0.3 * 10 = 2.9999...
  auto idx = static_cast<std::size_t>(std::floor(p * static_cast<double>(h.size() - 1) + 1e-9));
  idx = std::min(idx, h.size() - 1);
  return h[idx];
}

Blocking cut_after_merges(const Dendrogram& dendro, std::size_t count) {
  const std::size_t n = dendro.leaves;
  if (count > dendro.merges.size()) throw std::invalid_argument("cut: merge count exceeds dendrogram");
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t s = 0; s < count; ++s) {
    const auto ra = find(dendro.merges[s].rep_a);
    const auto rb = find(dendro.merges[s].rep_b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<std::vector<std::size_t>> blocks;
  std::map<std::size_t, std::size_t> block_of_root;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    const auto root = find(leaf);
    auto [it, inserted] = block_of_root.try_emplace(root, blocks.size());
    if (inserted) blocks.emplace_back();
    blocks[it->second].push_back(leaf);
  }
  return Blocking(std::move(blocks), n);
}

namespace {

std::size_t merges_for_percentile(const Dendrogram& dendro, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("cut: p must lie in [0, 1]");
  if (p == 0.0) return 0;
  if (p == 1.0) return dendro.merges.size();
  const double h = height_percentile(dendro, p);
  std::size_t count = 0;
  while (count < dendro.merges.size() && dendro.merges[count].height <= h) ++count;
  return count;
}

}  // namespace

Blocking cut_at_percentile(const Dendrogram& dendro, double p) {
  return cut_after_merges(dendro, merges_for_percentile(dendro, p));
}

std::vector<double> default_percentile_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

std::vector<double> parse_grid(std::string_view text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    std::string item(text.substr(start, end - start));
    item.erase(0, item.find_first_not_of(" \t\""));
    item.erase(item.find_last_not_of(" \t\"") + 1);
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  auto number = [](const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::invalid_argument("grid: cannot parse '" + s + "'");
    }
    return v;
  };
  std::vector<double> grid;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i] != "...") {
      grid.push_back(number(items[i]));
      continue;
    }
    // "a, b, ..., c" continues the step b - a up to c.
    if (grid.size() < 2 || i + 1 >= items.size()) throw std::invalid_argument("grid: '...' needs two values before and one after");
    const double step = grid[grid.size() - 1] - grid[grid.size() - 2];
    const double first = grid[grid.size() - 2];
    const double last = number(items[i + 1]);
    if (!(step > 0.0)) throw std::invalid_argument("grid: '...' needs an increasing sequence");
    for (std::size_t k = 2;; ++k) {
      // Snap to 12 decimals so 0.1-steps print as 0.3, not 0.30000000000000004.
      const double v = std::round((first + static_cast<double>(k) * step) * 1e12) / 1e12;
      if (v >= last - 1e-9 * step) break;
      grid.push_back(v);
    }
  }
  if (grid.empty()) throw std::invalid_argument("grid: empty");
  for (double p : grid)
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("grid: values must lie in [0, 1]");
  return grid;
}

double loocv_error(const Dataset& train, const Blocking& blocking, GammaKind gamma, Exec exec) {
  train.validate(true);
  if (blocking.dim() != train.dim()) throw std::invalid_argument("loocv: blocking dimension mismatch");
  const std::array<std::vector<std::size_t>, 2> members{train.indices_of(1), train.indices_of(2)};
  for (std::size_t c = 0; c < 2; ++c) {
    if (members[c].size() < 3) {
      throw std::invalid_argument("loocv: class " + std::to_string(c + 1) +
                                  " needs at least 3 observations so that leaving one out keeps 2");
    }
  }
  const Matrix pairs = kernels::pairwise_block(BlockedRows(train.features, blocking), gamma, exec);
  const std::array<double, 2> full_dev{upper_triangle_mean(pairs, members[0]),
                                       upper_triangle_mean(pairs, members[1])};

  std::size_t wrong = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t left : members[c]) {
      std::vector<std::size_t> kept;
      kept.reserve(members[c].size() - 1);
      for (auto r : members[c])
        if (r != left) kept.push_back(r);

      std::array<double, 2> dev = full_dev;
      std::array<double, 2> cross{};
      dev[c] = upper_triangle_mean(pairs, kept);
      for (std::size_t k = 0; k < 2; ++k) {
        const auto& rows = k == c ? kept : members[k];
        double sum = 0.0;
        for (auto r : rows) sum += pairs(left, r);
        cross[k] = sum / static_cast<double>(rows.size());
      }
      const auto d = Decision::from_score(combine_discriminant(cross[0], cross[1], dev[0], dev[1]));
      if (d.label != static_cast<int>(c) + 1) ++wrong;
    }
  }
  return static_cast<double>(wrong) / static_cast<double>(train.size());
}

PercentileSelection select_cut_loocv(const Dataset& train, const Dendrogram& dendro,
                                     GammaKind gamma, std::span<const double> grid, Exec exec) {
  if (grid.empty()) throw std::invalid_argument("select_percentile: empty grid");
  if (dendro.leaves != train.dim()) throw std::invalid_argument("select_percentile: dendrogram does not match data");
  PercentileSelection sel;
  sel.grid.assign(grid.begin(), grid.end());
  std::map<std::size_t, double> error_by_count;
  for (double p : grid) {
    const auto count = merges_for_percentile(dendro, p);
    auto blocking = cut_after_merges(dendro, count);
    auto it = error_by_count.find(count);
    if (it == error_by_count.end()) it = error_by_count.emplace(count, loocv_error(train, blocking, gamma, exec)).first;
    sel.errors.push_back(it->second);
    sel.blockings.push_back(std::move(blocking));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (sel.errors[i] < sel.errors[best] || (sel.errors[i] == sel.errors[best] && grid[i] < grid[best])) best = i;
  }
  sel.chosen_index = best;
  sel.chosen = grid[best];
  sel.chosen_blocking = sel.blockings[best];
  const std::size_t dim = train.dim();
  if (sel.chosen_blocking.max_block_size() > (dim + 1) / 2) {
    sel.warnings.push_back("selected blocking has a block of " +
                           std::to_string(sel.chosen_blocking.max_block_size()) + " features (more than half of D = " +
                           std::to_string(dim) + "); bounded block sizes are assumed by the method");
  }
  return sel;
}

PercentileSelection select_percentile_loocv(const Dataset& train, GammaKind gamma,
                                            std::span<const double> grid, CorrelationMethod method,
                                            Exec exec) {
  if (grid.empty()) throw std::invalid_argument("select_percentile: empty grid");
  train.validate(true);
  if (train.count(1) < 3 || train.count(2) < 3) {
    throw std::invalid_argument("select_percentile: each class needs at least 3 observations");
  }
  auto dis = correlation_dissimilarity(train, method, exec);
  const auto dendro = average_linkage(dis.values);
  auto sel = select_cut_loocv(train, dendro, gamma, grid, exec);
  sel.warnings.insert(sel.warnings.begin(), dis.warnings.begin(), dis.warnings.end());
  return sel;
}

}  // namespace gsavg
