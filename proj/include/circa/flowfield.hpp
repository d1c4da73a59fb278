#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "circa/common.hpp"
#include "circa/matrix.hpp"

namespace circa {

namespace detail {

/// Strong connectivity of the directed support of `m` (edges where the
/// entry is nonzero, diagonal ignored). BFS forward from 0 and backward.
inline bool strongly_connected_support(const Matrix& m) {
  const int n = m.rows();
  if (n == 0) return false;
  if (n == 1) return true;
  auto reach_all = [&](bool reversed) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        const double w = reversed ? m(v, u) : m(u, v);
        if (u != v && w != 0.0 && !seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reach_all(false) && reach_all(true);
}

}  // namespace detail

/// Row-stochastic transition matrix of a finite Markov chain. Construction
/// validates non-negativity, row sums, and strong connectivity of the
/// transition support. Aperiodicity is NOT required: irreducible periodic
/// chains (plain directed cycles, two-state flips) still have a unique
/// stationary vector and arise naturally from the flow-field inverse
/// construction, so they are accepted and flagged instead.
struct TransitionMatrix {
  Matrix entries;

  int size() const { return entries.rows(); }

  static TransitionMatrix validated(Matrix m, const Tolerances& tol = {}) {
    const int n = m.rows();
    if (n == 0 || m.cols() != n)
      fail(ErrorKind::DimensionMismatch, "transition matrix must be square and non-empty");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        if (m(i, j) < 0.0)
          fail(ErrorKind::Validation, "transition probability at (" + std::to_string(i + 1) +
                                          "," + std::to_string(j + 1) + ") is negative");
      const double rs = m.row_sum(i);
      if (std::abs(rs - 1.0) > tol.row)
        fail(ErrorKind::Validation,
             "row " + std::to_string(i + 1) + " sums to " + std::to_string(rs) + ", not 1",
             rs);
    }
    if (!detail::strongly_connected_support(m))
      fail(ErrorKind::NotErgodic, "transition support is not strongly connected");
    return TransitionMatrix{std::move(m)};
  }

  /// True when some power Pi^k (k <= n) has all entries positive, i.e. the
  /// chain is aperiodic as well as irreducible. Advisory only.
  bool primitive() const {
    const int n = size();
    // boolean reachability powers
    std::vector<std::vector<char>> cur(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cur[i][j] = entries(i, j) != 0.0 ? 1 : 0;
    auto all_positive = [&](const std::vector<std::vector<char>>& b) {
      for (const auto& row : b)
        for (char c : row)
          if (!c) return false;
      return true;
    };
    auto mul = [&](const std::vector<std::vector<char>>& a, const std::vector<std::vector<char>>& b) {
      std::vector<std::vector<char>> out(n, std::vector<char>(n, 0));
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          if (a[i][k])
            for (int j = 0; j < n; ++j)
              if (b[k][j]) out[i][j] = 1;
      return out;
    };
    std::vector<std::vector<char>> base = cur;
    for (int k = 1; k <= n; ++k) {
      if (all_positive(cur)) return true;
      cur = mul(cur, base);
    }
    return all_positive(cur);
  }
};

/// Stationary probability vector: pi^T Pi = pi^T, entries positive, sum 1.
struct StationaryDistribution {
  std::vector<double> probabilities;

  int size() const { return static_cast<int>(probabilities.size()); }
};

/// Probability currents P = diag(pi) * Pi; entries sum to one.
struct ProbabilityCurrent {
  Matrix entries;

  int size() const { return entries.rows(); }
};

/// Antisymmetric net-flux field F = P - P^T. Antisymmetry is structural:
/// only the strict upper triangle is stored, the lower triangle is derived,
/// so F(i,j) + F(j,i) == 0 holds exactly by construction.
class NetFluxField {
 public:
  static NetFluxField zero(int n) { return NetFluxField(n); }

  /// Build from a full matrix, checking antisymmetry exactly. Divergence is
  /// NOT checked here; call require_divergence_free for that.
  static NetFluxField from_matrix(const Matrix& f) {
    const int n = f.rows();
    if (f.cols() != n) fail(ErrorKind::DimensionMismatch, "flux matrix must be square");
    NetFluxField out(n);
    for (int i = 0; i < n; ++i) {
      if (f(i, i) != 0.0)
        fail(ErrorKind::Validation, "flux matrix has a nonzero diagonal entry");
      for (int j = i + 1; j < n; ++j) {
        if (f(i, j) != -f(j, i))
          fail(ErrorKind::Validation, "flux matrix is not antisymmetric at (" +
                                          std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        out.set_pair(i, j, f(i, j));
      }
    }
    return out;
  }

  int size() const { return n_; }

  double at(int i, int j) const {
    if (i == j) return 0.0;
    return i < j ? upper_[index(i, j)] : -upper_[index(j, i)];
  }

  /// Sets F(i,j) = flux and F(j,i) = -flux.
  void set_pair(int i, int j, double flux) {
    if (i == j) fail(ErrorKind::Validation, "flux on a self-pair is not representable");
    if (i < j)
      upper_[index(i, j)] = flux;
    else
      upper_[index(j, i)] = -flux;
  }

  std::vector<double> divergence() const {
    std::vector<double> d(n_, 0.0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) d[i] += at(i, j);
    return d;
  }

  double max_abs_divergence() const {
    double m = 0.0;
    for (double v : divergence()) m = std::max(m, std::abs(v));
    return m;
  }

  void require_divergence_free(double eps) const {
    const double d = max_abs_divergence();
    if (d > eps)
      fail(ErrorKind::Validation, "flux field is not divergence-free (max |row sum| = " +
                                      std::to_string(d) + ")", d);
  }

  Matrix positive_part() const {
    Matrix p(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) p(i, j) = std::max(at(i, j), 0.0);
    return p;
  }

  /// 1^T F+ 1, the total positive flux.
  double total_positive() const {
    double s = 0.0;
    for (double v : upper_) s += std::abs(v);
    return s;
  }

  bool markov_normalized() const { return markov_normalized_; }
  void set_markov_normalized(bool v) { markov_normalized_ = v; }

  /// Snap |flux| < eps to exact zero; keeps the edge set of the flow graph
  /// stable against roundoff dust.
  void snap_small(double eps) {
    for (double& v : upper_)
      if (std::abs(v) < eps) v = 0.0;
  }

  NetFluxField scaled(double s) const {
    NetFluxField out = *this;
    for (double& v : out.upper_) v *= s;
    return out;
  }

  /// The centering projection (I - 11^T/n) F (I - 11^T/n); restores zero row
  /// sums for fields that carry a spurious source component.
  NetFluxField centered() const {
    std::vector<double> r(n_, 0.0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r[i] += at(i, j);
    NetFluxField out(n_);
    out.markov_normalized_ = markov_normalized_;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        out.set_pair(i, j, at(i, j) + (r[j] - r[i]) / n_);
    return out;
  }

  struct SupportEdge {
    int u, v;     // u < v
    double flux;  // F(u,v); positive means net flow u -> v
  };

  std::vector<SupportEdge> support() const {
    std::vector<SupportEdge> edges;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (at(i, j) != 0.0) edges.push_back({i, j, at(i, j)});
    return edges;
  }

 private:
  explicit NetFluxField(int n)
      : n_(n), upper_(static_cast<size_t>(n) * (n - 1) / 2, 0.0) {}

  size_t index(int i, int j) const {
    // strict upper triangle, row-major: (i,j) with i < j
    return static_cast<size_t>(i) * n_ - static_cast<size_t>(i) * (i + 1) / 2 + (j - i - 1);
  }

  int n_;
  std::vector<double> upper_;
  bool markov_normalized_ = false;
};

/// Solves pi^T Pi = pi^T with sum(pi) = 1. Primary path is a direct linear
/// solve of (Pi^T - I) x = 0 with the last equation replaced by the
/// normalization; this is exact at desk scale and handles periodic
/// irreducible chains. A damped power iteration is the fallback for
/// ill-conditioned systems.
inline StationaryDistribution stationary_distribution(const TransitionMatrix& tm,
                                                      double tol = 1e-9,
                                                      int max_iter = 100000) {
  const int n = tm.size();
  const Matrix& p = tm.entries;

  auto residual = [&](const std::vector<double>& x) {
    std::vector<double> y = row_times(x, p);
    double r = 0.0;
    for (int j = 0; j < n; ++j) r = std::max(r, std::abs(y[j] - x[j]));
    return r;
  };

  auto finish = [&](std::vector<double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    for (double& v : x) v /= s;
    return StationaryDistribution{std::move(x)};
  };

  // direct solve
  bool direct_ok = true;
  std::vector<double> x;
  try {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = p(j, i) - (i == j ? 1.0 : 0.0);
    for (int j = 0; j < n; ++j) a(n - 1, j) = 1.0;
    std::vector<double> b(n, 0.0);
    b[n - 1] = 1.0;
    x = solve_linear(a, b);
    for (double& v : x)
      if (v < 0.0 && v > -1e-12) v = 0.0;
    for (double v : x)
      if (v <= 0.0) direct_ok = false;
    if (direct_ok && residual(x) >= tol) direct_ok = false;
  } catch (const Error&) {
    direct_ok = false;
  }
  if (direct_ok) return finish(std::move(x));

  // damped power iteration: x <- (x + x Pi) / 2. The damping makes periodic
  // chains converge to the same stationary vector.
  x.assign(n, 1.0 / n);
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> y = row_times(x, p);
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      y[j] = 0.5 * (y[j] + x[j]);
      s += y[j];
    }
    for (double& v : y) v /= s;
    x = std::move(y);
    if (residual(x) < tol) {
      for (double v : x)
        if (v <= 0.0)
          fail(ErrorKind::NonConvergence,
               "stationary vector has a non-positive entry after " + std::to_string(it) +
                   " iterations",
               it);
      return finish(std::move(x));
    }
  }
  fail(ErrorKind::NonConvergence,
       "stationary distribution did not converge within " + std::to_string(max_iter) +
           " iterations",
       max_iter);
}

inline ProbabilityCurrent probability_current(const TransitionMatrix& tm,
                                              const StationaryDistribution& pi) {
  const int n = tm.size();
  if (pi.size() != n)
    fail(ErrorKind::DimensionMismatch, "stationary vector size does not match the chain");
  Matrix p(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i, j) = pi.probabilities[i] * tm.entries(i, j);
  return ProbabilityCurrent{std::move(p)};
}

inline NetFluxField net_flux(const ProbabilityCurrent& p) {
  const int n = p.size();
  NetFluxField f = NetFluxField::zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) f.set_pair(i, j, p.entries(i, j) - p.entries(j, i));
  f.set_markov_normalized(true);
  return f;
}

inline Matrix positive_part(const NetFluxField& f) { return f.positive_part(); }

/// Where to put the symmetric mass M when inverting a flow field into a
/// Markov chain. The construction leaves M free; these are the two
/// documented choices.
enum class MassPlacement {
  UniformOffdiagonal,   // spread all of M over off-diagonal pairs
  UniformDiagonalPlus,  // half on the diagonal, half on a symmetric path
                        // 0-1-...-n, the cheapest way to stay irreducible
};

/// Inverse construction: builds a row-stochastic chain whose stationary
/// net flux reproduces `f` exactly. Requires divergence-freeness and
/// total positive flux <= 1; if it equals 1 the column sums of F+ must all
/// be positive and P = F+ verbatim.
inline TransitionMatrix markov_from_flow(const NetFluxField& f,
                                         MassPlacement placement = MassPlacement::UniformOffdiagonal,
                                         const Tolerances& tol = {}) {
  const int n = f.size();
  f.require_divergence_free(tol.divergence);
  const double total = f.total_positive();
  if (total > 1.0 + tol.row)
    fail(ErrorKind::InfeasibleMass,
         "total positive flux " + std::to_string(total) + " exceeds 1", total);

  Matrix p = f.positive_part();
  const bool equality_case = std::abs(total - 1.0) <= tol.row;
  if (!equality_case) {
    const double mass = 1.0 - total;
    if (placement == MassPlacement::UniformOffdiagonal) {
      const double share = mass / (static_cast<double>(n) * (n - 1));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) p(i, j) += share;
    } else {
      const double diag_share = 0.5 * mass / n;
      const double path_share = n > 1 ? 0.5 * mass / (2.0 * (n - 1)) : 0.0;
      for (int i = 0; i < n; ++i) p(i, i) += diag_share + (n == 1 ? 0.5 * mass : 0.0);
      for (int i = 0; i + 1 < n; ++i) {
        p(i, i + 1) += path_share;
        p(i + 1, i) += path_share;
      }
    }
  }

  // pi^T = 1^T P; every vertex must receive mass
  std::vector<double> pi(n, 0.0);
  for (int j = 0; j < n; ++j) pi[j] = p.col_sum(j);
  for (int j = 0; j < n; ++j)
    if (pi[j] <= 0.0)
      fail(ErrorKind::ZeroColumn,
           "vertex " + std::to_string(j + 1) + " receives zero total mass", j);

  Matrix trans(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) trans(i, j) = p(i, j) / pi[i];
  return TransitionMatrix::validated(std::move(trans), tol);
}

}  // namespace circa
