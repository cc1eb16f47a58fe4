#include "vta/numlin.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <queue>
#include <tuple>

#include "vta/errors.hpp"

namespace vta::numlin {

namespace {

double cnorm(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

Complex cdot(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// splitmix64, used only for deterministic start vectors.
struct SplitMix64 {
  uint64_t s;
  uint64_t next() {
    uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * (1.0 / 9007199254740992.0) * 2.0 - 1.0; }
};

}  // namespace

SparseMatrix SparseMatrix::from_triplets(int n,
                                         std::vector<std::tuple<int, int, Complex>> t) {
  if (n < 0) throw ValidationError("SparseMatrix: negative dimension");
  for (const auto& [r, c, v] : t) {
    if (r < 0 || r >= n || c < 0 || c >= n)
      throw ValidationError("SparseMatrix: triplet index out of range");
  }
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  SparseMatrix m;
  m.n_ = n;
  m.row_ptr_.assign(n + 1, 0);
  m.col_.reserve(t.size());
  m.val_.reserve(t.size());
  size_t i = 0;
  for (int row = 0; row < n; ++row) {
    m.row_ptr_[row] = static_cast<int>(m.col_.size());
    while (i < t.size() && std::get<0>(t[i]) == row) {
      int c = std::get<1>(t[i]);
      Complex v = std::get<2>(t[i]);
      ++i;
      while (i < t.size() && std::get<0>(t[i]) == row && std::get<1>(t[i]) == c) {
        v += std::get<2>(t[i]);
        ++i;
      }
      m.col_.push_back(c);
      m.val_.push_back(v);
    }
  }
  m.row_ptr_[n] = static_cast<int>(m.col_.size());
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<std::tuple<int, int, Complex>> t;
  t.reserve(n);
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
  return from_triplets(n, std::move(t));
}

SparseMatrix SparseMatrix::combine(Complex a, const SparseMatrix& A,
                                   Complex b, const SparseMatrix& B) {
  if (A.size() != B.size()) throw ValidationError("SparseMatrix::combine: size mismatch");
  std::vector<std::tuple<int, int, Complex>> t;
  t.reserve(A.nnz() + B.nnz());
  for (int r = 0; r < A.size(); ++r)
    for (int p = A.row_ptr_[r]; p < A.row_ptr_[r + 1]; ++p)
      t.emplace_back(r, A.col_[p], a * A.val_[p]);
  for (int r = 0; r < B.size(); ++r)
    for (int p = B.row_ptr_[r]; p < B.row_ptr_[r + 1]; ++p)
      t.emplace_back(r, B.col_[p], b * B.val_[p]);
  return from_triplets(A.size(), std::move(t));
}

SparseMatrix SparseMatrix::combine(Complex a, const SparseMatrix& A,
                                   Complex b, const SparseMatrix& B,
                                   Complex c, const SparseMatrix& C) {
  return combine(1.0, combine(a, A, b, B), c, C);
}

void SparseMatrix::apply(std::span<const Complex> x, std::span<Complex> y) const {
  assert(static_cast<int>(x.size()) == n_ && static_cast<int>(y.size()) == n_);
  for (int r = 0; r < n_; ++r) {
    Complex s = 0.0;
    for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += val_[p] * x[col_[p]];
    y[r] = s;
  }
}

CVector SparseMatrix::apply(std::span<const Complex> x) const {
  CVector y(n_);
  apply(x, y);
  return y;
}

Complex SparseMatrix::at(int row, int col) const {
  for (int p = row_ptr_[row]; p < row_ptr_[row + 1]; ++p)
    if (col_[p] == col) return val_[p];
  return 0.0;
}

double SparseMatrix::norm_inf() const {
  double m = 0.0;
  for (int r = 0; r < n_; ++r) {
    double s = 0.0;
    for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += std::abs(val_[p]);
    m = std::max(m, s);
  }
  return m;
}

namespace {

// Reverse Cuthill-McKee on the symmetrized pattern; returns new -> old.
std::vector<int> rcm_ordering(const SparseMatrix& A) {
  const int n = A.size();
  std::vector<std::vector<int>> adj(n);
  for (int r = 0; r < n; ++r)
    for (int p = A.row_ptr()[r]; p < A.row_ptr()[r + 1]; ++p) {
      int c = A.cols()[p];
      if (c != r) {
        adj[r].push_back(c);
        adj[c].push_back(r);
      }
    }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  auto degree = [&](int v) { return static_cast<int>(adj[v].size()); };

  auto bfs_level = [&](int root, std::vector<char>& mark) {
    // returns the last vertex of the final BFS level (pseudo-peripheral probe)
    std::queue<int> q;
    q.push(root);
    mark[root] = 1;
    int last = root;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      last = v;
      for (int w : adj[v])
        if (!mark[w]) {
          mark[w] = 1;
          q.push(w);
        }
    }
    return last;
  };

  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    // min-degree vertex of this component, then two BFS sweeps for a
    // pseudo-peripheral root
    int root = start;
    {
      std::vector<char> mark(seen.begin(), seen.end());
      std::queue<int> q;
      q.push(start);
      mark[start] = 1;
      std::vector<int> comp{start};
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : adj[v])
          if (!mark[w]) {
            mark[w] = 1;
            comp.push_back(w);
            q.push(w);
          }
      }
      for (int v : comp)
        if (degree(v) < degree(root)) root = v;
      std::vector<char> m2(seen.begin(), seen.end());
      root = bfs_level(root, m2);
    }
    // Cuthill-McKee BFS, children by increasing degree
    std::queue<int> q;
    q.push(root);
    seen[root] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      order.push_back(v);
      std::vector<int> kids;
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          kids.push_back(w);
        }
      std::sort(kids.begin(), kids.end(), [&](int a, int b) {
        return degree(a) < degree(b) || (degree(a) == degree(b) && a < b);
      });
      for (int w : kids) q.push(w);
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

struct Csc {
  int n = 0;
  std::vector<int> ptr, idx;
  std::vector<Complex> val;
};

// CSC of A(perm, perm), perm is new -> old.
Csc permuted_csc(const SparseMatrix& A, const std::vector<int>& perm) {
  const int n = A.size();
  std::vector<int> inv(n);
  for (int i = 0; i < n; ++i) inv[perm[i]] = i;
  Csc B;
  B.n = n;
  std::vector<int> count(n, 0);
  for (int r = 0; r < n; ++r)
    for (int p = A.row_ptr()[r]; p < A.row_ptr()[r + 1]; ++p) count[inv[A.cols()[p]]]++;
  B.ptr.assign(n + 1, 0);
  for (int j = 0; j < n; ++j) B.ptr[j + 1] = B.ptr[j] + count[j];
  B.idx.resize(B.ptr[n]);
  B.val.resize(B.ptr[n]);
  std::vector<int> next(B.ptr.begin(), B.ptr.end() - 1);
  for (int r = 0; r < n; ++r) {
    int nr = inv[r];
    for (int p = A.row_ptr()[r]; p < A.row_ptr()[r + 1]; ++p) {
      int nc = inv[A.cols()[p]];
      B.idx[next[nc]] = nr;
      B.val[next[nc]] = A.values()[p];
      ++next[nc];
    }
  }
  return B;
}

}  // namespace

SparseLU::SparseLU(const SparseMatrix& A, double pivot_threshold) {
  n_ = A.size();
  if (n_ == 0) throw ValidationError("SparseLU: empty matrix");
  perm_ = rcm_ordering(A);
  Csc B = permuted_csc(A, perm_);

  const int n = n_;
  l_ptr_.assign(n + 1, 0);
  u_ptr_.assign(n + 1, 0);
  std::vector<int> pinv(n, -1);  // B-row -> pivot position
  std::vector<Complex> x(n, 0.0);
  std::vector<int> stack(n), pattern(n), work(n);
  std::vector<int> visited(n, -1);

  for (int k = 0; k < n; ++k) {
    l_ptr_[k] = static_cast<int>(l_idx_.size());
    u_ptr_[k] = static_cast<int>(u_idx_.size());

    // symbolic: reach of B(:,k) through the columns of L built so far
    int top = n;
    for (int p = B.ptr[k]; p < B.ptr[k + 1]; ++p) {
      int root = B.idx[p];
      if (visited[root] == k) continue;
      // iterative DFS
      int head = 0;
      stack[0] = root;
      work[0] = (pinv[root] >= 0) ? l_ptr_[pinv[root]] : -1;
      visited[root] = k;
      while (head >= 0) {
        int v = stack[head];
        int col = pinv[v];
        bool done = true;
        if (col >= 0) {
          // pivotal rows have col < k here, so column col of L is complete
          int& pp = work[head];
          int pend = l_ptr_[col + 1];
          while (pp < pend) {
            int w = l_idx_[pp++];
            if (visited[w] != k) {
              visited[w] = k;
              ++head;
              stack[head] = w;
              work[head] = (pinv[w] >= 0) ? l_ptr_[pinv[w]] : -1;
              done = false;
              break;
            }
          }
          if (!done) continue;
        }
        pattern[--top] = v;
        --head;
      }
    }

    // numeric: x = L \ B(:,k) over the computed pattern (topological order)
    for (int p = top; p < n; ++p) x[pattern[p]] = 0.0;
    for (int p = B.ptr[k]; p < B.ptr[k + 1]; ++p) x[B.idx[p]] = B.val[p];
    for (int p = top; p < n; ++p) {
      int j = pattern[p];
      int col = pinv[j];
      if (col < 0) continue;
      Complex xj = x[j];  // L has unit diagonal
      for (int q = l_ptr_[col]; q < l_ptr_[col + 1]; ++q) x[l_idx_[q]] -= l_val_[q] * xj;
    }

    // pivot: largest candidate among not-yet-pivotal rows; keep the diagonal
    // when it is within pivot_threshold of the maximum
    int ipiv = -1;
    double amax = -1.0;
    for (int p = top; p < n; ++p) {
      int i = pattern[p];
      if (pinv[i] < 0) {
        double t = std::abs(x[i]);
        if (t > amax) {
          amax = t;
          ipiv = i;
        }
      } else {
        u_idx_.push_back(pinv[i]);
        u_val_.push_back(x[i]);
      }
    }
    if (ipiv < 0 || amax <= 0.0)
      throw SolverError("SparseLU: singular pivot at column " + std::to_string(k));
    if (pinv[k] < 0 && std::abs(x[k]) >= pivot_threshold * amax) ipiv = k;

    Complex pivot = x[ipiv];
    u_idx_.push_back(k);
    u_val_.push_back(pivot);
    pinv[ipiv] = k;
    for (int p = top; p < n; ++p) {
      int i = pattern[p];
      if (pinv[i] < 0) {
        l_idx_.push_back(i);
        l_val_.push_back(x[i] / pivot);
      }
      x[i] = 0.0;
    }
  }
  l_ptr_[n] = static_cast<int>(l_idx_.size());
  u_ptr_[n] = static_cast<int>(u_idx_.size());
  for (auto& i : l_idx_) i = pinv[i];  // L rows into pivot coordinates
  pivot_ = std::move(pinv);
}

CVector SparseLU::solve(std::span<const Complex> b) const {
  if (static_cast<int>(b.size()) != n_) throw ValidationError("SparseLU::solve: size mismatch");
  const int n = n_;
  CVector t(n);
  for (int i = 0; i < n; ++i) t[pivot_[i]] = b[perm_[i]];
  // forward: L t = t, unit diagonal
  for (int k = 0; k < n; ++k) {
    Complex tk = t[k];
    for (int p = l_ptr_[k]; p < l_ptr_[k + 1]; ++p) t[l_idx_[p]] -= l_val_[p] * tk;
  }
  // backward: U x = t, diagonal stored last in each column
  for (int k = n - 1; k >= 0; --k) {
    int pd = u_ptr_[k + 1] - 1;
    t[k] /= u_val_[pd];
    Complex tk = t[k];
    for (int p = u_ptr_[k]; p < pd; ++p) t[u_idx_[p]] -= u_val_[p] * tk;
  }
  CVector x(n);
  for (int i = 0; i < n; ++i) x[perm_[i]] = t[i];
  return x;
}

CVector lu_solve(const SparseMatrix& A, std::span<const Complex> b) {
  return SparseLU(A).solve(b);
}

double qep_residual(const SparseMatrix& M, const SparseMatrix& C,
                    const SparseMatrix& K, Complex lambda,
                    std::span<const Complex> v) {
  const int n = M.size();
  CVector r(n);
  CVector t = M.apply(v);
  for (int i = 0; i < n; ++i) r[i] = lambda * lambda * t[i];
  t = C.apply(v);
  for (int i = 0; i < n; ++i) r[i] += lambda * t[i];
  t = K.apply(v);
  for (int i = 0; i < n; ++i) r[i] += t[i];
  double al = std::abs(lambda);
  double denom = (al * al * M.norm_inf() + al * C.norm_inf() + K.norm_inf()) * cnorm(v);
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return cnorm(r) / denom;
}

namespace {

struct CompanionOp {
  const SparseMatrix *M, *C;
  Complex sigma;
  SparseLU lu;  // factorization of sigma^2 M + sigma C + K

  CompanionOp(const SparseMatrix& M_, const SparseMatrix& C_, const SparseMatrix& K_,
              Complex s)
      : M(&M_), C(&C_), sigma(s),
        lu(SparseMatrix::combine(s * s, M_, s, C_, 1.0, K_)) {}

  // z = (A - sigma B)^{-1} B y on the companion pencil; y, z of length 2n.
  void apply(std::span<const Complex> y, std::span<Complex> z) const {
    const int n = M->size();
    auto yv = y.subspan(0, n), yw = y.subspan(n, n);
    CVector rhs = M->apply(yw);
    CVector t = C->apply(yv);
    CVector t2 = M->apply(yv);
    for (int i = 0; i < n; ++i) rhs[i] = -(rhs[i] + t[i] + sigma * t2[i]);
    CVector vz = lu.solve(rhs);
    for (int i = 0; i < n; ++i) {
      z[i] = vz[i];
      z[n + i] = yv[i] + sigma * vz[i];
    }
  }
};

void orthogonalize(CVector& y, const std::vector<CVector>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) {
      Complex c = cdot(q, y);
      for (size_t i = 0; i < y.size(); ++i) y[i] -= c * q[i];
    }
}

// Root of v^H (l^2 M + l C + K) v = 0 nearest to guess.
Complex rayleigh_polish(const SparseMatrix& M, const SparseMatrix& C,
                        const SparseMatrix& K, std::span<const Complex> v,
                        Complex guess) {
  Complex a = cdot(v, M.apply(v));
  Complex b = cdot(v, C.apply(v));
  Complex c = cdot(v, K.apply(v));
  if (std::abs(a) == 0.0) return guess;
  Complex disc = std::sqrt(b * b - 4.0 * a * c);
  Complex r1 = (-b + disc) / (2.0 * a);
  Complex r2 = (-b - disc) / (2.0 * a);
  return std::abs(r1 - guess) < std::abs(r2 - guess) ? r1 : r2;
}

}  // namespace

namespace {

struct Refined {
  Complex lambda;
  CVector v;
  double residual = std::numeric_limits<double>::infinity();
};

// Rayleigh-quotient refinement: inverse iteration on S(lambda) alternated
// with the quadratic Rayleigh update. The deflated companion iterate only
// estimates lambda; the true eigenvector is recovered here.
Refined refine_pair(const SparseMatrix& M, const SparseMatrix& C, const SparseMatrix& K,
                    Complex lambda0, CVector v0, double target, double scale) {
  Refined best;
  Complex lambda = lambda0;
  CVector v = std::move(v0);
  double nv = cnorm(v);
  if (nv < 1e-280) return best;
  for (auto& e : v) e /= nv;

  double prev_res = std::numeric_limits<double>::infinity();
  for (int cycle = 0; cycle < 8; ++cycle) {
    std::unique_ptr<SparseLU> lu;
    for (int bump = 0; bump < 3 && !lu; ++bump) {
      try {
        lu = std::make_unique<SparseLU>(
            SparseMatrix::combine(lambda * lambda, M, lambda, C, 1.0, K));
      } catch (const SolverError&) {
        lambda += Complex(1e-10, 1e-10) * (scale + std::abs(lambda));  // exactly singular
      }
    }
    if (!lu) break;
    CVector w = lu->solve(v);
    double nw = cnorm(w);
    if (nw < 1e-280) break;
    for (auto& e : w) e /= nw;
    v = std::move(w);
    lambda = rayleigh_polish(M, C, K, v, lambda);
    double res = qep_residual(M, C, K, lambda, v);
    if (res < best.residual) best = Refined{lambda, v, res};
    // iterate down to diminishing returns so lambda is sharp enough for the
    // duplicate gate, not merely inside the acceptance tolerance
    if (res > 0.25 * prev_res && res <= target) break;
    if (res < 1e-15) break;
    prev_res = res;
  }
  return best;
}

}  // namespace

std::vector<EigenPair> qep_solve(const SparseMatrix& M, const SparseMatrix& C,
                                 const SparseMatrix& K, int k, Complex shift,
                                 const QepOptions& opts) {
  const int n = M.size();
  if (C.size() != n || K.size() != n)
    throw ValidationError("qep_solve: matrix dimensions differ");
  if (k < 1) throw ValidationError("qep_solve: k must be >= 1");
  if (k > 2 * n) throw ValidationError("qep_solve: k exceeds 2n");

  const double scale = std::abs(shift) > 0.0
                           ? std::abs(shift)
                           : std::sqrt(K.norm_inf() / std::max(M.norm_inf(), 1e-300));

  std::vector<EigenPair> result;
  std::vector<CVector> deflated;  // orthonormal companion eigenvectors of accepted pairs

  // A rediscovered pair: eigenvalue in the same neighbourhood and an
  // essentially parallel eigenvector. Degenerate eigenvalues survive the
  // gate because their eigenvectors are not parallel.
  auto is_duplicate = [&](Complex lambda, const CVector& v) {
    for (const auto& p : result) {
      if (std::abs(lambda - p.lambda) > 1e-2 * (scale + std::abs(lambda))) continue;
      if (std::abs(cdot(p.vector, v)) > 0.9) return true;
    }
    return false;
  };

  Complex sigma = shift;
  auto op = std::make_unique<CompanionOp>(M, C, K, sigma);
  SplitMix64 rng{0x5DEECE66Dull};

  for (int j = 0; j < k; ++j) {
    Refined best;
    bool accepted = false;

    for (int attempt = 0; attempt <= opts.max_reshifts && !accepted; ++attempt) {
      if (attempt > 0) {
        sigma = shift + scale * Complex(0.13, 0.31) * static_cast<double>(attempt);
        op = std::make_unique<CompanionOp>(M, C, K, sigma);
      }
      CVector y(2 * n);
      for (auto& e : y) e = Complex(rng.uniform(), rng.uniform());
      orthogonalize(y, deflated);
      double ny = cnorm(y);
      if (ny < 1e-280) break;
      for (auto& e : y) e /= ny;

      CVector z(2 * n);
      Complex lambda_prev(std::numeric_limits<double>::max(), 0.0);
      for (int it = 0; it < opts.max_iterations && !accepted; ++it) {
        op->apply(y, z);
        Complex theta = cdot(y, z);
        orthogonalize(z, deflated);
        double nz = cnorm(z);
        if (nz < 1e-280 || std::abs(theta) < 1e-280) break;  // subspace exhausted
        for (auto& e : z) e /= nz;
        y = z;

        Complex lambda_est = sigma + 1.0 / theta;
        bool settled = std::abs(lambda_est - lambda_prev) <
                       1e-4 * (0.01 * scale + std::abs(lambda_est));
        lambda_prev = lambda_est;
        if (!settled && (it + 1) % 25 != 0) continue;

        auto cand = refine_pair(M, C, K, lambda_est, CVector(y.begin(), y.begin() + n),
                                opts.tol, scale);
        if (cand.v.empty()) continue;
        if (cand.residual <= opts.tol && !is_duplicate(cand.lambda, cand.v)) {
          best = std::move(cand);
          accepted = true;
        } else if (!is_duplicate(cand.lambda, cand.v) && cand.residual < best.residual) {
          best = std::move(cand);
        }
      }
    }

    if (!accepted) {
      if (best.v.empty())
        throw ConvergenceError("qep_solve: no candidate for eigenpair " + std::to_string(j),
                               std::numeric_limits<double>::infinity());
      if (best.residual > opts.tol)
        throw ConvergenceError("qep_solve: eigenpair " + std::to_string(j) +
                                   " did not reach tolerance; achieved residual " +
                                   std::to_string(best.residual),
                               best.residual);
    }

    // deflate the companion eigenvector [v; lambda v]
    CVector zc(2 * n);
    for (int i = 0; i < n; ++i) {
      zc[i] = best.v[i];
      zc[n + i] = best.lambda * best.v[i];
    }
    orthogonalize(zc, deflated);
    double nzc = cnorm(zc);
    if (nzc > 1e-12) {
      for (auto& e : zc) e /= nzc;
      deflated.push_back(std::move(zc));
    }
    result.push_back(EigenPair{best.lambda, std::move(best.v), best.residual});
  }

  std::sort(result.begin(), result.end(), [&](const EigenPair& a, const EigenPair& b) {
    return std::abs(a.lambda - shift) < std::abs(b.lambda - shift);
  });
  return result;
}

}  // namespace vta::numlin
