#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace vta::numlin {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Square sparse matrix in compressed-row form. Built from triplets; duplicate
// (row, col) entries are summed during finalization.
class SparseMatrix {
public:
  SparseMatrix() = default;

  static SparseMatrix from_triplets(int n,
                                    std::vector<std::tuple<int, int, Complex>> triplets);
  static SparseMatrix identity(int n);

  // a*A + b*B (+ c*C), matching dimensions required.
  static SparseMatrix combine(Complex a, const SparseMatrix& A,
                              Complex b, const SparseMatrix& B);
  static SparseMatrix combine(Complex a, const SparseMatrix& A,
                              Complex b, const SparseMatrix& B,
                              Complex c, const SparseMatrix& C);

  int size() const { return n_; }
  int nnz() const { return static_cast<int>(val_.size()); }

  // y = A x
  void apply(std::span<const Complex> x, std::span<Complex> y) const;
  CVector apply(std::span<const Complex> x) const;

  Complex at(int row, int col) const;  // 0 if not stored; linear scan of the row
  double norm_inf() const;             // max absolute row sum

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> cols() const { return col_; }
  std::span<const Complex> values() const { return val_; }

private:
  int n_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<Complex> val_;
};

// Convenience accumulator for FEM assembly.
class SparseBuilder {
public:
  explicit SparseBuilder(int n) : n_(n) {}
  void add(int row, int col, Complex v) { trips_.emplace_back(row, col, v); }
  int size() const { return n_; }
  SparseMatrix build() { return SparseMatrix::from_triplets(n_, std::move(trips_)); }

private:
  int n_;
  std::vector<std::tuple<int, int, Complex>> trips_;
};

// Sparse LU with reverse Cuthill-McKee preordering and threshold partial
// pivoting (Gilbert-Peierls, column oriented). Throws SolverError on a
// singular pivot, reporting the pivot index.
class SparseLU {
public:
  explicit SparseLU(const SparseMatrix& A, double pivot_threshold = 0.1);

  CVector solve(std::span<const Complex> b) const;
  int size() const { return n_; }

private:
  int n_ = 0;
  // L unit-lower and U upper in compressed-column form.
  std::vector<int> l_ptr_, l_idx_, u_ptr_, u_idx_;
  std::vector<Complex> l_val_, u_val_;
  std::vector<int> perm_;      // RCM ordering, new -> old
  std::vector<int> pivot_;     // row pivoting, pivot_[i] = RCM-row stored in position i
};

CVector lu_solve(const SparseMatrix& A, std::span<const Complex> b);

struct EigenPair {
  Complex lambda;   // 1/s
  CVector vector;   // length n, unit 2-norm
  double residual;  // scaled QEP residual at acceptance
};

struct QepOptions {
  double tol = 1e-8;       // relative residual target per pair
  int max_iterations = 400;  // inverse-iteration cap per pair per shift
  int max_reshifts = 5;
};

// Quadratic eigenvalue problem (lambda^2 M + lambda C + K) v = 0 via
// first-companion linearization [0 I; -K -C] z = lambda [I 0; 0 M] z and
// shift-invert inverse iteration with Gram-Schmidt deflation. Returns the k
// eigenpairs nearest `shift`, sorted by |lambda - shift| ascending.
std::vector<EigenPair> qep_solve(const SparseMatrix& M, const SparseMatrix& C,
                                 const SparseMatrix& K, int k, Complex shift,
                                 const QepOptions& opts = {});

// Scaled residual ||(l^2 M + l C + K) v|| / ((|l|^2 |M| + |l| |C| + |K|) ||v||).
double qep_residual(const SparseMatrix& M, const SparseMatrix& C,
                    const SparseMatrix& K, Complex lambda,
                    std::span<const Complex> v);

}  // namespace vta::numlin
