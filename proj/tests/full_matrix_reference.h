// Naive reference for the constrained separation update. It materializes the
// full (p+1)x(p+1) demixing matrix per bin and applies every step literally:
// full matrix-vector demix, outer-product correlation, first-row masking,
// matrix-wide rescaling, then renormalization of each row by its diagonal
// entry. The production canceller collapses all of this into arithmetic on
// the free row only; tests assert both paths agree bin for bin, and that the
// materialized matrix keeps the constrained form exactly.

#ifndef SBAEC_TESTS_FULL_MATRIX_REFERENCE_H_
#define SBAEC_TESTS_FULL_MATRIX_REFERENCE_H_

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace sbaec_test {

class FullMatrixSeparator {
 public:
  using Complex = std::complex<double>;

  FullMatrixSeparator(int order, int num_bins, double learning_rate,
                      double score_epsilon = 1e-12)
      : order_(order),
        num_bins_(num_bins),
        dim_(order + 1),
        eta_(learning_rate),
        epsilon_(score_epsilon),
        w_(static_cast<std::size_t>(num_bins), IdentityMatrix(dim_)) {}

  void set_forced_scale(std::optional<double> c) { forced_scale_ = c; }

  // Entry (row, col) of the demixing matrix at bin k.
  Complex Entry(int k, int row, int col) const {
    return w_[static_cast<std::size_t>(k)][static_cast<std::size_t>(row) * dim_ + col];
  }

  // Free weight w_i(k) = W(k)[0][i + 1], matching the production layout.
  Complex FreeWeight(int k, int i) const { return Entry(k, 0, i + 1); }

  // Demixes with the current state, then applies one literal update step.
  // Returns the pre-update top-row outputs (the near-end estimates).
  std::vector<Complex> ProcessFrame(std::span<const Complex> mic,
                                    const std::vector<std::span<const Complex>>& basis) {
    const int m = dim_;
    // Source vectors e(k) = W(k) y(k) for the whole frame.
    std::vector<std::vector<Complex>> e(static_cast<std::size_t>(num_bins_));
    std::vector<Complex> estimate(static_cast<std::size_t>(num_bins_));
    for (int k = 0; k < num_bins_; ++k) {
      std::vector<Complex> y(static_cast<std::size_t>(m));
      y[0] = mic[static_cast<std::size_t>(k)];
      for (int i = 0; i < order_; ++i) {
        y[static_cast<std::size_t>(i) + 1] =
            basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      }
      e[static_cast<std::size_t>(k)] = MatVec(w_[static_cast<std::size_t>(k)], y);
      estimate[static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(k)][0];
    }

    // Per-source norms across all bins of the frame.
    std::vector<double> r(static_cast<std::size_t>(m), 0.0);
    for (int j = 0; j < m; ++j) {
      double energy = 0.0;
      for (int k = 0; k < num_bins_; ++k) {
        energy += std::norm(e[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
      }
      r[static_cast<std::size_t>(j)] = std::sqrt(energy + epsilon_);
    }

    for (int k = 0; k < num_bins_; ++k) {
      auto& W = w_[static_cast<std::size_t>(k)];
      const auto& ek = e[static_cast<std::size_t>(k)];

      // Correlation G = psi e^H with the frame-coupled score psi_j = e_j/r_j.
      // The real division by r_j is applied after the product: e_a conj(e_a)
      // then has an exactly zero imaginary part, so the diagonal of G, and
      // with it the renormalizing divisor of every row, stays exactly real.
      // That is what makes the restored constraint entries bitwise exact.
      std::vector<Complex> G(static_cast<std::size_t>(m) * m);
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
          G[static_cast<std::size_t>(a) * m + b] =
              ek[static_cast<std::size_t>(a)] * std::conj(ek[static_cast<std::size_t>(b)]) /
              r[static_cast<std::size_t>(a)];
        }
      }

      // d = max row sum of |G| (the infinity norm), floored so silence
      // cannot divide by zero. G/d is the scale-normalized correlation.
      double d = 0.0;
      for (int a = 0; a < m; ++a) {
        double row_sum = 0.0;
        for (int b = 0; b < m; ++b) {
          row_sum += std::abs(G[static_cast<std::size_t>(a) * m + b]);
        }
        d = std::max(d, row_sum);
      }
      d = std::max(d, kFloor);

      // U = W + eta * M o ((I - G/d) W), with M masking all but row 0.
      std::vector<Complex> U = W;
      for (int b = 0; b < m; ++b) {
        Complex delta = W[static_cast<std::size_t>(b)];  // (I W) row 0, col b
        for (int j = 0; j < m; ++j) {
          delta -= G[static_cast<std::size_t>(j)] * W[static_cast<std::size_t>(j) * m + b] / d;
        }
        U[static_cast<std::size_t>(b)] += eta_ * delta;
      }

      // Scale the whole matrix so no entry exceeds 1 in magnitude.
      double max_entry = 0.0;
      for (const Complex& v : U) max_entry = std::max(max_entry, std::abs(v));
      const double c = forced_scale_.value_or(1.0 / std::max(max_entry, kFloor));
      for (Complex& v : U) v *= c;

      // Renormalize every row by its diagonal entry. Rows 1..p are scaled
      // identity rows, so this restores them exactly; row 0 regains a unit
      // leading entry, which also cancels c.
      if (std::abs(U[0]) < kFloor) continue;  // degenerate lead: keep old state
      for (int a = 0; a < m; ++a) {
        const Complex diag = U[static_cast<std::size_t>(a) * m + a];
        for (int b = 0; b < m; ++b) {
          W[static_cast<std::size_t>(a) * m + b] =
              U[static_cast<std::size_t>(a) * m + b] / diag;
        }
      }
    }
    return estimate;
  }

 private:
  static constexpr double kFloor = 1e-12;

  static std::vector<Complex> IdentityMatrix(int m) {
    std::vector<Complex> w(static_cast<std::size_t>(m) * m, Complex{0.0, 0.0});
    for (int a = 0; a < m; ++a) w[static_cast<std::size_t>(a) * m + a] = Complex{1.0, 0.0};
    return w;
  }

  std::vector<Complex> MatVec(const std::vector<Complex>& mat,
                              const std::vector<Complex>& v) const {
    std::vector<Complex> out(static_cast<std::size_t>(dim_), Complex{0.0, 0.0});
    for (int a = 0; a < dim_; ++a) {
      for (int b = 0; b < dim_; ++b) {
        out[static_cast<std::size_t>(a)] +=
            mat[static_cast<std::size_t>(a) * dim_ + b] * v[static_cast<std::size_t>(b)];
      }
    }
    return out;
  }

  int order_;
  int num_bins_;
  int dim_;
  double eta_;
  double epsilon_;
  std::optional<double> forced_scale_;
  std::vector<std::vector<Complex>> w_;  // per bin, row-major (p+1)x(p+1)
};

}  // namespace sbaec_test

#endif  // SBAEC_TESTS_FULL_MATRIX_REFERENCE_H_
