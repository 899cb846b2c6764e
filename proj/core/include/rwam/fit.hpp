#pragma once

#include <vector>

namespace rwam {

/// Least-squares line through (log N_n, log quantity_n) over the largest
/// `tail_window` levels.
struct ExponentFit {
  std::vector<int> levels;
  std::vector<double> x;  // log N_n
  std::vector<double> y;  // log quantity
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square deviation from the line
  int tail_window = 0;
};

inline constexpr int kDefaultTailWindow = 5;

/// Fits y against x over the tail window (levels sorted by N). Throws a fit
/// error with fewer than `min_levels` usable levels or nonpositive data.
ExponentFit fit_exponent(const std::vector<int>& levels, const std::vector<double>& N,
                         const std::vector<double>& quantity, int tail_window = kDefaultTailWindow,
                         int min_levels = 3);

}  // namespace rwam
