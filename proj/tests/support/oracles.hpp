// Brute-force reference computations. Deliberately written with plain loops
// over std::vector and without any drbench code, so they stay independent of
// the implementation paths they check.
#ifndef DRBENCH_TESTS_ORACLES_HPP
#define DRBENCH_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kE = 2.71828182845904523536;

/// d_i = B b_i e^{-beta p_i} / sum_j b_j e^{-beta p_j}, evaluated literally.
inline Vec worker_response(const Vec& prices, const Vec& baseline, double beta) {
  double total = 0, norm = 0;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    total += baseline[i];
    norm += baseline[i] * std::exp(-beta * prices[i]);
  }
  Vec d(baseline.size());
  for (std::size_t i = 0; i < baseline.size(); ++i)
    d[i] = total * baseline[i] * std::exp(-beta * prices[i]) / norm;
  return d;
}

inline double energy_reward(const Vec& demand, const Vec& grid) {
  double cost = 0;
  for (std::size_t i = 0; i < demand.size(); ++i) cost += demand[i] * grid[i];
  return -std::log(cost);
}

/// Sum of exact Gaussian log-densities ln N(s_i; mu_i, sigma_i^2).
inline double gaussian_log_density(const Vec& s, const Vec& mu, const Vec& sigma) {
  double total = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double var = sigma[i] * sigma[i];
    total += -0.5 * std::log(2 * kPi * var) - (s[i] - mu[i]) * (s[i] - mu[i]) / (2 * var);
  }
  return total;
}

struct MeanStd {
  Vec mean;
  Vec std;  // sample (n - 1) standard deviation
};

/// Two-pass per-dimension mean and sample std over rows of `samples`.
inline MeanStd two_pass(const std::vector<Vec>& samples) {
  const std::size_t dim = samples.front().size();
  const double n = static_cast<double>(samples.size());
  MeanStd out{Vec(dim, 0.0), Vec(dim, 0.0)};
  for (const Vec& s : samples)
    for (std::size_t i = 0; i < dim; ++i) out.mean[i] += s[i];
  for (double& m : out.mean) m /= n;
  for (const Vec& s : samples)
    for (std::size_t i = 0; i < dim; ++i)
      out.std[i] += (s[i] - out.mean[i]) * (s[i] - out.mean[i]);
  for (double& v : out.std) v = std::sqrt(v / (n - 1));
  return out;
}

/// A_t = sum_l (gamma lambda)^l delta_{t+l}, truncated at the first terminal
/// transition, with delta_t = r_t + gamma V_{t+1} (1 - done_t) - V_t.
inline Vec gae_direct(const Vec& rewards, const Vec& values, const std::vector<bool>& done,
                      double gamma, double lambda, double bootstrap) {
  const std::size_t n = rewards.size();
  Vec delta(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double next = t + 1 < n ? values[t + 1] : bootstrap;
    delta[t] = rewards[t] + (done[t] ? 0.0 : gamma * next) - values[t];
  }
  Vec adv(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double weight = 1;
    for (std::size_t l = t; l < n; ++l) {
      adv[t] += weight * delta[l];
      if (done[l]) break;
      weight *= gamma * lambda;
    }
  }
  return adv;
}

/// Dense layer stack with tanh on hidden layers, by explicit loops.
/// weights[l][r][c], biases[l][r].
inline Vec mlp_forward(const std::vector<std::vector<Vec>>& weights,
                       const std::vector<Vec>& biases, Vec x) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    Vec y(weights[l].size());
    for (std::size_t r = 0; r < weights[l].size(); ++r) {
      double acc = biases[l][r];
      for (std::size_t c = 0; c < x.size(); ++c) acc += weights[l][r][c] * x[c];
      y[r] = l + 1 < weights.size() ? std::tanh(acc) : acc;
    }
    x = y;
  }
  return x;
}

/// sum_i 0.5 ln(2 pi e max(floor, sample var_i)) over rows of `window`.
inline double sample_entropy(const std::vector<Vec>& window, double variance_floor) {
  const MeanStd ms = two_pass(window);
  double h = 0;
  for (double s : ms.std) h += 0.5 * std::log(2 * kPi * kE * std::max(variance_floor, s * s));
  return h;
}

/// Dirichlet(1,...,1) scaled by C: per-coordinate mean and std.
inline double simplex_coordinate_mean(int dim, double c) { return c / dim; }
inline double simplex_coordinate_std(int dim, double c) {
  return c * std::sqrt(static_cast<double>(dim - 1)) / (dim * std::sqrt(static_cast<double>(dim + 1)));
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
inline double ks_statistic(Vec a, Vec b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

/// Asymptotic two-sample critical value at significance `alpha`:
/// c(alpha) sqrt((n + m) / (n m)), c(alpha) = sqrt(-ln(alpha / 2) / 2).
inline double ks_critical(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2));
  return c * std::sqrt(double(n + m) / (double(n) * double(m)));
}

inline double population_std(const Vec& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / v.size());
}

/// Plain comma split of a run CSV: header names and rows of raw fields.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  bool truncated = false;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }
};

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out(1);
  for (char c : line) {
    if (c == ',')
      out.emplace_back();
    else
      out.back() += c;
  }
  return out;
}

inline Table read_table(const std::string& path) {
  std::ifstream in(path);
  Table t;
  std::string line;
  if (std::getline(in, line)) t.header = split(line);
  while (std::getline(in, line)) {
    if (line.rfind("#truncated", 0) == 0) {
      t.truncated = true;
      continue;
    }
    t.rows.push_back(split(line));
  }
  return t;
}

/// Means of consecutive chunks of `bin` values (last chunk may be short).
inline Vec bin_means(const Vec& v, std::size_t bin) {
  Vec out;
  for (std::size_t s = 0; s < v.size(); s += bin) {
    const std::size_t e = std::min(v.size(), s + bin);
    double acc = 0;
    for (std::size_t i = s; i < e; ++i) acc += v[i];
    out.push_back(acc / double(e - s));
  }
  return out;
}

/// First index i with m_i >= theta and m_j >= theta - tol for all j > i;
/// -1 if none. Quadratic on purpose.
inline long first_stable_crossing(const Vec& means, double theta, double tol) {
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (means[i] < theta) continue;
    bool ok = true;
    for (std::size_t j = i + 1; j < means.size(); ++j) ok = ok && means[j] >= theta - tol;
    if (ok) return static_cast<long>(i);
  }
  return -1;
}

/// Median of a non-empty list of present values.
inline double median(Vec v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace oracle

#endif  // DRBENCH_TESTS_ORACLES_HPP
