#pragma once

#include <spherecon/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spherecon {

/// Edge gain f together with its derivative f'. Built-in families carry exact
/// derivatives and closed-form integrals; custom gains must supply f'
/// explicitly (the Hessian assembly needs it to full accuracy) and are
/// validated against a central finite difference at registration.
class GainFunction {
 public:
  enum class Kind { constant, power, custom };

  static GainFunction constant(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("GainFunction::constant: k must be > 0");
    GainFunction g;
    g.kind_ = Kind::constant;
    g.k_ = k;
    g.name_ = "constant:" + format(k);
    return g;
  }

  static GainFunction power(int k) {
    if (k < 0) throw std::invalid_argument("GainFunction::power: exponent must be >= 0");
    GainFunction g;
    g.kind_ = Kind::power;
    g.exponent_ = k;
    g.name_ = "power:" + std::to_string(k);
    return g;
  }

  static GainFunction custom(std::string name, std::function<double(double)> f,
                             std::function<double(double)> f_prime) {
    GainFunction g;
    g.kind_ = Kind::custom;
    g.f_ = std::move(f);
    g.f_prime_ = std::move(f_prime);
    g.name_ = std::move(name);
    g.validate_derivative();
    return g;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double constant_value() const { return k_; }
  int power_exponent() const { return exponent_; }

  /// (f(s), f'(s)) for s in the sphere chordal range [0, 2].
  std::pair<double, double> evaluate(double s) const {
    check_domain(s, 2.0);
    return evaluate_unchecked(s);
  }

  /// (f(s), f'(s)) for the SO(3) chordal range [0, 4], s = 3 - <R_i, R_j>.
  std::pair<double, double> evaluate_rotation(double s) const {
    check_domain(s, 4.0);
    return evaluate_unchecked(s);
  }

  std::pair<double, double> evaluate_unchecked(double s) const {
    switch (kind_) {
      case Kind::constant:
        return {k_, 0.0};
      case Kind::power:
        if (exponent_ == 0) return {1.0, 0.0};
        if (s == 0.0) return {0.0, exponent_ == 1 ? 1.0 : 0.0};
        return {std::pow(s, exponent_), exponent_ * std::pow(s, exponent_ - 1)};
      case Kind::custom:
        return {f_(s), f_prime_(s)};
    }
    throw std::logic_error("GainFunction: invalid kind");
  }

  /// Integral of f over [0, s]: closed form for the built-in families,
  /// adaptive Simpson quadrature (abs tol 1e-12) for custom gains.
  double integral(double s) const {
    switch (kind_) {
      case Kind::constant:
        return k_ * s;
      case Kind::power:
        return std::pow(s, exponent_ + 1) / (exponent_ + 1);
      case Kind::custom:
        return adaptive_simpson(f_, 0.0, s, 1e-12);
    }
    throw std::logic_error("GainFunction: invalid kind");
  }

  /// Maximum of |f| over [lo, hi]; used for integrator step-size defaults.
  double max_abs(double lo, double hi) const {
    switch (kind_) {
      case Kind::constant:
        return k_;
      case Kind::power:
        return std::pow(std::max(std::abs(lo), std::abs(hi)), exponent_);
      case Kind::custom: {
        double m = 0.0;
        const int pts = 512;
        for (int i = 0; i <= pts; ++i) {
          const double s = lo + (hi - lo) * i / pts;
          m = std::max(m, std::abs(f_(s)));
        }
        return m;
      }
    }
    throw std::logic_error("GainFunction: invalid kind");
  }

 private:
  GainFunction() = default;

  static std::string format(double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  static void check_domain(double s, double s_max) {
    if (!(s >= 0.0 && s <= s_max + 1e-12)) {
      throw std::invalid_argument("GainFunction: s outside [0, " + format(s_max) + "]");
    }
  }

  void validate_derivative() const {
    Rng rng(0x5eedu);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
      const double s = 0.01 + 1.98 * uniform01(rng);
      const double fd = (f_(s + h) - f_(s - h)) / (2.0 * h);
      const double fp = f_prime_(s);
      if (std::abs(fd - fp) > 1e-5 * std::max(1.0, std::abs(fp))) {
        throw std::invalid_argument(
            "GainFunction::custom: supplied derivative disagrees with finite difference at s=" +
            format(s));
      }
    }
  }

  static double simpson(const std::function<double(double)>& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
  }

  static double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                 double tol, int depth = 0) {
    const double mid = 0.5 * (a + b);
    const double whole = simpson(f, a, b);
    const double left = simpson(f, a, mid);
    const double right = simpson(f, mid, b);
    if (depth > 48 || std::abs(left + right - whole) < 15.0 * tol) {
      return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, mid, 0.5 * tol, depth + 1) +
           adaptive_simpson(f, mid, b, 0.5 * tol, depth + 1);
  }

  Kind kind_ = Kind::constant;
  double k_ = 1.0;
  int exponent_ = 0;
  std::function<double(double)> f_;
  std::function<double(double)> f_prime_;
  std::string name_;
};

/// Gain assignment for a graph: edge gain ids index into this table. A single
/// GainFunction converts implicitly to the one-shared-gain table.
class GainTable {
 public:
  GainTable(GainFunction g) : funcs_{std::move(g)} {}  // NOLINT: implicit by design
  explicit GainTable(std::vector<GainFunction> funcs) : funcs_(std::move(funcs)) {
    if (funcs_.empty()) throw std::invalid_argument("GainTable: empty");
  }

  const GainFunction& operator[](int id) const { return funcs_.at(id); }
  int size() const { return static_cast<int>(funcs_.size()); }

  double max_abs(double lo, double hi) const {
    double m = 0.0;
    for (const auto& f : funcs_) m = std::max(m, f.max_abs(lo, hi));
    return m;
  }

 private:
  std::vector<GainFunction> funcs_;
};

struct ConditionResult {
  bool pass = true;
  double witness = 0.0;  // most-violating grid point when pass is false
  double value = 0.0;    // expression value at the witness
};

namespace detail {

/// Grid over (delta, 2]: log-spaced points resolving the s -> 0 corner plus a
/// uniform sweep, as condition (iii) is a strict inequality on an open
/// interval whose worst case can sit at either end.
inline std::vector<double> condition_grid(int grid_points) {
  if (grid_points < 100) {
    throw std::invalid_argument("condition grid: need at least 100 points");
  }
  const double delta = 1e-8;
  std::vector<double> grid;
  grid.reserve(2 * grid_points);
  for (int i = 0; i < grid_points; ++i) {
    grid.push_back(delta * std::pow(2.0 / delta, static_cast<double>(i) / (grid_points - 1)));
  }
  for (int i = 1; i <= grid_points; ++i) {
    grid.push_back(2.0 * static_cast<double>(i) / grid_points);
  }
  return grid;
}

}  // namespace detail

/// Condition (i): f > 0 on (0, 2].
inline ConditionResult check_condition_i(const GainFunction& g, int grid_points = 1000) {
  ConditionResult result;
  double min_value = std::numeric_limits<double>::infinity();
  for (double s : detail::condition_grid(grid_points)) {
    const double f = g.evaluate_unchecked(s).first;
    if (f < min_value) {
      min_value = f;
      result.witness = s;
      result.value = f;
    }
  }
  result.pass = min_value > 0.0;
  return result;
}

/// Condition (iii): (n-2+s)s f(s) - (2-s)s^2 f'(s) > 0 on (0, 2]. On failure
/// the witness is the most-violating grid point. For the built-in families
/// the grid verdict is cross-checked against the closed-form criterion
/// (constants: n >= 2; powers s^k: k <= n/2 - 1) and any disagreement is an
/// internal error.
inline ConditionResult check_condition_iii(const GainFunction& g, int n, int grid_points = 1000) {
  if (n < 1) throw std::invalid_argument("check_condition_iii: n must be >= 1");
  ConditionResult result;
  double min_value = std::numeric_limits<double>::infinity();
  for (double s : detail::condition_grid(grid_points)) {
    const auto [f, fp] = g.evaluate_unchecked(s);
    const double value = (n - 2.0 + s) * s * f - (2.0 - s) * s * s * fp;
    if (value < min_value) {
      min_value = value;
      result.witness = s;
      result.value = value;
    }
  }
  result.pass = min_value > 0.0;

  bool closed_form_pass = result.pass;
  bool have_closed_form = true;
  switch (g.kind()) {
    case GainFunction::Kind::constant:
      closed_form_pass = n >= 2;
      break;
    case GainFunction::Kind::power:
      closed_form_pass = 2 * (g.power_exponent() + 1) <= n;
      break;
    case GainFunction::Kind::custom:
      have_closed_form = false;
      break;
  }
  if (have_closed_form && closed_form_pass != result.pass) {
    throw std::logic_error("check_condition_iii: grid and closed-form verdicts disagree for " +
                           g.name());
  }
  return result;
}

/// Admissible for Algorithm 2 on S^n: conditions (i) and (iii). Symmetry (ii)
/// holds structurally through unordered edge keys.
inline bool admissible(const GainFunction& g, int n, int grid_points = 1000) {
  return check_condition_i(g, grid_points).pass && check_condition_iii(g, n, grid_points).pass;
}

}  // namespace spherecon
