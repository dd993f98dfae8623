#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dra {

/// Update-magnitude function h on [1, inf). The admissible class requires
/// h(1)=0, h nondecreasing and unbounded, x-h(x) nondecreasing, and
/// h(x)/x -> 0; membership is checked numerically by validate_h. The
/// linear and constant kinds exist as rejection fixtures and for the
/// baseline comparisons, they are not members of the class.
class HFunction {
 public:
  enum class Kind { sqrt_shift, natural_log, pow_shift, linear, constant, tabulated };

  HFunction() = default;

  static HFunction sqrt_shift() { return HFunction(Kind::sqrt_shift, 0.0); }
  static HFunction natural_log() { return HFunction(Kind::natural_log, 0.0); }

  /// x^alpha - 1. Sensible for alpha in (0,1); other values are accepted
  /// so the validator can be exercised on out-of-class shapes.
  static HFunction pow_shift(double alpha) { return HFunction(Kind::pow_shift, alpha); }

  static HFunction linear(double slope) { return HFunction(Kind::linear, slope); }
  static HFunction constant(double value) { return HFunction(Kind::constant, value); }

  /// Piecewise-linear interpolation through sorted (x, h) points; clamped
  /// to the end values outside the table range.
  static HFunction tabulated(std::vector<std::array<double, 2>> points) {
    if (points.size() < 2) throw std::invalid_argument("HFunction::tabulated: need >= 2 points");
    if (!std::is_sorted(points.begin(), points.end(),
                        [](const auto& a, const auto& b) { return a[0] < b[0]; })) {
      throw std::invalid_argument("HFunction::tabulated: points must be sorted by x");
    }
    HFunction h(Kind::tabulated, 0.0);
    h.table_ = std::move(points);
    return h;
  }

  /// Builds from a config key: "sqrt", "log", "pow" (param = alpha),
  /// "linear" (param = slope), "const" (param = value).
  static HFunction from_key(const std::string& key, double param = 0.0) {
    if (key == "sqrt") return sqrt_shift();
    if (key == "log") return natural_log();
    if (key == "pow") return pow_shift(param);
    if (key == "linear") return linear(param);
    if (key == "const") return constant(param);
    throw std::invalid_argument("HFunction::from_key: unknown key '" + key + "'");
  }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::sqrt_shift:
        return std::sqrt(x) - 1.0;
      case Kind::natural_log:
        return std::log(x);
      case Kind::pow_shift:
        return std::pow(x, param_) - 1.0;
      case Kind::linear:
        return param_ * x;
      case Kind::constant:
        return param_;
      case Kind::tabulated: {
        if (x <= table_.front()[0]) return table_.front()[1];
        if (x >= table_.back()[0]) return table_.back()[1];
        auto it = std::lower_bound(table_.begin(), table_.end(), x,
                                   [](const auto& row, double v) { return row[0] < v; });
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double w = (x - lo[0]) / (hi[0] - lo[0]);
        return lo[1] + w * (hi[1] - lo[1]);
      }
    }
    return 0.0;
  }

  Kind kind() const { return kind_; }
  double param() const { return param_; }

  std::string describe() const {
    std::ostringstream os;
    switch (kind_) {
      case Kind::sqrt_shift:
        return "sqrt(x)-1";
      case Kind::natural_log:
        return "log(x)";
      case Kind::pow_shift:
        os << "x^" << param_ << "-1";
        return os.str();
      case Kind::linear:
        os << param_ << "*x";
        return os.str();
      case Kind::constant:
        os << "const " << param_;
        return os.str();
      case Kind::tabulated:
        os << "tabulated[" << table_.size() << "]";
        return os.str();
    }
    return "?";
  }

 private:
  HFunction(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_ = Kind::sqrt_shift;
  double param_ = 0.0;
  std::vector<std::array<double, 2>> table_;
};

/// Probability-margin function eps on [1, inf) with range (0, 1/2].
/// The admissible class (relative to an h) requires eps -> 0 and
/// h * eps^2 -> inf; see validate_eps.
class EpsFunction {
 public:
  enum class Kind { power, constant };

  EpsFunction() = default;

  /// min(x^-gamma, 1/2). The cap keeps the value inside (0, 1/2] at the
  /// left end of the domain where x^-gamma would reach 1.
  static EpsFunction power(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("EpsFunction::power: gamma must be > 0");
    return EpsFunction(Kind::power, gamma);
  }

  static EpsFunction constant(double value) { return EpsFunction(Kind::constant, value); }

  static EpsFunction from_key(const std::string& key, double param) {
    if (key == "pow") return power(param);
    if (key == "const") return constant(param);
    throw std::invalid_argument("EpsFunction::from_key: unknown key '" + key + "'");
  }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::power:
        return std::min(std::pow(x, -param_), 0.5);
      case Kind::constant:
        return param_;
    }
    return 0.0;
  }

  Kind kind() const { return kind_; }
  double param() const { return param_; }

  std::string describe() const {
    std::ostringstream os;
    if (kind_ == Kind::power) {
      os << "min(x^-" << param_ << ", 1/2)";
    } else {
      os << "const " << param_;
    }
    return os.str();
  }

 private:
  EpsFunction(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_ = Kind::power;
  double param_ = 0.25;
};

/// Geometric grid on [lo, hi], inclusive at both ends.
inline std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw std::invalid_argument("geometric_grid: need 0 < lo < hi and n >= 2");
  }
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

/// Thresholds for the finite-grid class checks. Limit conditions are not
/// machine-checkable, so tails and trends on the grid stand in for them;
/// the defaults below are the documented knobs.
struct ClassCheckOptions {
  double ratio_threshold = 0.05;  // h(x)/x at the grid tail must be below this
  double tail_decade = 10.0;      // trend window: x >= x_max / tail_decade
  double growth_floor = 1.0;      // h(x_max) must clear this (unbounded surrogate)
  double monotone_slack = 1e-12;  // relative slack for nondecreasing checks
  double product_floor = 1.0;     // h*eps^2 at the tail must clear this
};

struct HReport {
  bool zero_at_one = false;        // h(1) == 0 exactly
  bool nondecreasing = false;      // h(x) nondecreasing on grid
  bool gap_nondecreasing = false;  // x - h(x) nondecreasing on grid
  bool ratio_vanishes = false;     // h(x)/x small at tail and strictly decreasing
  bool unbounded = false;          // h(x_max) above the growth floor
  double ratio_at_tail = 0.0;
  double value_at_tail = 0.0;
  std::string detail;

  bool pass() const {
    return zero_at_one && nondecreasing && gap_nondecreasing && ratio_vanishes && unbounded;
  }
};

namespace detail {

inline bool nondecreasing_with_slack(const std::vector<double>& v, double slack) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double allowance = slack * std::max({1.0, std::abs(v[i - 1]), std::abs(v[i])});
    if (v[i] < v[i - 1] - allowance) return false;
  }
  return true;
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

inline bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

inline void require_valid_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("class check: empty grid");
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw std::invalid_argument("class check: grid must be sorted");
  }
  if (grid.front() < 1.0) throw std::invalid_argument("class check: grid must start at x >= 1");
}

}  // namespace detail

inline HReport validate_h(const HFunction& h, const std::vector<double>& grid,
                          const ClassCheckOptions& opts = {}) {
  detail::require_valid_grid(grid);
  HReport rep;
  std::ostringstream detail_os;

  rep.zero_at_one = (h(1.0) == 0.0);
  if (!rep.zero_at_one) detail_os << "h(1) = " << h(1.0) << " != 0; ";

  std::vector<double> values(grid.size());
  std::vector<double> gaps(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = h(grid[i]);
    gaps[i] = grid[i] - values[i];
  }
  rep.nondecreasing = detail::nondecreasing_with_slack(values, opts.monotone_slack);
  if (!rep.nondecreasing) detail_os << "h not nondecreasing on grid; ";
  rep.gap_nondecreasing = detail::nondecreasing_with_slack(gaps, opts.monotone_slack);
  if (!rep.gap_nondecreasing) detail_os << "x - h(x) not nondecreasing on grid; ";

  const double x_tail = grid.back();
  rep.value_at_tail = values.back();
  rep.ratio_at_tail = values.back() / x_tail;
  std::vector<double> tail_ratios;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= x_tail / opts.tail_decade) tail_ratios.push_back(values[i] / grid[i]);
  }
  rep.ratio_vanishes =
      rep.ratio_at_tail < opts.ratio_threshold && detail::strictly_decreasing(tail_ratios);
  if (!rep.ratio_vanishes) {
    detail_os << "h(x)/x at tail = " << rep.ratio_at_tail << " (threshold " << opts.ratio_threshold
              << ", strictly decreasing last decade required); ";
  }

  rep.unbounded = rep.value_at_tail >= opts.growth_floor;
  if (!rep.unbounded) {
    detail_os << "h(x_max) = " << rep.value_at_tail << " below growth floor " << opts.growth_floor
              << "; ";
  }

  rep.detail = detail_os.str();
  return rep;
}

struct EpsReport {
  bool in_range = false;          // eps(x) in (0, 1/2] on the whole grid
  bool vanishes = false;          // strictly decreasing over the tail decade
  bool product_diverges = false;  // h*eps^2 increasing over the tail and above floor
  double eps_at_tail = 0.0;
  double product_at_tail = 0.0;
  std::string detail;

  bool pass() const { return in_range && vanishes && product_diverges; }
};

inline EpsReport validate_eps(const HFunction& h, const EpsFunction& eps,
                              const std::vector<double>& grid, const ClassCheckOptions& opts = {}) {
  detail::require_valid_grid(grid);
  EpsReport rep;
  std::ostringstream detail_os;

  std::vector<double> values(grid.size());
  std::vector<double> products(grid.size());
  rep.in_range = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = eps(grid[i]);
    products[i] = h(grid[i]) * values[i] * values[i];
    if (!(values[i] > 0.0 && values[i] <= 0.5)) rep.in_range = false;
  }
  if (!rep.in_range) detail_os << "eps leaves (0, 1/2] on grid; ";

  rep.eps_at_tail = values.back();
  rep.product_at_tail = products.back();

  const double x_tail = grid.back();
  std::vector<double> tail_eps;
  std::vector<double> tail_prod;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= x_tail / opts.tail_decade) {
      tail_eps.push_back(values[i]);
      tail_prod.push_back(products[i]);
    }
  }
  rep.vanishes = detail::strictly_decreasing(tail_eps);
  if (!rep.vanishes) detail_os << "eps not strictly decreasing over last decade; ";
  rep.product_diverges =
      detail::strictly_increasing(tail_prod) && rep.product_at_tail >= opts.product_floor;
  if (!rep.product_diverges) {
    detail_os << "h*eps^2 at tail = " << rep.product_at_tail << " (floor " << opts.product_floor
              << ", strictly increasing last decade required); ";
  }

  rep.detail = detail_os.str();
  return rep;
}

/// Default membership grid: geometric on [1, 1e8].
inline std::vector<double> default_class_grid() { return geometric_grid(1.0, 1e8, 161); }

}  // namespace dra
