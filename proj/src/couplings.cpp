#include "dyson/couplings.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dyson/digest.hpp"

namespace dyson {

namespace {

// Compensated accumulator for long decreasing sums.
struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

// int_x^inf t^(-a) dt
double power_integral(double a, double x) {
  return std::pow(x, 1.0 - a) / (a - 1.0);
}

// Rounding slack added to both ends of every certified bracket.  The partial
// sums are compensated, so this is far more than the actual error.
double fp_fuzz(double magnitude) { return 1e-14 * (1.0 + std::abs(magnitude)); }

}  // namespace

Interval power_sum_tail(double a, std::int64_t i, double tol) {
  if (a <= 1.0) throw std::invalid_argument("power_sum_tail: need exponent > 1");
  if (i < 1) throw std::invalid_argument("power_sum_tail: need start index >= 1");
  constexpr std::int64_t kMaxTerms = 20'000'000;
  Kahan partial;
  std::int64_t k = i;
  std::int64_t chunk = 64;
  double rem_lo = 0.0, rem_hi = 0.0;
  for (;;) {
    std::int64_t target = k + chunk;
    for (; k < target; ++k) partial.add(std::pow(static_cast<double>(k), -a));
    double m = static_cast<double>(k - 1);
    rem_lo = 0.5 * std::pow(m + 1.0, -a) + power_integral(a, m + 1.0);
    rem_hi = power_integral(a, m + 0.5);
    if (rem_hi - rem_lo <= tol || k - i >= kMaxTerms) break;
    chunk *= 2;
  }
  double fuzz = fp_fuzz(partial.s);
  return {partial.s + rem_lo - fuzz, partial.s + rem_hi + fuzz};
}

CouplingFamily CouplingFamily::power_law(double alpha) {
  if (!(alpha > 1.0))
    throw std::invalid_argument("CouplingFamily::power_law: need alpha > 1, got " +
                                std::to_string(alpha));
  CouplingFamily f;
  f.power_ = true;
  f.alpha_ = alpha;
  return f;
}

CouplingFamily CouplingFamily::table(std::vector<double> values) {
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    double v = values[idx];
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("CouplingFamily::table: J(" +
                                  std::to_string(idx + 1) +
                                  ") must be finite and >= 0");
  }
  while (!values.empty() && values.back() == 0.0) values.pop_back();
  CouplingFamily f;
  f.power_ = false;
  f.table_ = std::move(values);
  return f;
}

CouplingFamily CouplingFamily::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("couplings file " + path + ": cannot open");
  auto fail = [&](int line, const std::string& msg) {
    throw std::runtime_error("couplings file " + path + ":" +
                             std::to_string(line) + ": " + msg);
  };
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    if (!header_seen) {
      std::string w1, w2, extra;
      if (!(ss >> w1)) continue;  // blank or comment-only line
      if (!(ss >> w2) || w1 != "tail" || w2 != "zero" || (ss >> extra))
        fail(line_no, "expected header line 'tail zero'");
      header_seen = true;
      continue;
    }
    std::int64_t k;
    double v;
    std::string extra;
    if (!(ss >> k)) continue;
    if (!(ss >> v)) fail(line_no, "expected 'k value' pair");
    if (ss >> extra) fail(line_no, "trailing tokens after 'k value' pair");
    if (k < 1) fail(line_no, "distance must be >= 1");
    if (!(v >= 0.0) || !std::isfinite(v)) fail(line_no, "value must be finite and >= 0");
    if (static_cast<std::size_t>(k) > values.size()) values.resize(k, 0.0);
    values[k - 1] = v;
  }
  if (!header_seen) fail(line_no, "missing header line 'tail zero'");
  return table(std::move(values));
}

void CouplingFamily::save(const std::string& path) const {
  if (power_)
    throw std::logic_error("CouplingFamily::save: only finite tables have a file form");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("couplings file " + path + ": cannot write");
  out << "tail zero\n";
  char buf[64];
  for (std::size_t k = 0; k < table_.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu %.17g\n", k + 1, table_[k]);
    out << buf;
  }
  if (!out) throw std::runtime_error("couplings file " + path + ": write failed");
}

double CouplingFamily::j(std::int64_t k) const {
  if (k < 1) throw std::invalid_argument("CouplingFamily::j: need distance >= 1");
  if (power_) return std::pow(static_cast<double>(k), -alpha_);
  return static_cast<std::size_t>(k) <= table_.size() ? table_[k - 1] : 0.0;
}

double CouplingFamily::alpha() const {
  if (!power_) throw std::logic_error("CouplingFamily::alpha: not a power law");
  return alpha_;
}

std::int64_t CouplingFamily::finite_range() const {
  if (power_) throw std::logic_error("CouplingFamily::finite_range: power law has infinite range");
  return static_cast<std::int64_t>(table_.size());
}

std::vector<double> CouplingFamily::prefix_table(std::int64_t m) const {
  std::vector<double> t(m);
  for (std::int64_t k = 1; k <= m; ++k) t[k - 1] = j(k);
  return t;
}

Interval CouplingFamily::tail(std::int64_t i, double tol) const {
  if (i < 1) throw std::invalid_argument("CouplingFamily::tail: need start index >= 1");
  if (power_) return power_sum_tail(alpha_, i, tol);
  Kahan s;
  for (std::size_t k = i; k <= table_.size(); ++k) s.add(table_[k - 1]);
  // an empty or all-zero tail is exactly zero, no rounding to cover
  double fuzz = s.s == 0.0 ? 0.0 : fp_fuzz(s.s);
  return {s.s - fuzz, s.s + fuzz};
}

std::string CouplingFamily::describe() const {
  if (power_) return "power-law alpha=" + std::to_string(alpha_);
  return "table range=" + std::to_string(table_.size());
}

std::uint64_t CouplingFamily::digest() const {
  char buf[64];
  std::uint64_t h = fnv1a64("couplings");
  if (power_) {
    std::snprintf(buf, sizeof buf, "power:%.17g", alpha_);
    return fnv1a64(std::string_view(buf), h);
  }
  h = fnv1a64("table", h);
  for (double v : table_) {
    std::snprintf(buf, sizeof buf, ":%.17g", v);
    h = fnv1a64(std::string_view(buf), h);
  }
  return h;
}

namespace {

// Power-law case of condition (iii).  One pass accumulating T(i)^2 with
// T(i) = Total - sum_{k<i} J(k), then envelope brackets
//   x^(1-alpha)/(alpha-1) <= T(x) <= (x-1)^(1-alpha)/(alpha-1)
// for everything past the cutoff.  Needs alpha > 3/2 so the squared
// envelopes are summable.
Interval c1_power_law(double alpha, const Interval& total) {
  constexpr std::int64_t kCut = 200'000;
  Kahan prefix, lo_acc, hi_acc;
  for (std::int64_t i = 1; i <= kCut; ++i) {
    double fuzz = fp_fuzz(prefix.s);
    double t_lo = total.lo - prefix.s - fuzz;
    if (t_lo < 0.0) t_lo = 0.0;
    double t_hi = total.hi - prefix.s + fuzz;
    lo_acc.add(t_lo * t_lo);
    hi_acc.add(t_hi * t_hi);
    prefix.add(std::pow(static_cast<double>(i), -alpha));
  }
  double q = 2.0 * alpha - 2.0;
  double inv = 1.0 / ((alpha - 1.0) * (alpha - 1.0));
  Interval rem_lo = power_sum_tail(q, kCut + 1, 1e-12);
  Interval rem_hi = power_sum_tail(q, kCut, 1e-12);
  double fuzz = 1e-12 * (1.0 + hi_acc.s);
  return {lo_acc.s + inv * rem_lo.lo - fuzz, hi_acc.s + inv * rem_hi.hi + fuzz};
}

// When C1 diverges, certify it: sum_{i=a}^{b} T(i)^2 is at least
// (alpha-1)^(-2) int_a^(b+1) x^(2-2alpha) dx, and doubling b makes the
// closed-form lower bound cross any threshold.
DivergenceCertificate certify_divergence(double alpha, double threshold) {
  double q = 2.0 * alpha - 2.0;  // in (0, 1]
  double inv = 1.0 / ((alpha - 1.0) * (alpha - 1.0));
  auto segment = [&](double a, double c) {
    if (q == 1.0) return std::log(c / a);
    return (std::pow(c, 1.0 - q) - std::pow(a, 1.0 - q)) / (1.0 - q);
  };
  double bound = 0.0;
  double a = 1.0, b = 1.0;
  for (int iter = 0; iter < 4000; ++iter) {
    bound += inv * segment(a, b + 1.0);
    if (bound > threshold) return {threshold, b, bound};
    a = b + 1.0;
    b *= 2.0;
  }
  throw std::runtime_error("certify_divergence: block doubling exhausted");
}

}  // namespace

SummabilityReport summability_report(const CouplingFamily& J,
                                     double divergence_threshold) {
  SummabilityReport r;
  r.total = J.total(1e-13);
  r.kappa = r.total.scaled(2.0);
  if (J.is_power_law()) {
    double alpha = J.alpha();
    r.weighted_square = power_sum_tail(2.0 * alpha - 1.0, 1, 1e-12);
    r.sup_p_pj = 1.0;  // p^(1-alpha) is maximal at p = 1
    r.cond_square_summable = true;
    r.cond_linear_decay = true;
    if (alpha > 1.5) {
      r.cond_tail_square_summable = true;
      r.c1 = c1_power_law(alpha, r.total);
    } else {
      r.cond_tail_square_summable = false;
      r.divergence = certify_divergence(alpha, divergence_threshold);
    }
  } else {
    std::int64_t m = J.finite_range();
    Kahan wsq;
    double sup = 0.0;
    for (std::int64_t k = 1; k <= m; ++k) {
      double v = J.j(k);
      wsq.add(static_cast<double>(k) * v * v);
      sup = std::max(sup, static_cast<double>(k) * v);
    }
    double f1 = fp_fuzz(wsq.s);
    r.weighted_square = {wsq.s - f1, wsq.s + f1};
    r.sup_p_pj = sup;
    r.cond_square_summable = true;
    r.cond_linear_decay = true;
    r.cond_tail_square_summable = true;
    Kahan c1;
    double suffix = 0.0;
    for (std::int64_t i = m; i >= 1; --i) {
      suffix += J.j(i);
      c1.add(suffix * suffix);
    }
    double f2 = fp_fuzz(c1.s);
    r.c1 = {c1.s - f2, c1.s + f2};
  }
  return r;
}

}  // namespace dyson
