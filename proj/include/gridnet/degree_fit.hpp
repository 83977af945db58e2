#pragma once

#include "gridnet/csv.hpp"
#include "gridnet/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridnet {

struct CcdfPoint
{
  double k = 0.0;
  double p = 0.0; // fraction of nodes with degree >= k

  bool operator==(const CcdfPoint&) const = default;
};

/// Cumulative degree distribution, one point per distinct observed degree >= 1.
struct Ccdf
{
  std::vector<CcdfPoint> points;
};

/// Isolated nodes are excluded from the base.
inline Ccdf build_ccdf(std::span<const std::size_t> histogram)
{
  std::uint64_t base = 0;
  for (std::size_t k = 1; k < histogram.size(); ++k)
    base += histogram[k];
  if (base == 0)
    throw DomainError("build_ccdf: every node is isolated");

  Ccdf c;
  std::uint64_t tail = base;
  for (std::size_t k = 1; k < histogram.size(); ++k)
  {
    if (histogram[k] == 0)
      continue;
    c.points.push_back({static_cast<double>(k), static_cast<double>(tail) / static_cast<double>(base)});
    tail -= histogram[k];
  }
  return c;
}

inline void write_ccdf_csv(std::ostream& out, const Ccdf& c)
{
  out << "k,p\n";
  for (const auto& pt : c.points)
    out << csv::format_g17(pt.k) << ',' << csv::format_g17(pt.p) << '\n';
}

enum class FitModel
{
  power_law,   // a * k^-gamma
  exponential, // a * exp(-k / kappa)
};

inline std::string_view to_string(FitModel m)
{
  return m == FitModel::power_law ? "power_law" : "exponential";
}

inline std::optional<FitModel> parse_fit_model(std::string_view s)
{
  if (s == "power_law")
    return FitModel::power_law;
  if (s == "exponential")
    return FitModel::exponential;
  return std::nullopt;
}

struct FitResult
{
  FitModel model = FitModel::power_law;
  double prefactor = 0.0; // a
  double shape = 0.0;     // gamma (power law) or kappa (exponential)
  double sse = 0.0;       // linear-space residual sum of squares
  double r_squared = 0.0;
  int iterations = 0;

  double predict(double k) const
  {
    return model == FitModel::power_law ? prefactor * std::pow(k, -shape)
                                        : prefactor * std::exp(-k / shape);
  }

  bool operator==(const FitResult&) const = default;
};

/// Raised when the fit cannot finish; carries the last iterate.
class FitError : public DomainError
{
public:
  FitError(const std::string& what, FitResult last)
    : DomainError(what)
    , last_(last)
  {
  }

  const FitResult& last_iterate() const noexcept { return last_; }

private:
  FitResult last_;
};

struct FitOptions
{
  int max_iterations = 200;
  double relative_sse_tolerance = 1e-10;
};

namespace detail {

struct Eval
{
  double sse = 0.0;
  std::array<double, 3> jtj{}; // [00, 01, 11]
  std::array<double, 2> jtr{};
};

inline Eval evaluate(FitModel m, double a, double s, std::span<const CcdfPoint> pts, bool with_jacobian)
{
  Eval e;
  for (const auto& pt : pts)
  {
    double basis;  // d f / d a
    double dshape; // d f / d shape
    if (m == FitModel::power_law)
    {
      basis = std::pow(pt.k, -s);
      dshape = -a * basis * std::log(pt.k);
    }
    else
    {
      basis = std::exp(-pt.k / s);
      dshape = a * basis * pt.k / (s * s);
    }
    const double r = a * basis - pt.p;
    e.sse += r * r;
    if (with_jacobian)
    {
      e.jtj[0] += basis * basis;
      e.jtj[1] += basis * dshape;
      e.jtj[2] += dshape * dshape;
      e.jtr[0] += basis * r;
      e.jtr[1] += dshape * r;
    }
  }
  return e;
}

/// Least squares line y = intercept + slope * x.
inline std::pair<double, double> linear_regression(std::span<const double> x, std::span<const double> y)
{
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  return {my - slope * mx, slope};
}

} // namespace detail

/// Fits a k^-gamma or a exp(-k/kappa) to the points by least squares in
/// linear space (Levenberg-Marquardt), starting from a straight-line fit of
/// log p. Points are unweighted, one per distinct degree.
inline FitResult fit_model(std::span<const CcdfPoint> points, FitModel model, FitOptions opt = {})
{
  if (points.size() < 3)
    throw DomainError("fit_model: insufficient points (need at least 3, got " +
                      std::to_string(points.size()) + ")");
  for (const auto& pt : points)
    if (!(pt.k > 0) || !(pt.p > 0))
      throw DomainError("fit_model: points need k > 0 and p > 0");

  // Sorting keeps the floating-point summation order independent of input order.
  std::vector<CcdfPoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const CcdfPoint& l, const CcdfPoint& r) {
    return l.k < r.k || (l.k == r.k && l.p < r.p);
  });

  std::vector<double> x, y;
  for (const auto& pt : pts)
  {
    x.push_back(model == FitModel::power_law ? std::log(pt.k) : pt.k);
    y.push_back(std::log(pt.p));
  }
  const auto [intercept, slope] = detail::linear_regression(x, y);
  double a = std::exp(intercept);
  double s;
  if (slope < 0)
    s = model == FitModel::power_law ? -slope : -1.0 / slope;
  else
    s = model == FitModel::power_law ? 1.0 : pts.back().k;

  double mean_p = 0;
  for (const auto& pt : pts)
    mean_p += pt.p;
  mean_p /= static_cast<double>(pts.size());
  double sst = 0;
  for (const auto& pt : pts)
    sst += (pt.p - mean_p) * (pt.p - mean_p);

  auto make_result = [&](double sse, int iters) {
    FitResult r;
    r.model = model;
    r.prefactor = a;
    r.shape = s;
    r.sse = sse;
    r.r_squared = sst > 0 ? 1.0 - sse / sst : (sse == 0 ? 1.0 : 0.0);
    r.iterations = iters;
    return r;
  };

  auto cur = detail::evaluate(model, a, s, pts, true);
  double lambda = 1e-3;
  bool converged = cur.sse == 0.0;
  int iter = 0;
  while (!converged && iter < opt.max_iterations)
  {
    ++iter;
    const double d0 = cur.jtj[0] > 0 ? cur.jtj[0] : 1e-300;
    const double d1 = cur.jtj[2] > 0 ? cur.jtj[2] : 1e-300;
    const double m00 = cur.jtj[0] + lambda * d0;
    const double m01 = cur.jtj[1];
    const double m11 = cur.jtj[2] + lambda * d1;
    const double det = m00 * m11 - m01 * m01;
    bool accepted = false;
    if (det > 0 && std::isfinite(det))
    {
      const double da = -(m11 * cur.jtr[0] - m01 * cur.jtr[1]) / det;
      const double ds = -(m00 * cur.jtr[1] - m01 * cur.jtr[0]) / det;
      const double a_new = a + da;
      const double s_new = s + ds;
      if (s_new > 0 && std::isfinite(a_new) && std::isfinite(s_new))
      {
        const auto trial = detail::evaluate(model, a_new, s_new, pts, false);
        if (std::isfinite(trial.sse) && trial.sse < cur.sse)
        {
          const double rel = (cur.sse - trial.sse) / cur.sse;
          a = a_new;
          s = s_new;
          cur = detail::evaluate(model, a, s, pts, true);
          lambda = std::max(lambda / 10.0, 1e-15);
          accepted = true;
          if (rel < opt.relative_sse_tolerance || cur.sse == 0.0)
            converged = true;
        }
      }
    }
    if (!accepted)
    {
      lambda *= 10.0;
      // No descent direction left at any damping: a stationary point.
      if (lambda > 1e16)
        converged = true;
    }
  }

  auto result = make_result(cur.sse, iter);
  if (!converged)
    throw FitError("fit_model: no convergence after " + std::to_string(iter) + " iterations", result);
  if (!(s > 0))
    throw FitError("fit_model: non-positive shape parameter", result);
  return result;
}

inline FitResult fit_model(const Ccdf& c, FitModel model, FitOptions opt = {})
{
  return fit_model(std::span<const CcdfPoint>(c.points), model, opt);
}

struct TailResidual
{
  double k = 0.0;
  double observed = 0.0;
  double power_law_residual = 0.0;  // predicted - observed
  double exponential_residual = 0.0;
};

struct FitComparison
{
  FitResult power_law;
  FitResult exponential;
  std::optional<FitModel> preferred; // nullopt on an exact SSE tie
  std::vector<TailResidual> tail;    // highest three degrees, descending k

  bool is_tie() const noexcept { return !preferred.has_value(); }
};

/// Lower SSE wins; nullopt when the two are exactly equal.
inline std::optional<FitModel> prefer_lower_sse(const FitResult& power_law, const FitResult& exponential)
{
  if (power_law.sse < exponential.sse)
    return FitModel::power_law;
  if (exponential.sse < power_law.sse)
    return FitModel::exponential;
  return std::nullopt;
}

inline FitComparison compare_fits(const Ccdf& c)
{
  FitComparison cmp;
  cmp.power_law = fit_model(c, FitModel::power_law);
  cmp.exponential = fit_model(c, FitModel::exponential);
  cmp.preferred = prefer_lower_sse(cmp.power_law, cmp.exponential);

  std::vector<CcdfPoint> pts = c.points;
  std::sort(pts.begin(), pts.end(), [](const CcdfPoint& l, const CcdfPoint& r) { return l.k > r.k; });
  for (std::size_t i = 0; i < std::min<std::size_t>(3, pts.size()); ++i)
  {
    TailResidual t;
    t.k = pts[i].k;
    t.observed = pts[i].p;
    t.power_law_residual = cmp.power_law.predict(t.k) - t.observed;
    t.exponential_residual = cmp.exponential.predict(t.k) - t.observed;
    cmp.tail.push_back(t);
  }
  return cmp;
}

} // namespace gridnet
