#include "lpp/numerics.hpp"

namespace lpp {

std::optional<LinearFit> fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = std::min(x.size(), y.size());
  if (m < 2) return std::nullopt;
  NeumaierSum sx;
  NeumaierSum sy;
  for (std::size_t i = 0; i < m; ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.value() / static_cast<double>(m);
  const double my = sy.value() / static_cast<double>(m);
  NeumaierSum sxx;
  NeumaierSum sxy;
  for (std::size_t i = 0; i < m; ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
  }
  if (sxx.value() <= 0.0) return std::nullopt;
  LinearFit fit;
  fit.points = m;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  if (m > 2) {
    NeumaierSum rss;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      rss.add(r * r);
    }
    fit.slope_std_err = std::sqrt(rss.value() / static_cast<double>(m - 2) / sxx.value());
  } else {
    fit.slope_std_err = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

}  // namespace lpp
