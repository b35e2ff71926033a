#include "herglotz/fit.hpp"

#include <cmath>
#include <vector>

#include "herglotz/errors.hpp"

namespace herglotz {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "line fit needs at least two (x, y) pairs");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InvalidArgument, "line fit with identical abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

LineFit fit_loglog(std::span<const double> h, std::span<const double> value) {
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < h.size() && k < value.size(); ++k) {
    if (!(h[k] > 0.0) || !(value[k] > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "log-log fit needs positive values");
    }
    lx.push_back(std::log(h[k]));
    ly.push_back(std::log(value[k]));
  }
  return fit_line(lx, ly);
}

}  // namespace herglotz
