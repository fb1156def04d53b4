#include "qfluct/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "qfluct/error.hpp"

namespace qfluct::quad {
namespace {

// Kronrod abscissae, descending; odd indices are the Gauss-7 nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a, b, value, error;
};

bool smaller_error(const Panel& x, const Panel& y) { return x.error < y.error; }

}  // namespace

Result gauss_kronrod15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::fabs(half);

  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::fabs(resk);

  std::array<double, 7> fv1{}, fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }

  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));

  Result r;
  r.value = resk * half;
  resabs *= abs_half;
  resasc *= abs_half;
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
    err = std::max(50.0 * kEps * resabs, err);
  r.abs_error = err;
  r.intervals = 1;
  r.evaluations = 15;
  r.converged = true;
  return r;
}

Result integrate(const Integrand& f, double a, double b, const Options& opts) {
  if (a > b) {
    Result r = integrate(f, b, a, opts);
    r.value = -r.value;
    return r;
  }
  const std::array<double, 2> ends = {a, b};
  return integrate(f, ends, opts);
}

Result integrate(const Integrand& f, std::span<const double> breakpoints, const Options& opts) {
  Result out;
  if (breakpoints.size() < 2) throw PreconditionError("integration needs at least two breakpoints");
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
    throw PreconditionError("integration breakpoints must be sorted ascending");

  std::vector<Panel> heap;
  heap.reserve(std::max<std::size_t>(opts.max_intervals, breakpoints.size()) + 1);
  double total = 0.0;
  double total_err = 0.0;
  std::size_t evaluations = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i], b = breakpoints[i + 1];
    if (a == b) continue;
    const Result r = gauss_kronrod15(f, a, b);
    heap.push_back({a, b, r.value, r.abs_error});
    total += r.value;
    total_err += r.abs_error;
    evaluations += r.evaluations;
  }
  if (heap.empty()) {
    out.converged = true;
    return out;
  }
  std::make_heap(heap.begin(), heap.end(), smaller_error);

  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::fabs(total)); };

  while (total_err > target() && heap.size() < opts.max_intervals) {
    const Panel worst = heap.front();
    // Stop once the worst panel is down to a few ulps: its nodes would
    // collapse onto the endpoints.
    const double scale = std::max(std::fabs(worst.a), std::fabs(worst.b));
    if (worst.b - worst.a <= 1e3 * kEps * scale) break;
    std::pop_heap(heap.begin(), heap.end(), smaller_error);
    heap.pop_back();

    const double mid = 0.5 * (worst.a + worst.b);
    const Result left = gauss_kronrod15(f, worst.a, mid);
    const Result right = gauss_kronrod15(f, mid, worst.b);
    evaluations += 30;

    total += left.value + right.value - worst.value;
    total_err += left.abs_error + right.abs_error - worst.error;

    heap.push_back({worst.a, mid, left.value, left.abs_error});
    std::push_heap(heap.begin(), heap.end(), smaller_error);
    heap.push_back({mid, worst.b, right.value, right.abs_error});
    std::push_heap(heap.begin(), heap.end(), smaller_error);
  }

  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  total_err = 0.0;
  for (const Panel& p : heap) {
    total += p.value;
    total_err += p.error;
  }
  out.value = total;
  out.abs_error = total_err;
  out.intervals = heap.size();
  out.evaluations = evaluations;
  out.converged = total_err <= target();
  return out;
}

}  // namespace qfluct::quad
