#include "idt/curves.hpp"

#include <cmath>
#include <stdexcept>

namespace idt {

namespace {

void require_dim(int d, const char* who) {
  if (d < 2) throw std::invalid_argument(std::string(who) + ": need at least two outcomes");
}

void require_range(double x, double lo, double hi, const char* who) {
  if (!(x >= lo && x <= hi))
    throw std::invalid_argument(std::string(who) + ": argument outside its domain");
}

}  // namespace

const char* curve_pair_name(CurvePair pair) {
  switch (pair) {
    case CurvePair::kTvFidelity: return "tv-fidelity";
    case CurvePair::kTvAvgFidelity: return "tv-avg-fidelity";
    case CurvePair::kTvTrace: return "tv-trace";
    case CurvePair::kTvDiamond: return "tv-diamond";
  }
  return "";
}

bool parse_curve_pair(const std::string& name, CurvePair& out) {
  for (CurvePair pair : {CurvePair::kTvFidelity, CurvePair::kTvAvgFidelity, CurvePair::kTvTrace,
                         CurvePair::kTvDiamond}) {
    if (name == curve_pair_name(pair)) {
      out = pair;
      return true;
    }
  }
  return false;
}

double curve_tv_fidelity(int d, double f) {
  require_dim(d, "curve_tv_fidelity");
  require_range(f, 0.0, 1.0, "curve_tv_fidelity");
  if (f <= 1.0 / d) return 0.0;
  const double t = std::sqrt(f * (d - 1)) - std::sqrt(1.0 - f);
  return t * t / d;
}

double curve_tv_avg_fidelity(int d, double fbar) {
  require_dim(d, "curve_tv_avg_fidelity");
  require_range(fbar, 0.0, 1.0, "curve_tv_avg_fidelity");
  if (fbar <= 2.0 / (d + 1)) return 0.0;
  const double t = std::sqrt((fbar - 1.0 / (d + 1)) * (d * d - 1.0) / d) -
                   std::sqrt((1.0 - fbar) * (d + 1.0) / d);
  return t * t / d;
}

double curve_tv_trace(int d, double delta_tv) {
  require_dim(d, "curve_tv_trace");
  require_range(delta_tv, 0.0, 1.0, "curve_tv_trace");
  return curve_tv_fidelity(d, 1.0 - delta_tv);
}

double curve_tv_diamond(int m, double delta_diamond) {
  require_dim(m, "curve_tv_diamond");
  require_range(delta_diamond, 0.0, 2.0, "curve_tv_diamond");
  if (delta_diamond >= 2.0 - 2.0 / m) return 0.0;
  const double a = (2.0 - delta_diamond) * (m - 1);
  const double b = delta_diamond;
  // Expanded square of the root difference: squaring sqrt(a) directly can
  // miss the endpoint value (m-1)/m at b = 0 by an ulp.
  return (a + b - 2.0 * std::sqrt(a * b)) / (2.0 * m);
}

double min_diamond_for_tv(int m, double lambda) {
  require_dim(m, "min_diamond_for_tv");
  require_range(lambda, 0.0, 1.0, "min_diamond_for_tv");
  if (lambda >= 1.0 - 1.0 / m) return 0.0;
  const double a = (m - 1) * (1.0 - lambda);
  const double b = lambda;
  return 2.0 * (a + b - 2.0 * std::sqrt(a * b)) / m;
}

double curve_value(CurvePair pair, int param, double x) {
  switch (pair) {
    case CurvePair::kTvFidelity: return curve_tv_fidelity(param, x);
    case CurvePair::kTvAvgFidelity: return curve_tv_avg_fidelity(param, x);
    case CurvePair::kTvTrace: return curve_tv_trace(param, x);
    case CurvePair::kTvDiamond: return curve_tv_diamond(param, x);
  }
  throw std::invalid_argument("curve_value: unknown curve pair");
}

void default_grid(CurvePair pair, int param, double& start, double& stop) {
  switch (pair) {
    case CurvePair::kTvFidelity:
      start = 1.0 / param;
      stop = 1.0;
      return;
    case CurvePair::kTvAvgFidelity:
      start = 2.0 / (param + 1);
      stop = 1.0;
      return;
    case CurvePair::kTvTrace:
      start = 0.0;
      stop = 1.0 - 1.0 / param;
      return;
    case CurvePair::kTvDiamond:
      start = 0.0;
      stop = 2.0 - 2.0 / param;
      return;
  }
  throw std::invalid_argument("default_grid: unknown curve pair");
}

std::vector<TradeoffPoint> sweep_curve(CurvePair pair, int param, double start, double stop,
                                       int points) {
  if (points < 1) throw std::invalid_argument("sweep_curve: need at least one grid point");
  if (!(start <= stop)) throw std::invalid_argument("sweep_curve: grid must be monotone");

  const double step = points > 1 ? (stop - start) / (points - 1) : 0.0;
  std::vector<TradeoffPoint> out;
  out.reserve(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i) {
    TradeoffPoint p;
    p.Delta = (points > 1 && i == points - 1) ? stop : start + i * step;
    p.delta = curve_value(pair, param, p.Delta);
    p.m = param;
    p.measure_pair = curve_pair_name(pair);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace idt
