#pragma once

#include <string>
#include <vector>

namespace idt {

// Point on an optimal information-disturbance tradeoff curve. Delta is the
// disturbance-axis value (a channel measure, or a fidelity for the two
// fidelity pairs), delta the minimal worst-case total variational deviation
// of the measurement statistics, m the outcome count (the dimension d for
// the non-diamond pairs). Both values are nonnegative up to roundoff and
// delta never exceeds 1 - 1/d for variational errors.
struct TradeoffPoint {
  double Delta = 0.0;
  double delta = 0.0;
  int m = 0;
  std::string measure_pair;
};

enum class CurvePair { kTvFidelity, kTvAvgFidelity, kTvTrace, kTvDiamond };

// Canonical names as used by the command line: "tv-fidelity",
// "tv-avg-fidelity", "tv-trace", "tv-diamond". parse_curve_pair returns
// false for unknown names.
const char* curve_pair_name(CurvePair pair);
bool parse_curve_pair(const std::string& name, CurvePair& out);

// Minimal measurement deviation of a d-outcome instrument whose channel
// marginal keeps worst-case fidelity f:
//   delta = (1/d) |sqrt(f (d-1)) - sqrt(1 - f)|^2   for f >= 1/d,
// and 0 below the branch point. Throws on d < 2 or f outside [0, 1].
double curve_tv_fidelity(int d, double f);

// Same with the average fidelity fbar:
//   delta = (1/d) |sqrt((fbar - 1/(d+1)) (d^2-1)/d)
//                  - sqrt((1 - fbar) (d+1)/d)|^2    for fbar >= 2/(d+1),
// and 0 below the branch point. Throws on d < 2 or fbar outside [0, 1].
double curve_tv_avg_fidelity(int d, double fbar);

// Same with the trace-norm disturbance; the curve is the fidelity curve
// after substituting Delta = 1 - f, and that is exactly how it is computed.
// Throws on d < 2 or Delta outside [0, 1].
double curve_tv_trace(int d, double delta_tv);

// Same with the diamond-norm disturbance for an m-outcome target, any
// dimension:
//   delta = (1/2m) (sqrt((2 - Delta)(m-1)) - sqrt(Delta))^2
// for Delta <= 2 - 2/m and 0 from there on. Computed in the expanded form
// a + b - 2 sqrt(ab) so that the endpoint values (m-1)/m at Delta = 0 and 0
// at the branch point come out exact. Throws on m < 2 or Delta outside
// [0, 2].
double curve_tv_diamond(int m, double delta_diamond);

// Inverse reading of the diamond curve: the minimal diamond disturbance
// compatible with a deviation budget lambda,
//   nu = (2/m) (sqrt((m-1)(1 - lambda)) - sqrt(lambda))^2
// for lambda <= 1 - 1/m and 0 from there on. Satisfies
// curve_tv_diamond(m, min_diamond_for_tv(m, lambda)) = lambda on the active
// branch. Throws on m < 2 or lambda outside [0, 1].
double min_diamond_for_tv(int m, double lambda);

// Curve value with a uniform calling shape; param is m for the diamond
// pair and d otherwise.
double curve_value(CurvePair pair, int param, double x);

// Inclusive default sweep ranges: the active branch of each curve.
void default_grid(CurvePair pair, int param, double& start, double& stop);

// Evaluates one curve on the inclusive uniform grid. points >= 1 and
// start <= stop required; a single-point grid holds only start. The last
// grid value is stop itself, not an accumulated step.
std::vector<TradeoffPoint> sweep_curve(CurvePair pair, int param, double start, double stop,
                                       int points);

}  // namespace idt
