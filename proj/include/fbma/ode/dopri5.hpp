#ifndef FBMA_ODE_DOPRI5_HPP
#define FBMA_ODE_DOPRI5_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbma {

// Raised when a trajectory leaves its domain of existence (conformal factor
// overflow, guard trip) before the requested endpoint.
struct StripExhaustion : std::runtime_error {
  double reached;
  explicit StripExhaustion(const std::string& what, double reached_)
      : std::runtime_error(what), reached(reached_) {}
};

struct IntegrationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace ode {

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0.0;       // 0 = automatic
  double h_max = 0.0;        // 0 = |t1 - t0|
  long max_steps = 2000000;
  double guard = 0.0;        // stop (truncated) when any |y_i| exceeds this; 0 = off
  int guard_dim = -1;        // if >= 0, additionally stop when |y[guard_dim]| ...
  double guard_dim_value = 0.0;  // ... exceeds this
};

template <int N>
class DenseSolution;

template <int N, class F>
DenseSolution<N> integrate(F&& f, double t0, double t1, std::array<double, N> y,
                           const Options& opt = {});

// Dormand-Prince 5(4) with Hairer's quartic dense output, fixed dimension N.
// Steps are stored so the solution can be evaluated anywhere in the covered
// interval; integration direction may be negative.
template <int N>
class DenseSolution {
 public:
  using State = std::array<double, N>;

  struct Segment {
    double t0, h;
    std::array<State, 5> rcont;
  };

  double t_begin() const { return t0_; }
  double t_end() const { return t_end_; }
  bool truncated() const { return truncated_; }
  int dir() const { return dir_; }

  bool covers(double t) const {
    return dir_ > 0 ? (t >= t0_ - 1e-12 && t <= t_end_ + 1e-12)
                    : (t <= t0_ + 1e-12 && t >= t_end_ - 1e-12);
  }

  State eval(double t) const {
    const Segment& s = locate(t);
    const double th = (t - s.t0) / s.h;
    const double th1 = 1.0 - th;
    State y;
    for (int i = 0; i < N; ++i) {
      y[i] = s.rcont[0][i] +
             th * (s.rcont[1][i] +
                   th1 * (s.rcont[2][i] + th * (s.rcont[3][i] + th1 * s.rcont[4][i])));
    }
    return y;
  }

  double eval_dim(double t, int i) const { return eval(t)[i]; }

  template <int M, class F>
  friend DenseSolution<M> integrate(F&& f, double t0, double t1,
                                    std::array<double, M> y, const Options& opt);

 private:
  const Segment& locate(double t) const {
    if (segs_.empty()) throw IntegrationFailure("empty dense solution");
    if (!covers(t)) throw IntegrationFailure("dense output evaluated outside covered span");
    // binary search on segment start times (monotone in integration direction)
    std::size_t lo = 0, hi = segs_.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi + 1) / 2;
      const bool before = dir_ > 0 ? (segs_[mid].t0 <= t) : (segs_[mid].t0 >= t);
      if (before) lo = mid; else hi = mid - 1;
    }
    return segs_[lo];
  }

  std::vector<Segment> segs_;
  double t0_ = 0, t_end_ = 0;
  int dir_ = 1;
  bool truncated_ = false;
};

// Butcher tableau (Dormand & Prince 1980), dense-output D from Hairer's DOPRI5.
namespace dp5 {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0,
                        d7 = 69997945.0 / 29380423.0;
}  // namespace dp5

template <int N, class F>
DenseSolution<N> integrate(F&& f, double t0, double t1, std::array<double, N> y,
                           const Options& opt) {
  using State = std::array<double, N>;
  DenseSolution<N> sol;
  sol.t0_ = t0;
  sol.t_end_ = t0;
  sol.dir_ = (t1 >= t0) ? 1 : -1;
  if (t1 == t0) return sol;

  const double span = std::abs(t1 - t0);
  const double hmax = opt.h_max > 0 ? opt.h_max : span;

  State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  double t = t0;
  f(t, y, k1);

  auto guard_trip = [&](const State& s) {
    if (opt.guard_dim >= 0 && std::abs(s[opt.guard_dim]) > opt.guard_dim_value)
      return true;
    if (opt.guard <= 0) return false;
    for (double v : s)
      if (!(std::abs(v) <= opt.guard)) return true;
    return false;
  };
  auto is_finite = [](const State& s) {
    for (double v : s)
      if (!std::isfinite(v)) return false;
    return true;
  };

  if (guard_trip(y) || !is_finite(y))
    throw IntegrationFailure("initial state out of range");

  // initial step heuristic
  double h = opt.h_init;
  if (h == 0.0) {
    double d0 = 0, d1 = 0;
    for (int i = 0; i < N; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(k1[i]) / sc);
    }
    h = (d1 > 1e-10) ? 0.01 * d0 / d1 : 1e-6;
    h = std::min(std::max(h, 1e-10), hmax);
  }
  h = std::min(h, hmax) * sol.dir_;

  for (long step = 0; step < opt.max_steps; ++step) {
    if (sol.dir_ * (t - t1) >= 0) break;
    if (sol.dir_ * (t + h - t1) > 0) h = t1 - t;

    for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * dp5::a21 * k1[i];
    f(t + dp5::c2 * h, ytmp, k2);
    for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * (dp5::a31 * k1[i] + dp5::a32 * k2[i]);
    f(t + dp5::c3 * h, ytmp, k3);
    for (int i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (dp5::a41 * k1[i] + dp5::a42 * k2[i] + dp5::a43 * k3[i]);
    f(t + dp5::c4 * h, ytmp, k4);
    for (int i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (dp5::a51 * k1[i] + dp5::a52 * k2[i] + dp5::a53 * k3[i] +
                            dp5::a54 * k4[i]);
    f(t + dp5::c5 * h, ytmp, k5);
    for (int i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (dp5::a61 * k1[i] + dp5::a62 * k2[i] + dp5::a63 * k3[i] +
                            dp5::a64 * k4[i] + dp5::a65 * k5[i]);
    f(t + h, ytmp, k6);
    for (int i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (dp5::b1 * k1[i] + dp5::b3 * k3[i] + dp5::b4 * k4[i] +
                            dp5::b5 * k5[i] + dp5::b6 * k6[i]);
    f(t + h, ynew, k7);

    double err = 0;
    bool ok_state = is_finite(ynew);
    if (ok_state) {
      for (int i = 0; i < N; ++i) {
        const double ei = h * (dp5::e1 * k1[i] + dp5::e3 * k3[i] + dp5::e4 * k4[i] +
                               dp5::e5 * k5[i] + dp5::e6 * k6[i] + dp5::e7 * k7[i]);
        const double sc =
            opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        err += (ei / sc) * (ei / sc);
      }
      err = std::sqrt(err / N);
    } else {
      err = 1e10;
    }

    if (err <= 1.0 && ok_state) {
      typename DenseSolution<N>::Segment seg;
      seg.t0 = t;
      seg.h = h;
      for (int i = 0; i < N; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        seg.rcont[0][i] = y[i];
        seg.rcont[1][i] = ydiff;
        seg.rcont[2][i] = bspl;
        seg.rcont[3][i] = ydiff - h * k7[i] - bspl;
        seg.rcont[4][i] = h * (dp5::d1 * k1[i] + dp5::d3 * k3[i] + dp5::d4 * k4[i] +
                               dp5::d5 * k5[i] + dp5::d6 * k6[i] + dp5::d7 * k7[i]);
      }
      sol.segs_.push_back(seg);
      t += h;
      y = ynew;
      k1 = k7;
      sol.t_end_ = t;
      if (guard_trip(y)) {
        sol.truncated_ = true;
        return sol;
      }
    }

    const double fac =
        std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-16), -0.2)));
    h *= fac;
    if (std::abs(h) > hmax) h = hmax * sol.dir_;
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t))) {
      if (!sol.segs_.empty()) {
        sol.truncated_ = true;
        return sol;
      }
      throw IntegrationFailure("step size underflow at t = " + std::to_string(t));
    }
  }
  if (sol.dir_ * (t - t1) < 0) {
    sol.truncated_ = true;
  }
  return sol;
}

}  // namespace ode
}  // namespace fbma

#endif
