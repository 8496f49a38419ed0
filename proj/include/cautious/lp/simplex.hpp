#pragma once

// Dense two-phase primal simplex with bounded variables.
//
// Columns are laid out as [structural | slack | artificial]. Every row gets
// either a feasible slack or an artificial as its initial basic column, so
// the initial basis matrix is diagonal with +-1 entries. Nonbasic columns sit
// at a finite bound, or at zero when free. Dantzig pricing is used until a
// run of degenerate pivots is detected, after which Bland's rule takes over
// until the objective moves again.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cautious/errors.hpp"
#include "cautious/lp/problem.hpp"

namespace cautious::lp {

using Rational = boost::multiprecision::cpp_rational;

template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double tolerance() { return 1e-9; }
  static double from_double(double v) { return v; }
  static double to_double(double v) { return v; }
  static double abs(double v) { return std::fabs(v); }
};

template <>
struct ScalarTraits<Rational> {
  static Rational tolerance() { return Rational(0); }
  static Rational from_double(double v) { return Rational(v); }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
};

template <class Scalar>
class BoundedSimplex {
  using Traits = ScalarTraits<Scalar>;

  enum class At : unsigned char { Basic, Lower, Upper, Zero };

 public:
  explicit BoundedSimplex(const Problem& p, std::size_t max_iterations = 0)
      : problem_(p), tol_(Traits::tolerance()) {
    build();
    max_iterations_ = max_iterations ? max_iterations : 200 * (m_ + ncol_) + 1000;
  }

  Outcome solve() {
    Outcome out;
    if (n_art_ > 0) {
      std::vector<Scalar> phase1(ncol_, Scalar(0));
      for (std::size_t j = first_art_; j < ncol_; ++j) phase1[j] = Scalar(1);
      if (run(phase1) != Status::Optimal) throw EngineError("phase 1 reported an unbounded auxiliary problem");
      Scalar infeasibility(0);
      for (std::size_t j = first_art_; j < ncol_; ++j) infeasibility += x_[j];
      if (infeasibility > feasibility_tolerance()) {
        out.status = Status::Infeasible;
        out.iterations = iterations_;
        return out;
      }
      retire_artificials();
    }
    std::vector<Scalar> cost(ncol_, Scalar(0));
    const Scalar sign = problem_.sense() == Sense::Maximize ? Scalar(-1) : Scalar(1);
    for (const auto& t : problem_.objective()) cost[t.var] += sign * Traits::from_double(t.coef);
    if (run(cost) == Status::Unbounded) {
      out.status = Status::Unbounded;
      out.iterations = iterations_;
      return out;
    }
    Scalar obj(0);
    for (const auto& t : problem_.objective()) obj += Traits::from_double(t.coef) * x_[t.var];
    out.status = Status::Optimal;
    out.objective = Traits::to_double(obj);
    out.values.reserve(nv_);
    for (std::size_t j = 0; j < nv_; ++j) out.values.push_back(Traits::to_double(x_[j]));
    out.iterations = iterations_;
    return out;
  }

 private:
  Scalar feasibility_tolerance() const {
    if constexpr (std::is_same_v<Scalar, double>) {
      return 1e-9;
    } else {
      return Scalar(0);
    }
  }

  Scalar& at(std::size_t i, std::size_t j) { return tab_[i * ncol_ + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return tab_[i * ncol_ + j]; }

  void build() {
    const auto& vars = problem_.variables();
    const auto& rows = problem_.constraints();
    nv_ = vars.size();
    m_ = rows.size();

    std::vector<std::size_t> slack_of(m_, npos);
    std::size_t ns = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (rows[i].relation != Relation::Equal) slack_of[i] = nv_ + ns++;
    }
    first_art_ = nv_ + ns;

    // Initial nonbasic values and the row residuals they leave.
    std::vector<Scalar> x0(nv_ + ns, Scalar(0));
    std::vector<At> st0(nv_ + ns, At::Lower);
    lo_.assign(nv_ + ns, Scalar(0));
    hi_.assign(nv_ + ns, Scalar(0));
    has_lo_.assign(nv_ + ns, 1);
    has_hi_.assign(nv_ + ns, 0);
    for (std::size_t j = 0; j < nv_; ++j) {
      has_lo_[j] = !std::isinf(vars[j].lower);
      has_hi_[j] = !std::isinf(vars[j].upper);
      if (has_lo_[j]) lo_[j] = Traits::from_double(vars[j].lower);
      if (has_hi_[j]) hi_[j] = Traits::from_double(vars[j].upper);
      if (has_lo_[j]) {
        x0[j] = lo_[j];
        st0[j] = At::Lower;
      } else if (has_hi_[j]) {
        x0[j] = hi_[j];
        st0[j] = At::Upper;
      } else {
        st0[j] = At::Zero;
      }
    }

    std::vector<Scalar> residual(m_);
    std::vector<Scalar> dense(m_ * (nv_ + ns), Scalar(0));
    for (std::size_t i = 0; i < m_; ++i) {
      Scalar r = Traits::from_double(rows[i].rhs);
      for (const auto& t : rows[i].terms) {
        Scalar c = Traits::from_double(t.coef);
        dense[i * (nv_ + ns) + t.var] += c;
        r -= c * x0[t.var];
      }
      if (slack_of[i] != npos) {
        dense[i * (nv_ + ns) + slack_of[i]] = rows[i].relation == Relation::GreaterEqual ? Scalar(-1) : Scalar(1);
      }
      residual[i] = r;
    }

    // Pick a basic column per row; rows whose slack cannot absorb the
    // residual get an artificial.
    basis_.assign(m_, npos);
    std::vector<Scalar> basic_coef(m_, Scalar(1));
    std::vector<Scalar> basic_value(m_, Scalar(0));
    std::vector<Scalar> art_sign;
    std::vector<std::size_t> art_row;
    for (std::size_t i = 0; i < m_; ++i) {
      const Scalar& r = residual[i];
      if (slack_of[i] != npos) {
        const bool ge = rows[i].relation == Relation::GreaterEqual;
        if ((ge && r <= Scalar(0)) || (!ge && r >= Scalar(0))) {
          basis_[i] = slack_of[i];
          basic_coef[i] = ge ? Scalar(-1) : Scalar(1);
          basic_value[i] = ge ? Scalar(-r) : r;
          continue;
        }
      }
      art_row.push_back(i);
      art_sign.push_back(r >= Scalar(0) ? Scalar(1) : Scalar(-1));
      basis_[i] = first_art_ + art_row.size() - 1;
      basic_coef[i] = art_sign.back();
      basic_value[i] = r >= Scalar(0) ? r : Scalar(-r);
    }
    n_art_ = art_row.size();
    ncol_ = first_art_ + n_art_;

    tab_.assign(m_ * ncol_, Scalar(0));
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < nv_ + ns; ++j) at(i, j) = dense[i * (nv_ + ns) + j] / basic_coef[i];
    }
    for (std::size_t k = 0; k < n_art_; ++k) {
      at(art_row[k], first_art_ + k) = art_sign[k] / basic_coef[art_row[k]];
    }

    x_ = x0;
    x_.resize(ncol_, Scalar(0));
    status_ = st0;
    status_.resize(ncol_, At::Lower);
    lo_.resize(ncol_, Scalar(0));
    hi_.resize(ncol_, Scalar(0));
    has_lo_.resize(ncol_, 1);
    has_hi_.resize(ncol_, 0);
    locked_.assign(ncol_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      status_[basis_[i]] = At::Basic;
      x_[basis_[i]] = basic_value[i];
    }
  }

  void compute_reduced_costs(const std::vector<Scalar>& cost) {
    d_ = cost;
    for (std::size_t i = 0; i < m_; ++i) {
      const Scalar& cb = cost[basis_[i]];
      if (cb == Scalar(0)) continue;
      for (std::size_t j = 0; j < ncol_; ++j) {
        if (at(i, j) != Scalar(0)) d_[j] -= cb * at(i, j);
      }
    }
  }

  // Chooses an improving nonbasic column; returns npos at optimality.
  std::size_t price(int& dir) const {
    std::size_t best = npos;
    Scalar best_mag(0);
    for (std::size_t j = 0; j < ncol_; ++j) {
      if (status_[j] == At::Basic || locked_[j]) continue;
      const Scalar& dj = d_[j];
      int candidate_dir = 0;
      if (dj < -tol_ && status_[j] != At::Upper) {
        if (!(has_hi_[j] && status_[j] == At::Lower && hi_[j] == lo_[j])) candidate_dir = +1;
      } else if (dj > tol_ && status_[j] != At::Lower) {
        candidate_dir = -1;
      }
      if (candidate_dir == 0) continue;
      if (bland_) {
        dir = candidate_dir;
        return j;
      }
      Scalar mag = Traits::abs(dj);
      if (best == npos || mag > best_mag) {
        best = j;
        best_mag = mag;
        dir = candidate_dir;
      }
    }
    return best;
  }

  Status run(const std::vector<Scalar>& cost) {
    compute_reduced_costs(cost);
    bland_ = false;
    std::size_t degenerate_run = 0;
    for (;;) {
      if (++iterations_ > max_iterations_) throw EngineError("simplex iteration limit exceeded");
      int dir = 0;
      const std::size_t q = price(dir);
      if (q == npos) return Status::Optimal;

      // Ratio test along the direction of column q.
      std::size_t leave = npos;
      Scalar step(0);
      bool bounded = false;
      Scalar leave_pivot(0);
      for (std::size_t i = 0; i < m_; ++i) {
        const Scalar& a = at(i, q);
        if (Traits::abs(a) <= tol_) continue;
        const Scalar delta = dir > 0 ? Scalar(-a) : a;  // change of basic i per unit step
        const std::size_t b = basis_[i];
        Scalar ratio;
        if (delta < Scalar(0)) {
          if (!has_lo_[b]) continue;
          ratio = (x_[b] - lo_[b]) / -delta;
        } else {
          if (!has_hi_[b]) continue;
          ratio = (hi_[b] - x_[b]) / delta;
        }
        if (ratio < Scalar(0)) ratio = Scalar(0);
        const Scalar mag = Traits::abs(a);
        bool take = !bounded || ratio < step;
        if (!take && ratio == step) {
          take = bland_ ? b < basis_[leave] : mag > leave_pivot;
        } else if (!take && !bland_ && ratio <= step + tol_ && mag > leave_pivot * 10) {
          take = true;
        }
        if (take) {
          bounded = true;
          step = ratio;
          leave = i;
          leave_pivot = mag;
        }
      }
      const bool flip_possible = has_lo_[q] && has_hi_[q];
      const Scalar flip = flip_possible ? Scalar(hi_[q] - lo_[q]) : Scalar(0);
      if (!bounded && !flip_possible) return Status::Unbounded;

      if (flip_possible && (!bounded || flip <= step)) {
        move(q, dir, flip);
        status_[q] = dir > 0 ? At::Upper : At::Lower;
        x_[q] = dir > 0 ? hi_[q] : lo_[q];
        degenerate_run = 0;
        bland_ = false;
        continue;
      }

      const std::size_t out = basis_[leave];
      const Scalar a = at(leave, q);
      const Scalar delta = dir > 0 ? Scalar(-a) : a;
      move(q, dir, step);
      if (delta < Scalar(0)) {
        x_[out] = lo_[out];
        status_[out] = At::Lower;
      } else {
        x_[out] = hi_[out];
        status_[out] = At::Upper;
      }
      pivot(leave, q);

      if (step <= tol_) {
        if (++degenerate_run > 30) bland_ = true;
      } else {
        degenerate_run = 0;
        bland_ = false;
      }
    }
  }

  void move(std::size_t q, int dir, const Scalar& step) {
    if (step == Scalar(0)) return;
    const Scalar signed_step = dir > 0 ? step : Scalar(-step);
    x_[q] += signed_step;
    for (std::size_t i = 0; i < m_; ++i) {
      const Scalar& a = at(i, q);
      if (a != Scalar(0)) x_[basis_[i]] -= a * signed_step;
    }
  }

  void pivot(std::size_t r, std::size_t q) {
    const Scalar p = at(r, q);
    for (std::size_t j = 0; j < ncol_; ++j) {
      if (at(r, j) != Scalar(0)) at(r, j) /= p;
    }
    at(r, q) = Scalar(1);
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const Scalar f = at(i, q);
      if (f == Scalar(0)) continue;
      for (std::size_t j = 0; j < ncol_; ++j) {
        const Scalar& v = at(r, j);
        if (v == Scalar(0)) continue;
        at(i, j) -= f * v;
        if constexpr (std::is_same_v<Scalar, double>) {
          if (std::fabs(at(i, j)) < 1e-13) at(i, j) = 0.0;
        }
      }
      at(i, q) = Scalar(0);
    }
    const Scalar dq = d_[q];
    if (dq != Scalar(0)) {
      for (std::size_t j = 0; j < ncol_; ++j) {
        if (at(r, j) != Scalar(0)) d_[j] -= dq * at(r, j);
      }
      d_[q] = Scalar(0);
    }
    status_[basis_[r]] = status_[basis_[r]] == At::Basic ? At::Lower : status_[basis_[r]];
    basis_[r] = q;
    status_[q] = At::Basic;
  }

  // Pivots basic artificials out where possible, then pins all artificials at zero.
  void retire_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < first_art_) continue;
      std::size_t q = npos;
      Scalar best(0);
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (status_[j] == At::Basic) continue;
        Scalar mag = Traits::abs(at(r, j));
        if (mag > tol_ && mag > best) {
          best = mag;
          q = j;
        }
      }
      if (q == npos) continue;
      const std::size_t out = basis_[r];
      const Scalar shift = x_[out] / at(r, q);
      x_[q] += shift;
      for (std::size_t i = 0; i < m_; ++i) {
        if (i != r && at(i, q) != Scalar(0)) x_[basis_[i]] -= at(i, q) * shift;
      }
      x_[out] = Scalar(0);
      d_.assign(ncol_, Scalar(0));
      pivot(r, q);
      status_[out] = At::Lower;
    }
    for (std::size_t j = first_art_; j < ncol_; ++j) {
      has_lo_[j] = has_hi_[j] = 1;
      lo_[j] = hi_[j] = Scalar(0);
      if (status_[j] != At::Basic) {
        locked_[j] = 1;
        x_[j] = Scalar(0);
        status_[j] = At::Lower;
      }
    }
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  const Problem& problem_;
  Scalar tol_;
  std::size_t nv_ = 0, m_ = 0, ncol_ = 0, first_art_ = 0, n_art_ = 0;
  std::vector<Scalar> tab_;
  std::vector<Scalar> lo_, hi_, x_, d_;
  std::vector<char> has_lo_, has_hi_, locked_;
  std::vector<At> status_;
  std::vector<std::size_t> basis_;
  std::size_t iterations_ = 0, max_iterations_ = 0;
  bool bland_ = false;
};

}  // namespace cautious::lp
