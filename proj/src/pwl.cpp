#include "gridflex/pwl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridflex/errors.hpp"

namespace gridflex {

namespace {
// Slopes closer than this (relative) collapse into one segment.
inline bool slopes_equal(double a, double b) {
    return std::abs(a - b) <= 1e-11 * (1.0 + std::max(std::abs(a), std::abs(b)));
}
} // namespace

PwlConvex PwlConvex::point(double x, double v) {
    PwlConvex p;
    p.lo_ = x;
    p.v0_ = v;
    return p;
}

void PwlConvex::push_segment(double right, double slope) {
    double left = hi();
    if (right <= left) return;  // zero-length
    if (!ends_.empty() && slopes_equal(slopes_.back(), slope)) {
        ends_.back() = right;
        return;
    }
    ends_.push_back(right);
    slopes_.push_back(slope);
}

PwlConvex PwlConvex::from_samples(std::span<const double> xs, std::span<const double> vs) {
    if (xs.empty() || xs.size() != vs.size())
        throw ValidationError("PwlConvex::from_samples: bad sample arrays");
    PwlConvex f;
    f.lo_ = xs[0];
    f.v0_ = vs[0];
    for (size_t i = 1; i < xs.size(); ++i) {
        double dx = xs[i] - xs[i - 1];
        if (dx <= 0.0) continue;
        f.push_segment(xs[i], (vs[i] - vs[i - 1]) / dx);
    }
    return f;
}

double PwlConvex::value(double x) const {
    double v = v0_;
    double left = lo_;
    for (size_t i = 0; i < ends_.size(); ++i) {
        if (x <= ends_[i]) return v + slopes_[i] * (x - left);
        v += slopes_[i] * (ends_[i] - left);
        left = ends_[i];
    }
    return v;  // x at (or numerically past) the right end
}

double PwlConvex::min_value(double* arg_lo, double* arg_hi) const {
    double v = v0_;
    double left = lo_;
    double best = v;
    double blo = lo_, bhi = lo_;
    for (size_t i = 0; i < ends_.size(); ++i) {
        if (slopes_[i] > 0.0) break;
        v += slopes_[i] * (ends_[i] - left);
        left = ends_[i];
        if (slopes_[i] < 0.0) {
            best = v;
            blo = bhi = left;
        } else {
            bhi = left;  // flat stretch extends the minimizing interval
        }
    }
    if (arg_lo) *arg_lo = blo;
    if (arg_hi) *arg_hi = bhi;
    return best;
}

void PwlConvex::reflect_into(PwlConvex& out) const {
    out.ends_.clear();
    out.slopes_.clear();
    out.lo_ = -hi();
    out.v0_ = value(hi());
    if (ends_.empty()) return;
    // slope s on [a,b] becomes -s on [-b,-a]; reversed order keeps slopes
    // non-decreasing
    for (size_t i = ends_.size(); i-- > 0;) {
        double seg_left = i == 0 ? lo_ : ends_[i - 1];
        out.push_segment(-seg_left, -slopes_[i]);
    }
}

void PwlConvex::clip(double lo, double hi) {
    if (lo > this->hi() || hi < lo_) throw ValidationError("PwlConvex::clip: empty intersection");
    lo = std::max(lo, lo_);
    hi = std::min(hi, this->hi());

    double new_v0 = value(lo);
    std::vector<double> ends, slopes;
    ends.reserve(ends_.size());
    slopes.reserve(slopes_.size());
    double left = lo_;
    for (size_t i = 0; i < ends_.size(); ++i) {
        double a = left, b = ends_[i];
        left = b;
        if (std::min(b, hi) <= std::max(a, lo)) continue;
        ends.push_back(std::min(b, hi));
        slopes.push_back(slopes_[i]);
    }
    lo_ = lo;
    v0_ = new_v0;
    ends_ = std::move(ends);
    slopes_ = std::move(slopes);
}

void PwlConvex::inf_convolution(const PwlConvex& a, const PwlConvex& b, PwlConvex& out) {
    out.ends_.clear();
    out.slopes_.clear();
    out.ends_.reserve(a.ends_.size() + b.ends_.size());
    out.slopes_.reserve(a.slopes_.size() + b.slopes_.size());
    out.lo_ = a.lo_ + b.lo_;
    out.v0_ = a.v0_ + b.v0_;

    size_t i = 0, j = 0;
    double right = out.lo_;
    double la = a.lo_, lb = b.lo_;
    while (i < a.ends_.size() || j < b.ends_.size()) {
        bool take_a;
        if (i == a.ends_.size())
            take_a = false;
        else if (j == b.ends_.size())
            take_a = true;
        else
            take_a = a.slopes_[i] <= b.slopes_[j];
        if (take_a) {
            right += a.ends_[i] - la;
            out.push_segment(right, a.slopes_[i]);
            la = a.ends_[i];
            ++i;
        } else {
            right += b.ends_[j] - lb;
            out.push_segment(right, b.slopes_[j]);
            lb = b.ends_[j];
            ++j;
        }
    }
}

void PwlConvex::check() const {
    if (ends_.size() != slopes_.size()) throw ValidationError("PwlConvex: size mismatch");
    double left = lo_;
    for (size_t i = 0; i < ends_.size(); ++i) {
        if (!(ends_[i] > left)) throw ValidationError("PwlConvex: non-increasing endpoints");
        if (i > 0 && slopes_[i] < slopes_[i - 1] - 1e-9)
            throw ValidationError("PwlConvex: slopes not monotone");
        left = ends_[i];
    }
}

SumMinResult minimize_shifted_sum(const PwlConvex& f, const PwlConvex& w, double e,
                                  double prefer) {
    double dlo = std::max(f.lo(), w.lo() - e);
    double dhi = std::min(f.hi(), w.hi() - e);
    if (dlo > dhi) {
        if (dlo - dhi < 1e-9) {  // tolerate rounding at domain corners
            double d = 0.5 * (dlo + dhi);
            return {d, f.value(std::clamp(d, f.lo(), f.hi())) +
                           w.value(std::clamp(e + d, w.lo(), w.hi()))};
        }
        throw ValidationError("minimize_shifted_sum: empty feasible interval");
    }

    auto phi = [&](double d) { return f.value(d) + w.value(e + d); };

    // phi is convex PWL; its minimum over [dlo, dhi] is attained at a
    // breakpoint of f, a shifted breakpoint of w, or an interval endpoint.
    std::vector<double> cands;
    cands.reserve(f.num_segments() + w.num_segments() + 2);
    cands.push_back(dlo);
    cands.push_back(dhi);
    for (size_t i = 0; i < f.num_segments(); ++i) {
        double x = f.segment_end(i);
        if (x > dlo && x < dhi) cands.push_back(x);
    }
    for (size_t i = 0; i < w.num_segments(); ++i) {
        double x = w.segment_end(i) - e;
        if (x > dlo && x < dhi) cands.push_back(x);
    }
    std::sort(cands.begin(), cands.end());

    double best = std::numeric_limits<double>::infinity();
    for (double x : cands) best = std::min(best, phi(x));
    double tol = 1e-12 * (1.0 + std::abs(best));
    double blo = dhi, bhi = dlo;
    for (double x : cands) {
        if (phi(x) <= best + tol) {
            blo = std::min(blo, x);
            bhi = std::max(bhi, x);
        }
    }
    double pick = std::clamp(prefer, blo, bhi);
    return {pick, phi(pick)};
}

} // namespace gridflex
