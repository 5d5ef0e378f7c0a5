#pragma once

#include <span>
#include <vector>

namespace gridflex {

/// Convex piecewise-linear function on a closed interval, represented by the
/// left endpoint (anchor), its value there, and per-segment (right endpoint,
/// slope) pairs with non-decreasing slopes. A single-point domain has no
/// segments. Used as the value function of the battery dispatch recursion,
/// where every per-step cost and every partial minimization stays convex
/// piecewise-linear.
class PwlConvex {
public:
    PwlConvex() = default;

    static PwlConvex point(double x, double v);

    /// Builds from sample points (xs ascending, values convex). Adjacent
    /// segments with equal slopes are merged.
    static PwlConvex from_samples(std::span<const double> xs, std::span<const double> vs);

    double lo() const { return lo_; }
    double hi() const { return ends_.empty() ? lo_ : ends_.back(); }
    double value_at_lo() const { return v0_; }
    bool is_point() const { return ends_.empty(); }
    size_t num_segments() const { return ends_.size(); }
    double segment_end(size_t i) const { return ends_[i]; }
    double segment_slope(size_t i) const { return slopes_[i]; }

    bool contains(double x) const { return x >= lo() && x <= hi(); }

    double value(double x) const;

    /// Minimum over the domain; optionally reports the minimizing interval.
    double min_value(double* arg_lo = nullptr, double* arg_hi = nullptr) const;

    /// g(x) = f(-x).
    void reflect_into(PwlConvex& out) const;

    /// Restricts the domain to [lo, hi] (must intersect).
    void clip(double lo, double hi);

    /// (a # b)(x) = min_{u+v=x} a(u) + b(v); exact for convex PWL inputs
    /// (merge of the two slope sequences).
    static void inf_convolution(const PwlConvex& a, const PwlConvex& b, PwlConvex& out);

    /// Asserts structural invariants; test support.
    void check() const;

private:
    double lo_ = 0.0;
    double v0_ = 0.0;
    std::vector<double> ends_;    // segment right endpoints, ascending
    std::vector<double> slopes_;  // one per segment, non-decreasing

    void push_segment(double right, double slope);
};

/// Minimizes f(d) + w(e + d) over d in the common feasible interval.
/// Returns the minimizer closest to `prefer` (the minimizing set of a convex
/// PWL function is an interval whose endpoints are breakpoints).
struct SumMinResult {
    double d;
    double value;
};
SumMinResult minimize_shifted_sum(const PwlConvex& f, const PwlConvex& w, double e,
                                  double prefer);

} // namespace gridflex
