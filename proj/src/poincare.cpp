#include "cqed/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "cqed/csv.hpp"

namespace cqed {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr int simpson_panels = 512;

void validate_leg(const PathLeg& leg)
{
    for (const auto& p : {leg.from, leg.to}) {
        if (!(p.theta >= 0.0 && p.theta <= pi) || !std::isfinite(p.phi)) {
            throw RangeError("path point theta=" + std::to_string(p.theta)
                             + " outside [0, pi] or non-finite phi");
        }
    }
    if (!(leg.duration >= 0.0) || !std::isfinite(leg.duration)) {
        throw RangeError("leg duration must be finite and non-negative");
    }
}

void validate(const PathSpec& path)
{
    if (path.legs.empty()) {
        throw RangeError("path has no legs");
    }
    for (const auto& leg : path.legs) {
        validate_leg(leg);
    }
    if (!(path.total_duration() > 0.0)) {
        throw RangeError("path total duration must be positive");
    }
}

// int_0^1 (1 - cos theta(s)) phi'(s) ds for one linear leg, composite Simpson.
double leg_solid_angle(const PathLeg& leg)
{
    const double dphi = leg.to.phi - leg.from.phi;
    if (dphi == 0.0) {
        return 0.0;
    }
    const double dtheta = leg.to.theta - leg.from.theta;
    const auto f = [&](double s) { return 1.0 - std::cos(leg.from.theta + dtheta * s); };
    const double h = 1.0 / simpson_panels;
    double sum = f(0.0) + f(1.0);
    for (int i = 1; i < simpson_panels; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
    }
    return sum * h / 3.0 * dphi;
}

} // namespace

double PathSpec::total_duration() const
{
    double total = 0.0;
    for (const auto& leg : legs) {
        total += leg.duration;
    }
    return total;
}

double lasso_theta0(double gamma_target)
{
    if (!(gamma_target >= 0.0 && gamma_target < 4.0 * pi)) {
        throw RangeError("solid angle " + std::to_string(gamma_target)
                         + " outside [0, 4pi) for a lasso loop");
    }
    return std::acos(std::clamp(1.0 - gamma_target / two_pi, -1.0, 1.0));
}

PathSpec lasso_path(double gamma_target, double total_time, const LegFractions& leg_fractions)
{
    const double theta0 = lasso_theta0(gamma_target);
    if (!(total_time > 0.0)) {
        throw RangeError("lasso total time must be positive");
    }
    double fraction_sum = 0.0;
    for (double f : leg_fractions) {
        if (!(f > 0.0)) {
            throw RangeError("lasso leg fractions must be positive");
        }
        fraction_sum += f;
    }
    PathSpec path;
    path.kind = PathKind::lasso;
    path.theta0 = theta0;
    const SpherePoint pole{0.0, 0.0};
    const SpherePoint rim_start{theta0, 0.0};
    const SpherePoint rim_end{theta0, two_pi};
    const SpherePoint pole_end{0.0, two_pi};
    path.legs = {{pole, rim_start, total_time * leg_fractions[0] / fraction_sum},
                 {rim_start, rim_end, total_time * leg_fractions[1] / fraction_sum},
                 {rim_end, pole_end, total_time * leg_fractions[2] / fraction_sum}};
    validate(path);
    return path;
}

PathSpec piecewise_path(const std::vector<SpherePoint>& knots, const std::vector<double>& durations)
{
    if (knots.size() < 2 || durations.size() + 1 != knots.size()) {
        throw RangeError("piecewise path needs n >= 2 knots and n - 1 leg durations");
    }
    PathSpec path;
    path.kind = PathKind::piecewise;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        path.legs.push_back({knots[i], knots[i + 1], durations[i]});
    }
    validate(path);
    return path;
}

PathSpec reversed(const PathSpec& path)
{
    PathSpec out;
    out.kind = PathKind::piecewise;
    out.theta0 = path.theta0;
    for (auto it = path.legs.rbegin(); it != path.legs.rend(); ++it) {
        out.legs.push_back({it->to, it->from, it->duration});
    }
    return out;
}

PathSpec concatenate(const PathSpec& first, const PathSpec& second)
{
    if (!same_point_on_sphere(first.end(), second.start())) {
        throw ClosureError("cannot concatenate paths: first ends where second does not start");
    }
    PathSpec out;
    out.kind = PathKind::piecewise;
    out.legs = first.legs;
    // Carry phi continuously across the junction.
    const double offset = first.end().phi - second.start().phi;
    for (auto leg : second.legs) {
        leg.from.phi += offset;
        leg.to.phi += offset;
        out.legs.push_back(leg);
    }
    return out;
}

PathSpec with_total_time(const PathSpec& path, double total_time)
{
    if (!(total_time > 0.0)) {
        throw RangeError("total time must be positive");
    }
    const double scale = total_time / path.total_duration();
    PathSpec out = path;
    for (auto& leg : out.legs) {
        leg.duration *= scale;
    }
    return out;
}

bool same_point_on_sphere(const SpherePoint& a, const SpherePoint& b, double tol)
{
    if (std::abs(a.theta - b.theta) > tol) {
        return false;
    }
    if (a.theta <= tol || a.theta >= pi - tol) {
        return true;
    }
    const double wrapped = std::remainder(a.phi - b.phi, two_pi);
    return std::abs(wrapped) <= tol * std::max(1.0, std::abs(a.phi - b.phi));
}

bool is_closed(const PathSpec& path)
{
    return !path.legs.empty() && same_point_on_sphere(path.start(), path.end());
}

double solid_angle(const PathSpec& path)
{
    if (!is_closed(path)) {
        throw ClosureError("solid angle requested for an open path");
    }
    double total = 0.0;
    for (const auto& leg : path.legs) {
        total += leg_solid_angle(leg);
    }
    return total;
}

// ---------------------------------------------------------------------------

Schedule::Schedule(std::vector<ScheduleKnot> knots, DriveGauge gauge, bool closed)
    : knots_(std::move(knots)), gauge_(gauge), closed_(closed)
{
    if (knots_.empty() || knots_.front().t != 0.0) {
        throw RangeError("schedule must start at t = 0");
    }
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const double dt = knots_[i].t - knots_[i - 1].t;
        if (!(dt > 0.0)) {
            throw RangeError("schedule knot times must be strictly increasing");
        }
        const double rate = std::hypot(knots_[i].theta - knots_[i - 1].theta,
                                       knots_[i].phi - knots_[i - 1].phi)
                          / dt;
        max_rate_ = std::max(max_rate_, rate);
    }
}

Polarization Schedule::at(double t) const
{
    if (knots_.size() == 1 || t <= 0.0) {
        return {knots_.front().theta, knots_.front().phi};
    }
    if (t >= knots_.back().t) {
        return {knots_.back().theta, knots_.back().phi};
    }
    const auto upper = std::upper_bound(knots_.begin(), knots_.end(), t,
                                        [](double value, const ScheduleKnot& k) { return value < k.t; });
    const auto& b = *upper;
    const auto& a = *(upper - 1);
    const double w = (t - a.t) / (b.t - a.t);
    return {a.theta + w * (b.theta - a.theta), a.phi + w * (b.phi - a.phi)};
}

Schedule make_schedule(const PathSpec& path, int samples_per_leg, DriveGauge gauge)
{
    if (samples_per_leg < 2) {
        throw RangeError("samples_per_leg must be at least 2");
    }
    validate(path);
    std::vector<ScheduleKnot> knots{{0.0, path.start().theta, path.start().phi}};
    double t0 = 0.0;
    for (const auto& leg : path.legs) {
        if (leg.duration == 0.0) {
            continue; // zero-length legs only join their endpoints
        }
        for (int i = 1; i < samples_per_leg; ++i) {
            const double w = static_cast<double>(i) / (samples_per_leg - 1);
            knots.push_back({t0 + w * leg.duration,
                             leg.from.theta + w * (leg.to.theta - leg.from.theta),
                             leg.from.phi + w * (leg.to.phi - leg.from.phi)});
        }
        t0 += leg.duration;
    }
    return Schedule(std::move(knots), gauge, is_closed(path));
}

Schedule frozen_schedule(const Polarization& pol, double duration, DriveGauge gauge)
{
    if (!(duration >= 0.0)) {
        throw RangeError("frozen schedule duration must be non-negative");
    }
    std::vector<ScheduleKnot> knots{{0.0, pol.theta(), pol.phi()}};
    if (duration > 0.0) {
        knots.push_back({duration, pol.theta(), pol.phi()});
    }
    return Schedule(std::move(knots), gauge, true);
}

double adiabaticity_ratio(const Schedule& schedule, const ModelParams& params)
{
    return schedule.max_rate() / params.lambda();
}

double solid_angle(const Schedule& schedule)
{
    if (!schedule.closed()) {
        throw ClosureError("solid angle requested for a schedule of an open path");
    }
    const auto& k = schedule.knots();
    double total = 0.0;
    for (std::size_t i = 1; i < k.size(); ++i) {
        total += 0.5 * ((1.0 - std::cos(k[i].theta)) + (1.0 - std::cos(k[i - 1].theta)))
               * (k[i].phi - k[i - 1].phi);
    }
    return total;
}

void write_schedule_csv(std::ostream& out, const Schedule& schedule)
{
    out << "t_ms,theta,phi\n";
    for (const auto& k : schedule.knots()) {
        write_row(out, {k.t, k.theta, k.phi});
    }
}

} // namespace cqed
