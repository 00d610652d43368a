#pragma once

// Closed polarization loops on the Poincare sphere and their drive schedules.
//
// A path is a chain of legs, each linear in (theta, phi) over its duration.
// phi is kept unwrapped along a path so schedules never jump; closure is
// judged on the sphere (phi is irrelevant at the poles and 2pi-periodic
// elsewhere). The enclosed solid angle is gamma = oint (1 - cos theta) dphi,
// positive for counter-clockwise traversal seen from the north pole.

#include <array>
#include <iosfwd>
#include <vector>

#include "cqed/model.hpp"

namespace cqed {

struct SpherePoint {
    double theta = 0.0;
    double phi = 0.0;
};

struct PathLeg {
    SpherePoint from;
    SpherePoint to;
    double duration = 0.0; // ms
};

enum class PathKind { lasso, piecewise };

struct PathSpec {
    PathKind kind = PathKind::piecewise;
    double theta0 = 0.0; // lasso only
    std::vector<PathLeg> legs;

    double total_duration() const;
    SpherePoint start() const { return legs.front().from; }
    SpherePoint end() const { return legs.back().to; }
};

using LegFractions = std::array<double, 3>;
inline constexpr LegFractions default_leg_fractions{0.25, 0.5, 0.25};

// Pole -> theta0 along phi = 0, full sweep phi: 0 -> 2pi at theta0, back to the
// pole at phi = 2pi. theta0 = arccos(1 - gamma/2pi).
PathSpec lasso_path(double gamma_target, double total_time,
                    const LegFractions& leg_fractions = default_leg_fractions);

double lasso_theta0(double gamma_target);

// Legs join consecutive knots; durations.size() == knots.size() - 1.
PathSpec piecewise_path(const std::vector<SpherePoint>& knots, const std::vector<double>& durations);

PathSpec reversed(const PathSpec& path);
PathSpec concatenate(const PathSpec& first, const PathSpec& second);
PathSpec with_total_time(const PathSpec& path, double total_time);

bool same_point_on_sphere(const SpherePoint& a, const SpherePoint& b, double tol = 1e-12);
bool is_closed(const PathSpec& path);

struct ScheduleKnot {
    double t = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

class Schedule {
public:
    Schedule(std::vector<ScheduleKnot> knots, DriveGauge gauge, bool closed);

    const std::vector<ScheduleKnot>& knots() const { return knots_; }
    DriveGauge gauge() const { return gauge_; }
    bool closed() const { return closed_; }
    double duration() const { return knots_.back().t; }

    // Largest |d(theta, phi)/dt| over the knots, rad/ms.
    double max_rate() const { return max_rate_; }

    Polarization at(double t) const;
    double drive_phase_at(double t) const { return drive_phase(at(t), gauge_); }
    bool is_constant() const { return max_rate_ == 0.0; }

private:
    std::vector<ScheduleKnot> knots_;
    DriveGauge gauge_;
    bool closed_;
    double max_rate_ = 0.0;
};

// Uniform-in-time sampling, `samples_per_leg` knots per leg (shared endpoints).
Schedule make_schedule(const PathSpec& path, int samples_per_leg,
                       DriveGauge gauge = DriveGauge::plus_locked);

// Polarization held fixed for `duration` ms (duration may be zero).
Schedule frozen_schedule(const Polarization& pol, double duration,
                         DriveGauge gauge = DriveGauge::plus_locked);

double adiabaticity_ratio(const Schedule& schedule, const ModelParams& params);

inline constexpr double non_adiabatic_threshold = 0.5;

double solid_angle(const PathSpec& path);
double solid_angle(const Schedule& schedule);

void write_schedule_csv(std::ostream& out, const Schedule& schedule);

} // namespace cqed
