#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "horizonlab/bicharacteristics.hpp"
#include "horizonlab/char_geometry.hpp"
#include "horizonlab/curves.hpp"

namespace horizonlab {

struct SearchAnnulus {
    double r_lo = 0.0;
    double r_hi = 0.0;
};

/// Zero set of Delta found by bisection along `probes` rays from the origin.
/// Throws NoSignChange (naming the angle) when a ray has no sign change.
ClosedCurve ergosphere_locus(const SpacetimeMetric& metric, const SearchAnnulus& annulus, int probes = 256,
                             double tol = 1e-12);

struct PoincareSection {
    double theta0 = 0.0;
    double r_lo = 0.0;
    double r_hi = 0.0;
    Family family = Family::Plus;
};

struct ReturnOptions {
    double sigma_budget = 0.0;  // 0 selects 1e3 x section window diameter
    double crossing_tol = 1e-12;
    PlanarOptions planar;
};

struct ReturnResult {
    double r = 0.0;
    double sigma = 0.0;     // parameter length of the return
    int direction = 1;      // +1 counter-clockwise
};

/// First return of the planar orbit from (r, theta0) to the section ray.
/// Throws NoReturn when the orbit exits or exhausts its budget.
ReturnResult return_map(const SpacetimeMetric& metric, const PoincareSection& section, double r,
                        const ReturnOptions& opts = {});

struct LimitCycle {
    ClosedCurve curve;
    double fixed_r = 0.0;
    double section_theta = 0.0;
    double period_sigma = 0.0;
    double stability = 0.0;       // |P'(r*)|
    double fixed_point_residual = 0.0;
    double closure_gap = 0.0;
    double char_residual = 0.0;
    Family family = Family::Plus;
    int direction = 1;
};

struct CycleSearchOptions {
    int scan_points = 64;
    double tol_cycle = 1e-8;
    double dedupe = 1e-6;
    int curve_samples = 512;
    double transversality = 1e-3;  // minimum |f . theta_hat| on the section
    ReturnOptions ret;
};

std::vector<LimitCycle> find_limit_cycles(const SpacetimeMetric& metric, const PoincareSection& section,
                                          const CycleSearchOptions& opts = {});

struct HorizonConfig {
    SearchAnnulus ergo_annulus;
    int ergo_probes = 256;
    double cycle_r_lo = 0.0;      // inner edge of the cycle scan window
    double cycle_margin = 1e-6;   // gap kept below the smallest ergosphere radius
    double theta0 = 0.0;
    std::optional<ClosedCurve> s1;
    std::optional<FlowSpec> gordon_flow;  // enables the Gordon inner condition
    CycleSearchOptions search;
    CharTolerances tol;
};

struct ClassifiedCycle {
    LimitCycle cycle;
    HoleClass hole;
};

struct HorizonReport {
    ClosedCurve ergosphere;
    double ergo_r_min = 0.0;
    double ergo_r_max = 0.0;
    std::vector<ClassifiedCycle> cycles;
    std::optional<InnerConditionReport> inner_condition;
    std::optional<GordonInnerReport> gordon_condition;
    std::string to_json() const;
};

HorizonReport horizon_report(const SpacetimeMetric& metric, const HorizonConfig& config);

}  // namespace horizonlab
