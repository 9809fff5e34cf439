#ifndef YARDSIM_SCORING_HPP
#define YARDSIM_SCORING_HPP

#include <vector>

#include "yardsim/vehicle.hpp"

namespace yardsim {

// Coefficients of the priority score. Defaults are the operational values;
// overridable through run configuration for sensitivity studies.
struct ScoreWeights {
    double charge = 60.0;
    double circuit = 20.0;
    double lateness = 5.0;
    double trust = 1.0;
};

struct PriorityScore {
    double total = 0;
    double charge_term = 0;
    double circuit_term = 0;
    double lateness_term = 0;
    double trust_term = 0;
    // Deterministic tie-break: earlier entry first, then smaller id.
    double entry_time_s = 0;
    VehicleId id = 0;

    // Strict total order, descending by total.
    bool ranks_before(const PriorityScore& o) const {
        if (total != o.total) return total > o.total;
        if (entry_time_s != o.entry_time_s) return entry_time_s < o.entry_time_s;
        return id < o.id;
    }
};

// Inverse of the remaining charge time in hours, capped where the remaining
// time falls below one minute (so a finished charge scores 60, not inf).
double charge_urgency(double remaining_charge_s);

// Seconds spent in the yard beyond the expected circuit time, clamped at 0.
double lateness(double entry_time_s, double now_s, double expected_circuit_s);

PriorityScore priority_score(const Vehicle& v, double now_s,
                             double expected_circuit_s,
                             const ScoreWeights& w = {});

// Sorted copy, highest priority first; ties broken by (entry_time, id).
std::vector<const Vehicle*> rank_vehicles(std::vector<const Vehicle*> vehicles,
                                          double now_s,
                                          double expected_circuit_s,
                                          const ScoreWeights& w = {});

}  // namespace yardsim

#endif
