#include "yardsim/scoring.hpp"

#include <algorithm>

namespace yardsim {

double charge_urgency(double remaining_charge_s) {
    double hours = remaining_charge_s / 3600.0;
    return 1.0 / std::max(hours, 1.0 / 60.0);
}

double lateness(double entry_time_s, double now_s, double expected_circuit_s) {
    return std::max(0.0, (now_s - entry_time_s) - expected_circuit_s);
}

PriorityScore priority_score(const Vehicle& v, double now_s,
                             double expected_circuit_s,
                             const ScoreWeights& w) {
    PriorityScore s;
    s.charge_term = w.charge * charge_urgency(v.remaining_charge_s);
    s.circuit_term = w.circuit * static_cast<double>(v.completed.count());
    s.lateness_term =
        w.lateness * lateness(v.entry_time_s, now_s, expected_circuit_s);
    s.trust_term = w.trust * v.trust_score;
    s.total = s.charge_term + s.circuit_term + s.lateness_term + s.trust_term;
    s.entry_time_s = v.entry_time_s;
    s.id = v.id;
    return s;
}

std::vector<const Vehicle*> rank_vehicles(std::vector<const Vehicle*> vehicles,
                                          double now_s,
                                          double expected_circuit_s,
                                          const ScoreWeights& w) {
    std::vector<std::pair<PriorityScore, const Vehicle*>> scored;
    scored.reserve(vehicles.size());
    for (const Vehicle* v : vehicles)
        scored.emplace_back(priority_score(*v, now_s, expected_circuit_s, w),
                            v);
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) {
                  return a.first.ranks_before(b.first);
              });
    std::vector<const Vehicle*> out;
    out.reserve(scored.size());
    for (auto& [score, v] : scored) out.push_back(v);
    return out;
}

}  // namespace yardsim
