// van der Corput differencing on families of polynomial vectors and the PET
// induction loop built from it.
#pragma once

#include "circlelab/poly.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace circlelab::poly {

struct PolyVector {
    std::vector<MultiPoly> comps;
    bool conjugated = false;

    int degree_y() const;
    bool is_constant() const { return degree_y() <= 0; }
    bool operator==(const PolyVector& o) const = default;
};

struct PetStep {
    std::size_t l0 = 0;       // 0-based index into the family before the step
    std::string shift_var;    // "h3" for symbolic shifts, decimal text otherwise
};

struct PolyVectorFamily {
    std::size_t k = 0;
    std::vector<PolyVector> vectors;
    std::vector<PetStep> history;
    int shift_vars = 0;

    // Q_i = P_i e_i.
    static PolyVectorFamily from_map(const PolynomialMap& pm);
    int max_degree_y() const;
    bool is_linear() const { return max_degree_y() <= 1; }
    std::vector<std::vector<std::string>> strings() const;
};

// nullopt requests a fresh symbolic variable h_{T+1}.
using Shift = std::optional<BigInt>;

PolyVectorFamily vdc_step(const PolyVectorFamily& fam, std::size_t l0, const Shift& h);

// Smallest maximal component degree, lowest index on ties.
std::size_t select_l0(const PolyVectorFamily& fam);

struct PetTrace {
    std::vector<PolyVectorFamily> states;   // states[0] is the input family
    std::size_t steps() const { return states.size() - 1; }
    int shift_vars() const { return states.back().shift_vars; }
};

// Thrown when a trace hits the step cap or the family size cap.
struct PetCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
    std::size_t steps = 0;          // steps completed before giving up
    std::size_t family_size = 0;
};

inline constexpr std::size_t default_family_cap = 2048;

// Default step cap is 4^(d_k * k * L), saturated at 2^62. The family size cap
// guards memory: the lowest-degree scheme doubles the family on every linear
// step, so some maps reach astronomically long traces.
PetTrace pet_trace(const PolyVectorFamily& fam, std::optional<std::uint64_t> step_cap = std::nullopt,
                   std::size_t family_cap = default_family_cap);

nlohmann::json trace_to_json(const PetTrace& trace);

}  // namespace circlelab::poly
