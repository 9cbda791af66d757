// Archived results of the seeded acceptance runs. A change in any of these
// means the computation changed.
#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace circlelab::fixtures {

// Restricted weak-type sweep: (n, n^2), N <= 8, 200 families, seed 2024.
inline constexpr std::string_view rwt_max_ratio =
    "54840492155435277513020014470975145057875390625/2270412749111178084564546226165390023761277533416929099776";

// Fitted constant of J_{4,2}(N) <= C (N^4 + N^5) over 2 <= N <= 24.
inline constexpr double vmvt_free_constant = 2.584319161;

// PET step counts for the monomial maps of the test matrix, in the order
// produced by pet_matrix(); -1 marks a trace stopped by the family size cap.
inline constexpr std::array<int, 14> pet_steps = {0, 1, 2, 2, 13, -1, -1, 3, -1, -1, -1, -1, -1, -1};

// Log-log slopes of the minor-arc scan and of the multilinear decay run.
inline constexpr double scan_slope = -0.233798970949;
inline constexpr double decay_slope = -0.500101847263;

}  // namespace circlelab::fixtures
