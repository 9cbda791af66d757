// Multilinear polynomial ergodic averages on shift, cyclic and rotation
// systems, their adjoints, maximal and variational statistics, and the
// experiments built on them.
#pragma once

#include "circlelab/arcs.hpp"
#include "circlelab/grid.hpp"
#include "circlelab/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace circlelab::ergodic {

using grid::cplx;
using grid::Domain;
using grid::GridFunction;
using grid::Point;
using poly::PolynomialMap;

enum class SystemKind { IntegerShift, CyclicShift, TorusRotation };

// IntegerShift: T_i x = x - e_i on Z^k.
// CyclicShift:  T_i x = x - step_i e_i on prod Z/M_i.
// TorusRotation: T_i x = x + alpha_i on T^t, alpha_i in R^t.
struct System {
    SystemKind kind = SystemKind::IntegerShift;
    std::size_t k = 1;
    Point period;                              // cyclic
    std::vector<std::int64_t> steps;           // cyclic, default 1
    std::vector<std::vector<double>> angles;   // torus, one vector per map

    static System integer_shift(std::size_t k);
    static System cyclic(Point period, std::vector<std::int64_t> steps = {});
    static System torus(std::vector<std::vector<double>> angles);
    std::string name() const;
};

// Generic weighted orbit evaluation:
//   out(x) = sum_n w_n prod_slot C^{conj[slot]} f_slot(x + offsets[n][slot]) / count
struct OrbitSpec {
    std::vector<std::vector<Point>> offsets;
    std::vector<bool> conj;
    std::vector<cplx> weights;                 // empty means all ones
};

GridFunction evaluate_orbit(const OrbitSpec& spec, const std::vector<const GridFunction*>& fs,
                            const std::optional<Domain>& out = std::nullopt);

// n in [N] (full) or (N/2, N] (truncated).
std::vector<std::int64_t> time_range(double N, bool truncated);

GridFunction average(const PolynomialMap& pm, double N, const std::vector<GridFunction>& fs, const System& sys);
GridFunction truncated_average(const PolynomialMap& pm, double N, const std::vector<GridFunction>& fs,
                               const System& sys);
// A^{*j} (j 0-based): slot j holds the dual function and stays unconjugated.
GridFunction adjoint_average(const PolynomialMap& pm, double N, std::size_t j, const std::vector<GridFunction>& gs,
                             const System& sys, bool truncated = false);
// Phase e(xi . P_{>l}(n)) on the first l functions; xi has k - l entries.
GridFunction modulated_average(const PolynomialMap& pm, std::size_t l, const std::vector<double>& xi, double N,
                               const std::vector<GridFunction>& fs, const System& sys, bool truncated = false);

// Trigonometric polynomial sum_m c_m e(m . x) on T^t.
struct TrigPolynomial {
    std::vector<std::pair<std::vector<std::int64_t>, cplx>> terms;
    static TrigPolynomial character(std::vector<std::int64_t> m);
    static TrigPolynomial constant(cplx c);
    cplx operator()(const std::vector<double>& x) const;
    cplx mean() const;                          // zero-frequency coefficient
};

// Rotation averages at the given points, phases reduced exactly in n.
std::vector<cplx> torus_average(const PolynomialMap& pm, double N, const std::vector<TrigPolynomial>& fs,
                                const System& sys, const std::vector<std::vector<double>>& points,
                                bool truncated = false);

struct SweepStats {
    double maximal = 0;       // || sup_N |A_N| ||_p
    double variation = 0;     // || V^r(A_N : N in D) ||_p
    std::vector<double> single;   // || A_N ||_p per N
};

SweepStats sweep_stats(const PolynomialMap& pm, const std::vector<double>& Ns, const std::vector<GridFunction>& fs,
                       const System& sys, double p, double r, bool truncated = false);
double maximal_stat(const PolynomialMap& pm, const std::vector<double>& Ns, const std::vector<GridFunction>& fs,
                    const System& sys, double p, bool truncated = false);
double variation_stat(const PolynomialMap& pm, const std::vector<double>& Ns, const std::vector<GridFunction>& fs,
                      const System& sys, double p, double r, bool truncated = false);

// ------------------------------------------------------------ experiments

struct ConvergenceRow {
    std::int64_t N = 0;
    double error = 0;          // |A_N - prod of means| (independent of x for characters)
    double envelope = 0;       // max error over [N, next checkpoint), or at N for the last one
    double weyl_crosscheck = 0;   // same quantity through the Weyl-sum routine
};

// Characters e(m_i x) under rotations by alpha_i on T^1.
std::vector<ConvergenceRow> convergence_experiment(const PolynomialMap& pm, const std::vector<double>& angles,
                                                   const std::vector<std::int64_t>& freqs,
                                                   const std::vector<std::int64_t>& checkpoints);

struct DecayRow {
    std::int64_t N = 0;
    double ratio = 0;          // ||A~_N(f)||_p / prod ||f_i||_{p_i}
};

struct DecayTable {
    std::vector<DecayRow> rows;
    double slope = 0;          // least-squares log-log slope
    bool strictly_decreasing = false;
    std::int64_t annihilated_centers = 0;
};

struct DecayOptions {
    Point period;              // periodic model, must host Sigma_{<= l} on axis j
    std::size_t j = 0;
    int l = 2;
    int m = -6;                // annihilation width 2^m
    double p = 1;
    std::vector<double> p_i;   // one exponent per function
    std::uint64_t seed = 0;
    int trials = 1;            // independent random inputs, ratios averaged
};

DecayTable minor_arc_decay_experiment(const PolynomialMap& pm, const std::vector<std::int64_t>& Ns,
                                      const DecayOptions& opt);

struct InverseReport {
    double hypothesis = 0;     // |<A~_N(f_1..f_k), f_0>| / N^D
    bool hypothesis_met = false;
    struct Cell {
        std::int64_t q_max = 0;
        int m = 0;
        double correlation = 0;   // sup over 1-bounded h on I of |<f_j, Pi h>| / N^D
    };
    std::vector<Cell> grid;
    double best = 0;
    double threshold = 0;      // delta^C
    bool reached = false;
};

// fs = f_0..f_k on a periodic model hosting the box I = prod [-C0 N^{d_i}, C0 N^{d_i}].
InverseReport inverse_correlation_experiment(const PolynomialMap& pm, std::int64_t N, double delta,
                                             const std::vector<GridFunction>& fs, std::size_t j,
                                             const std::vector<std::int64_t>& q_grid, const std::vector<int>& m_grid,
                                             std::int64_t C0 = 1, double C = 4);

}  // namespace circlelab::ergodic
