#ifndef NONLOCAL_MAXPRINCIPLE_HPP
#define NONLOCAL_MAXPRINCIPLE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "nonlocal/spectral.hpp"

namespace nonlocal {

enum class MPVerdict { holds, violated };

struct MPOptions {
    int battery = 50;
    std::uint64_t seed = 0;
    double resonance = 1e-9;             // |lambda_p| below this refuses a verdict
    double cutoff_margin = 0.25;         // widest ramp tried for the witness
    std::size_t exact_inverse_limit = 256; // full inverse check up to this many nodes
    EigenOptions eigen;
};

struct MPReport {
    MPVerdict verdict = MPVerdict::holds;
    double lambda_p = 0.0;
    std::optional<Eigen::VectorXd> witness;
    int battery_size = 0;
    double battery_min = 0.0;          // min over all entries of all battery solutions
    std::vector<double> battery_mins;  // per right-hand side
    std::optional<double> inverse_min; // min entry of (-A_II)^{-1}, small grids only
};

// Maximum principle with u = 0 pinned on boundary nodes. The verdict follows
// the sign of lambda_p; "holds" is backed by inverse positivity of the
// interior block, "violated" by an explicit witness.
MPReport check_mp(const NonlocalOperator& op, const MPOptions& options = {});
MPReport check_mp(const NonlocalOperator& op, const EigenReport& eigen, const MPOptions& options = {});

struct WitnessCheck {
    double max_interior = 0.0; // max of (A w)_i over interior nodes
    double min_boundary = 0.0; // min of w_i over boundary nodes
    double min_value = 0.0;    // min of w_i overall
    bool sound = false;        // <= 1e-10, >= -1e-12, < -1e-6
};

WitnessCheck verify_witness(const NonlocalOperator& op, const Eigen::VectorXd& w);

// w = -phi * eta with eta a ramp cutoff of width at most `cutoff_margin`.
Eigen::VectorXd witness_from_eigenfunction(const NonlocalOperator& op, const EigenReport& eigen,
                                           double cutoff_margin);

} // namespace nonlocal

#endif
