#pragma once
// Real vector spaces with the sup metric; guarded outputs are contractive in the unguarded inputs.
// The trace solves the feedback equation by Banach iteration.

#include <map>
#include <random>
#include <string>

#include <json.hpp>

#include "gtc/models/cartesian.hpp"
#include "gtc/models/tolerance.hpp"

namespace gtc::metric {

using Vec = std::vector<double>;
using Tuple = cart::Tuple<Vec>;
using Morph = cart::Morph<Vec>;
using Dims = std::map<std::string, int>;

double sup_dist(const Tuple& x, const Tuple& y);
double max_rel_dev(const Tuple& x, const Tuple& y);

struct BanachResult {
    Tuple point;
    int iterations = 0;  // evaluations of the step map
    int bound = 0;       // a-priori bound from the contraction factor
};
// Smallest n with c^(n-1) * d0 <= tol * (1 - c), i.e. ceil(log(tol(1-c)/d0) / log c) + 1.
int banach_bound(double c, double d0, double tol);
// Iterate from start until two successive points are within tol * (1 - c).
// Throws ModelError when the a-priori bound is exceeded (the declared factor is wrong).
BanachResult banach_rec(const std::function<Tuple(const Tuple&)>& step, const Tuple& start, double c, double tol);

// Trace of a body whose Lipschitz matrix is known; the contraction factor is the largest row sum of L_UU.
Morph trace(const Morph& f, const TraceShape& s, const std::vector<int>& u_dims, double tol);

// y = M x + offset + alpha .* sin(N x + phase), on the concatenated coordinates of all gates.
struct AffineSin {
    Eigen::MatrixXd M, N;
    Eigen::VectorXd offset, alpha, phase;
};
Morph from_affine_sin(const AffineSin& a, const std::vector<int>& in_dims, const std::vector<int>& out_dims);
Eigen::MatrixXd lipschitz_bounds(const AffineSin& a, const std::vector<int>& in_dims, const std::vector<int>& out_dims);
// Row sums of the gate-level bounds stay below 0.9; guarded passages are scaled down further.
AffineSin random_affine_sin(const BoxSig& sig, const Dims& dims, std::mt19937_64& rng);
std::vector<int> dims_of(const Object& o, const Dims& dims);
Tuple random_point(const std::vector<int>& dims, std::mt19937_64& rng, double radius = 2.0);

struct Ops {
    using Morph = metric::Morph;
    Dims dims;
    std::map<std::string, Morph> boxes;
    double tol = 1e-12;

    Morph box(const BoxSig& sig);
    Morph id(const Object& o) { return cart::identity<Vec>(o.size()); }
    Morph sym(const Object& a, const Object& b) { return cart::symmetry<Vec>(a.size(), b.size()); }
    Morph compose(const Morph& f, const Morph& g) { return cart::compose(f, g); }
    Morph tensor(const Morph& f, const Morph& g) { return cart::tensor(f, g); }
    Morph trace(const Morph& f, const TraceShape& s, const Object& loop) {
        return metric::trace(f, s, dims_of(loop, dims), tol);
    }
};

// {"model":"metric","atoms":{"X":1},"boxes":{"f":{"M":[[..]],"offset":[..],"alpha":[..],"N":[[..]],"phase":[..]}}}
// alpha, N and phase are optional. Guarded outputs must be contractive in the unguarded inputs.
Ops load_bindings(const nlohmann::json& j, const SigRegistry& sigs);

}  // namespace gtc::metric
