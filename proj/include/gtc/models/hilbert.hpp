#pragma once
// Finite-dimensional real Hilbert spaces: matrices, Kronecker tensor (first factor most significant),
// transpose as dagger, and the partial trace in two forms.

#include <map>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "gtc/models/cartesian.hpp"
#include "gtc/models/tolerance.hpp"

namespace gtc::hilbert {

using Mat = Eigen::MatrixXd;
using Dims = std::map<std::string, int>;

struct Morph {
    std::vector<int> in_dims, out_dims;
    Mat m;  // prod(out_dims) x prod(in_dims)
};

int prod(const std::vector<int>& dims);
std::vector<int> dims_of(const Object& o, const Dims& dims);
Mat kron(const Mat& a, const Mat& b);
// Linear map V_0 x ... x V_{k-1} -> V_perm[0] x ... x V_perm[k-1] moving tensor factors.
Mat factor_permutation(const std::vector<int>& dims, const std::vector<int>& perm);

Morph identity(const std::vector<int>& dims);
Morph symmetry(const std::vector<int>& a, const std::vector<int>& b);
Morph compose(const Morph& f, const Morph& g);  // f ; g
Morph tensor(const Morph& f, const Morph& g);

// f : (A x U) x B -> C x (D x U) as a (C D U) x (A U B) matrix.
// w[(c,d),(a,b)] = sum_i <f(a x u_i x b), c x d x u_i> over the orthonormal columns u_i of basis.
Mat hs_sum_trace(const Mat& f, int A, int U, int B, int C, int D, const Mat& basis);
Mat hs_sum_trace(const Mat& f, int A, int U, int B, int C, int D);

// Guardedness witness f = (h x id_{D x U}) (id_{A x U} x g), g : B -> E x D x U, h : A x U x E -> C.
struct Factorization {
    Mat g, h;
    int E = 0;
};
Mat recompose(const Factorization& w, int A, int U, int B, int C, int D);
// A x B -> A x E x D x U, moved to A x U x E x D, then h x id_D.
Mat hs_factored_trace(const Factorization& w, int A, int U, int B, int C, int D);
// Witness with E = (A x U) x C read off the matrix entries.
Factorization canonical_factorization(const Mat& f, int A, int U, int B, int C, int D);
// Another witness for the same f: g' = (M x id) g, h' = h (id x M^-1).
Factorization transform(const Factorization& w, const Mat& M, int A, int U, int D);
Factorization random_factorization(int A, int U, int B, int C, int D, int E, std::mt19937_64& rng);

Mat random_matrix(int rows, int cols, std::mt19937_64& rng);
Mat random_orthogonal(int n, std::mt19937_64& rng);
Mat random_invertible(int n, std::mt19937_64& rng);
double max_rel_dev(const Mat& a, const Mat& b);

struct Ops {
    using Morph = hilbert::Morph;
    Dims dims;
    std::map<std::string, Morph> boxes;

    Morph box(const BoxSig& sig);
    Morph id(const Object& o) { return identity(dims_of(o, dims)); }
    Morph sym(const Object& a, const Object& b) { return symmetry(dims_of(a, dims), dims_of(b, dims)); }
    Morph compose(const Morph& f, const Morph& g) { return hilbert::compose(f, g); }
    Morph tensor(const Morph& f, const Morph& g) { return hilbert::tensor(f, g); }
    Morph trace(const Morph& f, const TraceShape& s, const Object& loop);
};

// {"model":"hilbert","atoms":{"U":2},"boxes":{"f":[[row],[row],...]}}
Ops load_bindings(const nlohmann::json& j, const SigRegistry& sigs);
nlohmann::json to_json(const Mat& m);

}  // namespace gtc::hilbert
