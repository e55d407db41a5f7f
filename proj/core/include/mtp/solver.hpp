#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mtp/coefficients.hpp"
#include "mtp/geo2.hpp"
#include "mtp/geometry.hpp"

namespace mtp {

using SpMat = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Uniform lattice over the domain's bounding box. The lattice origin is
/// offset by (sqrt(2)/137) h in each axis so that no node or tensor Gauss
/// point lands exactly on the sonic curve of the built-in coefficients.
///
/// Cells whose four corners lie in the closed domain are active; degrees of
/// freedom are the nodes all four of whose incident cells are active (zero
/// extension outside enforces the homogeneous Dirichlet condition).
class Grid {
public:
    Grid(const Domain& dom, double h);

    double h() const { return h_; }
    Vec2 origin() const { return origin_; }
    int nx() const { return nx_; }  // lattice node count in x
    int ny() const { return ny_; }

    Vec2 node(int i, int j) const { return {origin_.x + i * h_, origin_.y + j * h_}; }
    std::size_t lattice_index(int i, int j) const {
        return static_cast<std::size_t>(j) * nx_ + i;
    }

    bool cell_active(int ci, int cj) const;
    bool node_active(int i, int j) const { return node_index(i, j) >= 0; }
    /// Active DOF index, or -1.
    int node_index(int i, int j) const;

    int n_active() const { return static_cast<int>(active_nodes_.size()); }
    const std::vector<std::pair<int, int>>& active_nodes() const { return active_nodes_; }

    /// Expand an active-DOF vector to the full lattice (zero off the mask).
    std::vector<double> scatter(const Vector& active) const;
    /// Restrict a full-lattice vector to the active DOFs.
    Vector gather(std::span<const double> lattice) const;

    /// Bilinear interpolation of a full-lattice field; zero outside the lattice.
    double interpolate(std::span<const double> lattice, Vec2 p) const;

private:
    double h_ = 0.0;
    Vec2 origin_;
    int nx_ = 0, ny_ = 0;
    std::vector<char> cell_active_;   // (nx-1) x (ny-1)
    std::vector<int> node_dof_;       // nx x ny, -1 if inactive
    std::vector<std::pair<int, int>> active_nodes_;
};

/// Assembled discrete problem. A is the signed stiffness of
/// (K u_x v_x + u_y v_y); G the positive form with |K|; Mw the |K|-weighted
/// mass matrix; MI the plain mass matrix. The Cholesky factor of G is cached
/// since every negative-norm evaluation applies G^{-1}.
class DiscreteProblem {
public:
    Grid grid;
    SpMat A, G, Mw, MI;
    /// Coefficient the matrices were assembled with; factored loads and the
    /// L2(|K|^-1) norm re-evaluate it at quadrature points.
    std::function<double(Vec2)> k_field;

    const Eigen::SimplicialLLT<SpMat>& chol_G() const;
    Vector apply_Ginv(const Vector& w) const;

    DiscreteProblem(Grid g) : grid(std::move(g)) {}

private:
    mutable std::shared_ptr<Eigen::SimplicialLLT<SpMat>> chol_;
};

/// Assembles with a general scalar coefficient field K.
DiscreteProblem assemble(const Domain& dom, const std::function<double(Vec2)>& K, double h);
/// Assembles with the type-change coefficient K(x,y) = x - sigma(y).
DiscreteProblem assemble(const Domain& dom, const TypeChangeCoefficient& tc, double h);

/// Load vector of (f, phi) for bounded f.
Vector load_vector(const DiscreteProblem& dp, const std::function<double(Vec2)>& f);
/// Load vector for data given in the factored form f = |K| g with bounded g.
Vector load_vector_factored(const DiscreteProblem& dp, const std::function<double(Vec2)>& g);

double norm_L2_wK(const DiscreteProblem& dp, const Vector& u);
double norm_H10_K(const DiscreteProblem& dp, const Vector& u);
/// Discrete dual norm sqrt(w^T G^{-1} w) of a load vector w.
double norm_Hneg1_K(const DiscreteProblem& dp, const Vector& w);
/// sqrt( int |K| g^2 ) by quadrature, for factored data f = |K| g.
double norm_L2_wKinv_factored(const DiscreteProblem& dp, const std::function<double(Vec2)>& g);

struct SolveResult {
    Vector u;
    double residual_Hneg1 = 0.0;       // || A u - F ||_{G^{-1}}
    double rel_normal_residual = 0.0;  // ||A^T G^{-1}(A u - F)|| / ||A^T G^{-1} F||
    int cg_iterations = 0;
    bool converged = false;
};

/// Minimizes the dual-norm residual (A u - F)^T G^{-1} (A u - F) by conjugate
/// gradients on the normal equations A^T G^{-1} A u = A^T G^{-1} F.
SolveResult solve_closed_dirichlet(const DiscreteProblem& dp, const Vector& F,
                                   double tol = 1e-12, int max_iterations = 0);

struct KernelProbe {
    bool kernel_found = false;
    double smallest_ratio = 0.0;  // ||A z|| / (||A||_inf ||z||) for the worst z found
    Vector witness;
};

/// Inverse-iteration probe for a discrete kernel of A (a uniqueness-failure
/// witness when one exists).
KernelProbe kernel_probe(const DiscreteProblem& dp, int iterations = 40,
                         double threshold = 1e-12, std::uint64_t seed = 7);

struct Lemma1Estimate {
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    Vector maximizer;
    int n_trials = 0;
};

/// Monte-Carlo sup of ||u||_{L2(|K|)} / ||L u||_{H^-1} over random smoothed
/// compactly-supported nodal fields.
Lemma1Estimate estimate_lemma1_constant(const DiscreteProblem& dp, int n_trials,
                                        std::uint64_t seed);

/// Exact discrete sup ratio: sqrt of the largest eigenvalue of Mw relative to
/// A^T G^{-1} A, by power iteration on the inverted pencil.
double lemma1_sup_ratio_eigen(const DiscreteProblem& dp, double tol = 1e-8,
                              int max_iterations = 300);

struct PoincareEstimate {
    double lambda = 0.0;
    double inv_lambda = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Smallest generalized eigenvalue of G u = lambda MI u by inverse iteration.
PoincareEstimate estimate_poincare_constant(const DiscreteProblem& dp, double tol = 1e-12,
                                            int max_iterations = 2000);

struct ManufacturedSolution {
    std::function<double(Vec2)> value;
    std::function<double(Vec2)> forcing;  // L value, computed analytically by the caller
};

struct ConvergenceRow {
    double h = 0.0;
    int n_dofs = 0;
    double err_L2_wK = 0.0;
    double residual_Hneg1 = 0.0;
    double rate = 0.0;  // log2 ratio against the previous row, 0 for the first
};

std::vector<ConvergenceRow> convergence_study(const Domain& dom, const TypeChangeCoefficient& tc,
                                              const ManufacturedSolution& ms,
                                              std::span<const double> hs);

}  // namespace mtp
