#include "mtp/solver.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace mtp {

namespace {

constexpr double kLatticeOffset = 1.4142135623730951 / 137.0;  // sqrt(2)/137

// Q1 reference basis on [0,1]^2, corner order (0,0),(1,0),(1,1),(0,1).
inline void q1_basis(double xi, double eta, double phi[4]) {
    phi[0] = (1 - xi) * (1 - eta);
    phi[1] = xi * (1 - eta);
    phi[2] = xi * eta;
    phi[3] = (1 - xi) * eta;
}

inline void q1_grad(double xi, double eta, double h, double gx[4], double gy[4]) {
    gx[0] = -(1 - eta) / h;
    gx[1] = (1 - eta) / h;
    gx[2] = eta / h;
    gx[3] = -eta / h;
    gy[0] = -(1 - xi) / h;
    gy[1] = -xi / h;
    gy[2] = xi / h;
    gy[3] = (1 - xi) / h;
}

constexpr double kGauss = 0.21132486540518713;  // (1 - 1/sqrt(3)) / 2

}  // namespace

Grid::Grid(const Domain& dom, double h) : h_(h) {
    if (!(h > 0.0)) throw std::invalid_argument("Grid: h must be positive");
    auto bb = dom.bounding_box();
    origin_ = {bb.lo.x - h + kLatticeOffset * h, bb.lo.y - h + kLatticeOffset * h};
    nx_ = static_cast<int>(std::ceil((bb.hi.x - origin_.x) / h)) + 2;
    ny_ = static_cast<int>(std::ceil((bb.hi.y - origin_.y) / h)) + 2;
    if (static_cast<long long>(nx_) * ny_ > 64LL * 1024 * 1024)
        throw std::invalid_argument("Grid: lattice too large");

    // Closure tolerance slightly above the lattice offset keeps box-aligned
    // geometries covered despite the shifted lattice.
    const double tol = 2.0 * kLatticeOffset * h;

    cell_active_.assign(static_cast<size_t>(nx_ - 1) * (ny_ - 1), 0);
    for (int cj = 0; cj < ny_ - 1; ++cj) {
        for (int ci = 0; ci < nx_ - 1; ++ci) {
            bool ok = dom.contains(node(ci, cj), tol) && dom.contains(node(ci + 1, cj), tol) &&
                      dom.contains(node(ci + 1, cj + 1), tol) && dom.contains(node(ci, cj + 1), tol);
            cell_active_[static_cast<size_t>(cj) * (nx_ - 1) + ci] = ok ? 1 : 0;
        }
    }

    node_dof_.assign(static_cast<size_t>(nx_) * ny_, -1);
    for (int j = 1; j < ny_ - 1; ++j) {
        for (int i = 1; i < nx_ - 1; ++i) {
            if (cell_active(i - 1, j - 1) && cell_active(i, j - 1) && cell_active(i - 1, j) &&
                cell_active(i, j)) {
                node_dof_[lattice_index(i, j)] = static_cast<int>(active_nodes_.size());
                active_nodes_.push_back({i, j});
            }
        }
    }
}

bool Grid::cell_active(int ci, int cj) const {
    if (ci < 0 || cj < 0 || ci >= nx_ - 1 || cj >= ny_ - 1) return false;
    return cell_active_[static_cast<size_t>(cj) * (nx_ - 1) + ci] != 0;
}

int Grid::node_index(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
    return node_dof_[lattice_index(i, j)];
}

std::vector<double> Grid::scatter(const Vector& active) const {
    std::vector<double> full(static_cast<size_t>(nx_) * ny_, 0.0);
    for (int k = 0; k < n_active(); ++k) {
        auto [i, j] = active_nodes_[k];
        full[lattice_index(i, j)] = active[k];
    }
    return full;
}

Vector Grid::gather(std::span<const double> lattice) const {
    Vector v(n_active());
    for (int k = 0; k < n_active(); ++k) {
        auto [i, j] = active_nodes_[k];
        v[k] = lattice[lattice_index(i, j)];
    }
    return v;
}

double Grid::interpolate(std::span<const double> lattice, Vec2 p) const {
    double fx = (p.x - origin_.x) / h_;
    double fy = (p.y - origin_.y) / h_;
    int i = static_cast<int>(std::floor(fx));
    int j = static_cast<int>(std::floor(fy));
    if (i < 0 || j < 0 || i >= nx_ - 1 || j >= ny_ - 1) return 0.0;
    double xi = fx - i, eta = fy - j;
    double v00 = lattice[lattice_index(i, j)];
    double v10 = lattice[lattice_index(i + 1, j)];
    double v11 = lattice[lattice_index(i + 1, j + 1)];
    double v01 = lattice[lattice_index(i, j + 1)];
    return v00 * (1 - xi) * (1 - eta) + v10 * xi * (1 - eta) + v11 * xi * eta +
           v01 * (1 - xi) * eta;
}

const Eigen::SimplicialLLT<SpMat>& DiscreteProblem::chol_G() const {
    if (!chol_) {
        chol_ = std::make_shared<Eigen::SimplicialLLT<SpMat>>();
        chol_->compute(G);
        if (chol_->info() != Eigen::Success)
            throw std::runtime_error("DiscreteProblem: Cholesky of G failed (G not positive definite?)");
    }
    return *chol_;
}

Vector DiscreteProblem::apply_Ginv(const Vector& w) const { return chol_G().solve(w); }

DiscreteProblem assemble(const Domain& dom, const std::function<double(Vec2)>& K, double h) {
    Grid grid(dom, h);
    if (grid.n_active() == 0) throw std::invalid_argument("assemble: empty mask at this resolution");

    // Connectivity of the mask (4-neighbor adjacency between active nodes).
    {
        const auto& nodes = grid.active_nodes();
        std::vector<char> seen(nodes.size(), 0);
        std::deque<int> queue{0};
        seen[0] = 1;
        size_t reached = 1;
        while (!queue.empty()) {
            auto [i, j] = nodes[queue.front()];
            queue.pop_front();
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                int idx = grid.node_index(i + di[k], j + dj[k]);
                if (idx >= 0 && !seen[idx]) {
                    seen[idx] = 1;
                    ++reached;
                    queue.push_back(idx);
                }
            }
        }
        if (reached != nodes.size())
            throw std::invalid_argument("assemble: disconnected mask at this resolution");
    }

    DiscreteProblem dp(std::move(grid));
    dp.k_field = K;
    const Grid& g = dp.grid;
    const int n = g.n_active();

    std::vector<Eigen::Triplet<double>> ta, tg, tmw, tmi;
    const double w_gp = h * h / 4.0;

    double la[4][4], lg[4][4], lmw[4][4], lmi[4][4];
    for (int cj = 0; cj < g.ny() - 1; ++cj) {
        for (int ci = 0; ci < g.nx() - 1; ++ci) {
            if (!g.cell_active(ci, cj)) continue;
            for (auto& row : la) row[0] = row[1] = row[2] = row[3] = 0.0;
            for (auto& row : lg) row[0] = row[1] = row[2] = row[3] = 0.0;
            for (auto& row : lmw) row[0] = row[1] = row[2] = row[3] = 0.0;
            for (auto& row : lmi) row[0] = row[1] = row[2] = row[3] = 0.0;

            Vec2 c0 = g.node(ci, cj);
            for (int qa = 0; qa < 2; ++qa) {
                for (int qb = 0; qb < 2; ++qb) {
                    double xi = qa == 0 ? kGauss : 1.0 - kGauss;
                    double eta = qb == 0 ? kGauss : 1.0 - kGauss;
                    Vec2 p{c0.x + xi * h, c0.y + eta * h};
                    double kv = K(p);
                    double akv = std::abs(kv);
                    double phi[4], gx[4], gy[4];
                    q1_basis(xi, eta, phi);
                    q1_grad(xi, eta, h, gx, gy);
                    for (int a = 0; a < 4; ++a) {
                        for (int b = 0; b < 4; ++b) {
                            la[a][b] += w_gp * (kv * gx[a] * gx[b] + gy[a] * gy[b]);
                            lg[a][b] += w_gp * (akv * gx[a] * gx[b] + gy[a] * gy[b]);
                            lmw[a][b] += w_gp * akv * phi[a] * phi[b];
                            lmi[a][b] += w_gp * phi[a] * phi[b];
                        }
                    }
                }
            }

            const int corner_i[4] = {ci, ci + 1, ci + 1, ci};
            const int corner_j[4] = {cj, cj, cj + 1, cj + 1};
            int dofs[4];
            for (int a = 0; a < 4; ++a) dofs[a] = g.node_index(corner_i[a], corner_j[a]);
            for (int a = 0; a < 4; ++a) {
                if (dofs[a] < 0) continue;
                for (int b = 0; b < 4; ++b) {
                    if (dofs[b] < 0) continue;
                    ta.emplace_back(dofs[a], dofs[b], la[a][b]);
                    tg.emplace_back(dofs[a], dofs[b], lg[a][b]);
                    tmw.emplace_back(dofs[a], dofs[b], lmw[a][b]);
                    tmi.emplace_back(dofs[a], dofs[b], lmi[a][b]);
                }
            }
        }
    }

    dp.A.resize(n, n);
    dp.G.resize(n, n);
    dp.Mw.resize(n, n);
    dp.MI.resize(n, n);
    dp.A.setFromTriplets(ta.begin(), ta.end());
    dp.G.setFromTriplets(tg.begin(), tg.end());
    dp.Mw.setFromTriplets(tmw.begin(), tmw.end());
    dp.MI.setFromTriplets(tmi.begin(), tmi.end());
    return dp;
}

DiscreteProblem assemble(const Domain& dom, const TypeChangeCoefficient& tc, double h) {
    return assemble(dom, [tc](Vec2 p) { return tc.k(p); }, h);
}

namespace {

Vector quad_load(const DiscreteProblem& dp, const std::function<double(Vec2)>& density) {
    const Grid& g = dp.grid;
    Vector F = Vector::Zero(g.n_active());
    const double h = g.h();
    const double w_gp = h * h / 4.0;
    for (int cj = 0; cj < g.ny() - 1; ++cj) {
        for (int ci = 0; ci < g.nx() - 1; ++ci) {
            if (!g.cell_active(ci, cj)) continue;
            Vec2 c0 = g.node(ci, cj);
            const int corner_i[4] = {ci, ci + 1, ci + 1, ci};
            const int corner_j[4] = {cj, cj, cj + 1, cj + 1};
            for (int qa = 0; qa < 2; ++qa) {
                for (int qb = 0; qb < 2; ++qb) {
                    double xi = qa == 0 ? kGauss : 1.0 - kGauss;
                    double eta = qb == 0 ? kGauss : 1.0 - kGauss;
                    Vec2 p{c0.x + xi * h, c0.y + eta * h};
                    double f = density(p);
                    double phi[4];
                    q1_basis(xi, eta, phi);
                    for (int a = 0; a < 4; ++a) {
                        int dof = g.node_index(corner_i[a], corner_j[a]);
                        if (dof >= 0) F[dof] += w_gp * f * phi[a];
                    }
                }
            }
        }
    }
    return F;
}

}  // namespace

Vector load_vector(const DiscreteProblem& dp, const std::function<double(Vec2)>& f) {
    return quad_load(dp, f);
}

Vector load_vector_factored(const DiscreteProblem& dp, const std::function<double(Vec2)>& g) {
    if (!dp.k_field)
        throw std::invalid_argument("load_vector_factored: problem has no stored coefficient field");
    auto K = dp.k_field;
    return quad_load(dp, [K, g](Vec2 p) { return std::abs(K(p)) * g(p); });
}

double norm_L2_wK(const DiscreteProblem& dp, const Vector& u) {
    return std::sqrt(std::max(0.0, u.dot(dp.Mw * u)));
}

double norm_H10_K(const DiscreteProblem& dp, const Vector& u) {
    return std::sqrt(std::max(0.0, u.dot(dp.G * u)));
}

double norm_Hneg1_K(const DiscreteProblem& dp, const Vector& w) {
    return std::sqrt(std::max(0.0, w.dot(dp.apply_Ginv(w))));
}

double norm_L2_wKinv_factored(const DiscreteProblem& dp, const std::function<double(Vec2)>& g) {
    if (!dp.k_field)
        throw std::invalid_argument("norm_L2_wKinv_factored: problem has no stored coefficient field");
    const Grid& gr = dp.grid;
    auto K = dp.k_field;
    const double h = gr.h();
    const double w_gp = h * h / 4.0;
    double acc = 0.0;
    for (int cj = 0; cj < gr.ny() - 1; ++cj) {
        for (int ci = 0; ci < gr.nx() - 1; ++ci) {
            if (!gr.cell_active(ci, cj)) continue;
            Vec2 c0 = gr.node(ci, cj);
            for (int qa = 0; qa < 2; ++qa) {
                for (int qb = 0; qb < 2; ++qb) {
                    double xi = qa == 0 ? kGauss : 1.0 - kGauss;
                    double eta = qb == 0 ? kGauss : 1.0 - kGauss;
                    Vec2 p{c0.x + xi * h, c0.y + eta * h};
                    double gv = g(p);
                    acc += w_gp * std::abs(K(p)) * gv * gv;
                }
            }
        }
    }
    return std::sqrt(acc);
}

SolveResult solve_closed_dirichlet(const DiscreteProblem& dp, const Vector& F, double tol,
                                   int max_iterations) {
    const int n = static_cast<int>(F.size());
    if (n != dp.A.rows()) throw std::invalid_argument("solve_closed_dirichlet: size mismatch");
    if (max_iterations <= 0) max_iterations = std::max(20000, 20 * n);

    auto apply_N = [&](const Vector& v) -> Vector {
        return dp.A.transpose() * dp.apply_Ginv(dp.A * v);
    };

    Vector rhs = dp.A.transpose() * dp.apply_Ginv(F);
    double rhs_norm = rhs.norm();
    SolveResult out;
    out.u = Vector::Zero(n);
    if (rhs_norm == 0.0) {
        out.converged = true;
        out.residual_Hneg1 = norm_Hneg1_K(dp, -F);
        out.rel_normal_residual = 0.0;
        return out;
    }

    Vector r = rhs;
    Vector p = r;
    double rr = r.squaredNorm();
    for (int it = 0; it < max_iterations; ++it) {
        Vector Np = apply_N(p);
        double pNp = p.dot(Np);
        if (pNp <= 0.0) break;  // numerical semi-definiteness; stop with best iterate
        double alpha = rr / pNp;
        out.u += alpha * p;
        r -= alpha * Np;
        double rr_new = r.squaredNorm();
        out.cg_iterations = it + 1;
        if (std::sqrt(rr_new) <= tol * rhs_norm) {
            out.converged = true;
            break;
        }
        p = r + (rr_new / rr) * p;
        rr = rr_new;
    }

    Vector res = dp.A * out.u - F;
    out.residual_Hneg1 = norm_Hneg1_K(dp, res);
    out.rel_normal_residual = (dp.A.transpose() * dp.apply_Ginv(res)).norm() / rhs_norm;
    return out;
}

KernelProbe kernel_probe(const DiscreteProblem& dp, int iterations, double threshold,
                         std::uint64_t seed) {
    KernelProbe out;
    const int n = static_cast<int>(dp.A.rows());
    double a_scale = 0.0;
    for (int k = 0; k < dp.A.outerSize(); ++k)
        for (SpMat::InnerIterator it(dp.A, k); it; ++it)
            a_scale = std::max(a_scale, std::abs(it.value()));
    if (a_scale == 0.0) a_scale = 1.0;

    Eigen::SparseLU<SpMat> lu;
    lu.compute(dp.A);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    Vector z(n);
    for (int i = 0; i < n; ++i) z[i] = dist(rng);
    z.normalize();

    if (lu.info() != Eigen::Success) {
        // Factorization failed outright; treat as a kernel hit and return the
        // best witness inverse iteration on a shifted matrix can produce.
        SpMat shifted = dp.A;
        for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) += 1e-12 * a_scale;
        Eigen::SparseLU<SpMat> lu2;
        lu2.compute(shifted);
        if (lu2.info() == Eigen::Success) {
            for (int it = 0; it < iterations; ++it) z = lu2.solve(z).normalized();
        }
        out.kernel_found = true;
        out.smallest_ratio = (dp.A * z).norm() / a_scale;
        out.witness = z;
        return out;
    }

    for (int it = 0; it < iterations; ++it) {
        z = lu.solve(z);
        double nz = z.norm();
        if (!(nz > 0.0) || !std::isfinite(nz)) break;
        z /= nz;
    }
    out.smallest_ratio = (dp.A * z).norm() / a_scale;
    out.witness = z;
    out.kernel_found = out.smallest_ratio < threshold;
    return out;
}

namespace {

/// Random nodal field, zero within `margin_layers` lattice layers of the mask
/// frontier, then smoothed by a few averaging passes.
Vector random_bump_field(const Grid& g, std::mt19937_64& rng, int margin_layers = 2,
                         int smooth_passes = 8) {
    std::normal_distribution<double> dist;
    const int n = g.n_active();
    // Distance-to-frontier in lattice steps, computed by BFS from inactive rim.
    std::vector<int> depth(n, 0);
    bool changed = true;
    int level = 0;
    std::vector<int> cur;
    for (int k = 0; k < n; ++k) {
        auto [i, j] = g.active_nodes()[k];
        bool frontier = false;
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int q = 0; q < 4; ++q)
            if (g.node_index(i + di[q], j + dj[q]) < 0) frontier = true;
        depth[k] = frontier ? 1 : 0;
    }
    while (changed && level < margin_layers + 1) {
        changed = false;
        ++level;
        for (int k = 0; k < n; ++k) {
            if (depth[k] != 0) continue;
            auto [i, j] = g.active_nodes()[k];
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int q = 0; q < 4; ++q) {
                int idx = g.node_index(i + di[q], j + dj[q]);
                if (idx >= 0 && depth[idx] == level) {
                    depth[k] = level + 1;
                    changed = true;
                    break;
                }
            }
        }
    }

    Vector u(n);
    for (int k = 0; k < n; ++k)
        u[k] = (depth[k] == 0 || depth[k] > margin_layers) ? dist(rng) : 0.0;

    for (int pass = 0; pass < smooth_passes; ++pass) {
        Vector s = u;
        for (int k = 0; k < n; ++k) {
            auto [i, j] = g.active_nodes()[k];
            double acc = u[k];
            int cnt = 1;
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int q = 0; q < 4; ++q) {
                int idx = g.node_index(i + di[q], j + dj[q]);
                if (idx >= 0) {
                    acc += u[idx];
                    ++cnt;
                }
            }
            s[k] = acc / cnt;
        }
        u = s;
        // Re-impose the margin so smoothing does not leak to the frontier.
        for (int k = 0; k < n; ++k)
            if (depth[k] != 0 && depth[k] <= margin_layers) u[k] = 0.0;
    }
    return u;
}

}  // namespace

Lemma1Estimate estimate_lemma1_constant(const DiscreteProblem& dp, int n_trials,
                                        std::uint64_t seed) {
    if (n_trials < 1) throw std::invalid_argument("estimate_lemma1_constant: n_trials >= 1");
    Lemma1Estimate out;
    out.n_trials = n_trials;
    std::mt19937_64 rng(seed);
    double sum = 0.0;
    double a_scale = 0.0;
    for (int k = 0; k < dp.A.outerSize(); ++k)
        for (SpMat::InnerIterator it(dp.A, k); it; ++it)
            a_scale = std::max(a_scale, std::abs(it.value()));
    for (int t = 0; t < n_trials; ++t) {
        Vector u = random_bump_field(dp.grid, rng);
        double num = norm_L2_wK(dp, u);
        if (num == 0.0) continue;
        Vector Au = dp.A * u;
        double den = norm_Hneg1_K(dp, Au);
        if (!(den > 1e-14 * a_scale * u.norm()))
            throw std::runtime_error(
                "estimate_lemma1_constant: A u vanished for a nonzero trial field "
                "(discrete kernel; uniqueness failure witness)");
        double ratio = num / den;
        sum += ratio;
        if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            out.maximizer = u;
        }
    }
    out.mean_ratio = sum / n_trials;
    return out;
}

double lemma1_sup_ratio_eigen(const DiscreteProblem& dp, double tol, int max_iterations) {
    const int n = static_cast<int>(dp.A.rows());
    auto apply_N = [&](const Vector& v) -> Vector {
        return dp.A.transpose() * dp.apply_Ginv(dp.A * v);
    };
    // Inner CG solve of N x = b.
    auto solve_N = [&](const Vector& b) -> Vector {
        Vector x = Vector::Zero(n);
        Vector r = b;
        Vector p = r;
        double rr = r.squaredNorm();
        double b_norm = std::sqrt(rr);
        if (b_norm == 0.0) return x;
        for (int it = 0; it < std::max(4000, 10 * n); ++it) {
            Vector Np = apply_N(p);
            double pNp = p.dot(Np);
            if (pNp <= 0.0)
                throw std::runtime_error("lemma1_sup_ratio_eigen: normal operator not positive "
                                         "(discrete kernel; uniqueness failure witness)");
            double alpha = rr / pNp;
            x += alpha * p;
            r -= alpha * Np;
            double rr_new = r.squaredNorm();
            if (std::sqrt(rr_new) <= 1e-12 * b_norm) break;
            p = r + (rr_new / rr) * p;
            rr = rr_new;
        }
        return x;
    };

    Vector z = Vector::Ones(n).normalized();
    double lambda = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        Vector w = solve_N(dp.Mw * z);
        double nw = w.norm();
        if (!(nw > 0.0)) break;
        w /= nw;
        double num = w.dot(dp.Mw * w);
        double den = w.dot(apply_N(w));
        double lambda_new = num / den;
        bool done = std::abs(lambda_new - lambda) <= tol * std::max(1.0, std::abs(lambda_new));
        lambda = lambda_new;
        z = w;
        if (done && it > 2) break;
    }
    return std::sqrt(std::max(0.0, lambda));
}

PoincareEstimate estimate_poincare_constant(const DiscreteProblem& dp, double tol,
                                            int max_iterations) {
    PoincareEstimate out;
    const int n = static_cast<int>(dp.G.rows());
    Vector z = Vector::Ones(n).normalized();
    double lambda = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        Vector w = dp.apply_Ginv(dp.MI * z);
        double nw = w.norm();
        if (!(nw > 0.0)) break;
        w /= nw;
        double num = w.dot(dp.G * w);
        double den = w.dot(dp.MI * w);
        double lambda_new = num / den;
        out.iterations = it + 1;
        if (std::abs(lambda_new - lambda) <= tol * std::max(1.0, std::abs(lambda_new)) && it > 2) {
            lambda = lambda_new;
            out.converged = true;
            z = w;
            break;
        }
        lambda = lambda_new;
        z = w;
    }
    if (!out.converged)
        throw std::runtime_error("estimate_poincare_constant: inverse iteration did not converge");
    out.lambda = lambda;
    out.inv_lambda = lambda > 0.0 ? 1.0 / lambda : 0.0;
    return out;
}

std::vector<ConvergenceRow> convergence_study(const Domain& dom, const TypeChangeCoefficient& tc,
                                              const ManufacturedSolution& ms,
                                              std::span<const double> hs) {
    std::vector<ConvergenceRow> rows;
    for (double h : hs) {
        DiscreteProblem dp = assemble(dom, tc, h);
        Vector F = load_vector(dp, ms.forcing);
        SolveResult sol = solve_closed_dirichlet(dp, F);
        Vector ustar(dp.grid.n_active());
        for (int k = 0; k < dp.grid.n_active(); ++k) {
            auto [i, j] = dp.grid.active_nodes()[k];
            ustar[k] = ms.value(dp.grid.node(i, j));
        }
        ConvergenceRow row;
        row.h = h;
        row.n_dofs = dp.grid.n_active();
        row.err_L2_wK = norm_L2_wK(dp, sol.u - ustar);
        row.residual_Hneg1 = sol.residual_Hneg1;
        if (!rows.empty() && row.err_L2_wK > 0.0 && rows.back().err_L2_wK > 0.0)
            row.rate = std::log2(rows.back().err_L2_wK / row.err_L2_wK) /
                       std::log2(rows.back().h / row.h);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace mtp
