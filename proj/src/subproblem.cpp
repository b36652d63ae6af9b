#include "vqeopt/subproblem.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace vqeopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vertex {
    double x = 0.0, y = 0.0, f = kInf;
};

double dist(const Vertex& a, const Vertex& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace

// Nelder-Mead direct search with a quadratic-model acceleration step: every
// other iteration a quadratic surrogate is fit through the best evaluated
// points and its minimizer is tried as a candidate. The jump is exact for
// quadratic objectives and is simply rejected when the surrogate does not
// improve, so the direct-search behavior is preserved on rough landscapes.
SubproblemResult solve_subproblem(
    const std::function<double(double, double)>& objective, double alpha0,
    double beta0, int max_evals) {
    int evals = 0;
    Vertex best{alpha0, beta0, kInf};
    std::vector<Vertex> history;

    auto eval = [&](double x, double y) -> double {
        ++evals;
        double f = objective(x, y);
        if (!std::isfinite(f)) {
            f = kInf;
        } else {
            history.push_back({x, y, f});
        }
        if (f < best.f) best = {x, y, f};
        return f;
    };

    const double f0 = eval(alpha0, beta0);
    if (!std::isfinite(f0)) {
        return {alpha0, beta0, false, evals};
    }

    // Initial simplex around the start point.
    const double hx = std::max(0.5 * std::abs(alpha0), 0.25);
    const double hy = std::max(0.5 * std::abs(beta0), 0.25);
    std::array<Vertex, 3> v;
    v[0] = {alpha0, beta0, f0};
    if (evals < max_evals) {
        v[1] = {alpha0 + hx, beta0, eval(alpha0 + hx, beta0)};
    }
    if (evals < max_evals) {
        v[2] = {alpha0, beta0 + hy, eval(alpha0, beta0 + hy)};
    }

    constexpr double rho = 1.0, chi = 2.0, gamma = 0.5, sigma = 0.5;

    // Returns true when the accepted model minimizer stopped moving, i.e.
    // the search has converged.
    auto model_jump = [&]() -> bool {
        if (history.size() < 6 || evals >= max_evals) return false;
        std::vector<Vertex> pts = history;
        std::sort(pts.begin(), pts.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        const int n = std::min<int>(10, static_cast<int>(pts.size()));
        Eigen::MatrixXd a(n, 6);
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) {
            const double px = pts[static_cast<std::size_t>(i)].x - best.x;
            const double py = pts[static_cast<std::size_t>(i)].y - best.y;
            a.row(i) << 1.0, px, py, 0.5 * px * px, px * py, 0.5 * py * py;
            b(i) = pts[static_cast<std::size_t>(i)].f;
        }
        const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
        const double gx = c(1), gy = c(2);
        const double hxx = c(3), hxy = c(4), hyy = c(5);
        const double det = hxx * hyy - hxy * hxy;
        if (!(det > 1e-14 && hxx > 0.0)) return false; // model not convex
        const double sx = -(hyy * gx - hxy * gy) / det;
        const double sy = -(-hxy * gx + hxx * gy) / det;
        if (!std::isfinite(sx) || !std::isfinite(sy)) return false;
        const double spread = std::max(
            {dist(v[0], v[1]), dist(v[0], v[2]), dist(v[1], v[2])});
        if (std::hypot(sx, sy) > 50.0 * (spread + 1e-12)) return false;
        const Vertex before = best;
        const double nx = before.x + sx;
        const double ny = before.y + sy;
        const double fn = eval(nx, ny);
        if (fn < before.f) {
            std::sort(v.begin(), v.end(),
                      [](const Vertex& p, const Vertex& q) { return p.f < q.f; });
            v[2] = {nx, ny, fn};
            return std::hypot(nx - before.x, ny - before.y) <
                   1e-9 * (1.0 + std::hypot(nx, ny));
        }
        return false;
    };

    int iter = 0;
    while (evals < max_evals) {
        std::sort(v.begin(), v.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });

        const double fspread = v[2].f - v[0].f;
        const double diameter = std::max(
            {dist(v[0], v[1]), dist(v[0], v[2]), dist(v[1], v[2])});
        if (fspread <= 1e-13 * (1.0 + std::abs(v[0].f)) ||
            diameter <= 1e-8 * (1.0 + std::hypot(v[0].x, v[0].y))) {
            break;
        }
        if (++iter % 2 == 0) {
            if (model_jump()) break;
            continue;
        }

        const double cx = 0.5 * (v[0].x + v[1].x);
        const double cy = 0.5 * (v[0].y + v[1].y);
        const double rx = cx + rho * (cx - v[2].x);
        const double ry = cy + rho * (cy - v[2].y);
        const double fr = eval(rx, ry);

        if (fr < v[0].f) {
            if (evals < max_evals) {
                const double ex = cx + chi * (rx - cx);
                const double ey = cy + chi * (ry - cy);
                const double fe = eval(ex, ey);
                v[2] = fe < fr ? Vertex{ex, ey, fe} : Vertex{rx, ry, fr};
            } else {
                v[2] = {rx, ry, fr};
            }
        } else if (fr < v[1].f) {
            v[2] = {rx, ry, fr};
        } else if (evals < max_evals) {
            if (fr < v[2].f) {
                const double ox = cx + gamma * (rx - cx);
                const double oy = cy + gamma * (ry - cy);
                const double fo = eval(ox, oy);
                if (fo <= fr) {
                    v[2] = {ox, oy, fo};
                    continue;
                }
            } else {
                const double ix = cx - gamma * (cx - v[2].x);
                const double iy = cy - gamma * (cy - v[2].y);
                const double fi = eval(ix, iy);
                if (fi < v[2].f) {
                    v[2] = {ix, iy, fi};
                    continue;
                }
            }
            // Shrink toward the best vertex.
            for (int k : {1, 2}) {
                if (evals >= max_evals) break;
                v[k].x = v[0].x + sigma * (v[k].x - v[0].x);
                v[k].y = v[0].y + sigma * (v[k].y - v[0].y);
                v[k].f = eval(v[k].x, v[k].y);
            }
        }
    }

    if (best.f < f0 && std::isfinite(best.f)) {
        return {best.x, best.y, true, evals};
    }
    return {alpha0, beta0, false, evals};
}

} // namespace vqeopt
