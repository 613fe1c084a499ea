#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mwk/complexfun.hpp"
#include "mwk/policy.hpp"

namespace mwk {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

enum class QuadRule { GaussLegendreComposite, LogGauss };

// Composite quadrature grid on [x_min, x_max]. The affine rule uses panels with
// edges at x_max 2^{-k}, geometrically refined toward zero; LogGauss applies
// Gauss-Legendre in the log variable.
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double x_min = 0.0, x_max = 0.0;
    QuadRule rule = QuadRule::GaussLegendreComposite;

    int size() const { return static_cast<int>(nodes.size()); }

    static std::vector<double> panel_edges(double x_min, double x_max) {
        if (!(x_min > 0.0) || !(x_max > x_min))
            throw std::invalid_argument("QuadratureGrid: need 0 < x_min < x_max");
        std::vector<double> edges{x_max};
        double e = x_max;
        while (e / 2.0 > x_min) {
            e /= 2.0;
            edges.push_back(e);
        }
        edges.push_back(x_min);
        std::reverse(edges.begin(), edges.end());
        return edges;
    }

    static QuadratureGrid composite(double x_min, double x_max, int target_nodes) {
        auto edges = panel_edges(x_min, x_max);
        int npanels = static_cast<int>(edges.size()) - 1;
        int per = std::max(2, (target_nodes + npanels - 1) / npanels);
        std::vector<double> gx, gw;
        gauss_legendre(per, gx, gw);
        QuadratureGrid g;
        g.x_min = x_min;
        g.x_max = x_max;
        g.rule = QuadRule::GaussLegendreComposite;
        for (int k = 0; k < npanels; ++k) {
            double a = edges[k], b = edges[k + 1];
            for (int q = 0; q < per; ++q) {
                g.nodes.push_back(0.5 * (b - a) * gx[q] + 0.5 * (a + b));
                g.weights.push_back(0.5 * (b - a) * gw[q]);
            }
        }
        return g;
    }

    static QuadratureGrid log_gauss(double x_min, double x_max, int target_nodes) {
        if (!(x_min > 0.0) || !(x_max > x_min))
            throw std::invalid_argument("QuadratureGrid: need 0 < x_min < x_max");
        std::vector<double> gx, gw;
        gauss_legendre(std::max(2, target_nodes), gx, gw);
        QuadratureGrid g;
        g.x_min = x_min;
        g.x_max = x_max;
        g.rule = QuadRule::LogGauss;
        double lo = std::log(x_min), hi = std::log(x_max);
        for (std::size_t q = 0; q < gx.size(); ++q) {
            double u = 0.5 * (hi - lo) * gx[q] + 0.5 * (hi + lo);
            g.nodes.push_back(std::exp(u));
            g.weights.push_back(0.5 * (hi - lo) * gw[q] * std::exp(u));
        }
        return g;
    }
};

}  // namespace mwk
