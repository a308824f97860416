#include "tcmdp/error.hpp"
#include "tcmdp/mdp_sim.hpp"

#include <cmath>
#include <string>

namespace tcmdp {

void MinimaxInstance::validate() const {
    if (d < 2 || d % 2 != 0) {
        throw DomainError("minimax instance needs an even d >= 2");
    }
    if (static_cast<int>(sigma.size()) != d / 2) {
        throw DomainError("sigma must have d/2 entries");
    }
    for (int s : sigma) {
        if (s != 1 && s != -1) {
            throw DomainError("sigma entries must be +1 or -1");
        }
    }
    if (!(epsilon >= 0.0) || !(p_star1 > 0.0)) {
        throw DomainError("minimax instance needs epsilon >= 0 and p_star1 > 0");
    }
    if (!(p_star2() < 1.0 / (d + 2))) {
        throw DomainError("p_star2 = " + std::to_string(p_star2()) + " must be below 1/(d+2)");
    }
    if (1.0 - p_star1 - 16.0 * epsilon < 0.0) {
        throw DomainError("epsilon too large: perturbed eta has a negative entry");
    }
}

std::vector<double> minimax_eta(const MinimaxInstance& inst, int control) {
    inst.validate();
    if (control != 1 && control != 2) {
        throw DomainError("control must be 1 or 2");
    }
    const double ps = inst.p_star(control);
    std::vector<double> eta(inst.d, (1.0 - ps) / inst.d);
    if (control == 1) {
        for (int j = 0; j < inst.d / 2; ++j) {
            const double shift = 16.0 * inst.sigma[j] * inst.epsilon / inst.d;
            eta[2 * j] += shift;
            eta[2 * j + 1] -= shift;
        }
    }
    return eta;
}

Eigen::MatrixXd minimax_matrix(int d, double p_star, const std::vector<double>& eta) {
    if (static_cast<int>(eta.size()) != d) {
        throw DomainError("eta must have d entries");
    }
    Eigen::MatrixXd m(d + 1, d + 1);
    const double p = (1.0 - p_star) / d;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            m(i, j) = p;
        }
        m(i, d) = p_star;
    }
    for (int j = 0; j < d; ++j) {
        m(d, j) = eta[j];
    }
    m(d, d) = p_star;
    for (int i = 0; i <= d; ++i) {
        for (int j = 0; j <= d; ++j) {
            if (m(i, j) < 0.0) {
                throw DomainError("transition matrix has a negative entry");
            }
        }
    }
    return m;
}

Eigen::MatrixXd minimax_instance(const MinimaxInstance& inst, int control) {
    return minimax_matrix(inst.d, inst.p_star(control), minimax_eta(inst, control));
}

Eigen::MatrixXd minimax_null(const MinimaxInstance& inst, int control) {
    inst.validate();
    const double ps = inst.p_star(control);
    return minimax_matrix(inst.d, ps, std::vector<double>(inst.d, (1.0 - ps) / inst.d));
}

Eigen::VectorXd minimax_stationary(int d, double p_star, const std::vector<double>& eta) {
    Eigen::VectorXd pi(d + 1);
    for (int k = 0; k < d; ++k) {
        pi(k) = (1.0 - p_star) * (1.0 - p_star) / d + eta[k] * p_star;
    }
    pi(d) = p_star;
    return pi;
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition) {
    const auto k = transition.rows();
    if (k == 0 || transition.cols() != k) {
        throw DomainError("stationary_distribution needs a square matrix");
    }
    // solve (M^T - I) pi = 0 with the last equation replaced by sum(pi) = 1
    Eigen::MatrixXd a = transition.transpose() - Eigen::MatrixXd::Identity(k, k);
    a.row(k - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
    b(k - 1) = 1.0;
    Eigen::VectorXd pi = a.fullPivLu().solve(b);
    if (!pi.allFinite()) {
        throw NumericError("stationary distribution solve failed");
    }
    return pi;
}

std::vector<int> simulate_finite_chain(const Eigen::MatrixXd& transition, std::size_t n,
                                       std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto k = transition.rows();
    auto draw = [&](Eigen::Index row) {
        const double u = unit(rng);
        double acc = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            acc += transition(row, j);
            if (u < acc) {
                return static_cast<int>(j);
            }
        }
        return static_cast<int>(k - 1);
    };
    std::vector<int> path;
    path.reserve(n + 1);
    path.push_back(draw(0));
    for (std::size_t i = 0; i < n; ++i) {
        path.push_back(draw(path.back()));
    }
    return path;
}

} // namespace tcmdp
