#include "halfline/model.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "halfline/errors.hpp"

namespace halfline {

TailDensity::TailDensity(DensityFamily family, double alpha, double y0)
    : family_(family), alpha_(alpha), y0_(y0), neg_inv_alpha_(-1.0 / alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("TailDensity: alpha must be > 0");
    if (family == DensityFamily::cutoff_pareto && !(y0 > 0.0))
        throw std::domain_error("TailDensity: cutoff y0 must be > 0");
}

double TailDensity::density(double y) const {
    if (!(y >= 0.0)) return 0.0;
    switch (family_) {
        case DensityFamily::shifted_pareto:
            return alpha_ * std::pow(1.0 + y, -1.0 - alpha_);
        case DensityFamily::cutoff_pareto:
            if (y <= y0_) return 0.0;
            return alpha_ * std::pow(y0_, alpha_) * std::pow(y, -1.0 - alpha_);
    }
    return 0.0;
}

double TailDensity::tail(double x) const {
    if (x <= 0.0) return 1.0;
    switch (family_) {
        case DensityFamily::shifted_pareto:
            return std::pow(1.0 + x, -alpha_);
        case DensityFamily::cutoff_pareto:
            if (x <= y0_) return 1.0;
            return std::pow(y0_ / x, alpha_);
    }
    return 0.0;
}

double TailDensity::quantile(double u) const {
    if (!(u > 0.0) || !(u < 1.0)) throw std::domain_error("quantile: u must be in (0,1)");
    switch (family_) {
        case DensityFamily::shifted_pareto:
            // (1+x)^{-alpha} = u  =>  x = u^{-1/alpha} - 1
            return std::exp(neg_inv_alpha_ * std::log(u)) - 1.0;
        case DensityFamily::cutoff_pareto:
            return y0_ * std::exp(neg_inv_alpha_ * std::log(u));
    }
    throw std::domain_error("quantile: unknown family");
}

double TailDensity::c_const() const {
    switch (family_) {
        case DensityFamily::shifted_pareto: return alpha_;
        case DensityFamily::cutoff_pareto: return alpha_ * std::pow(y0_, alpha_);
    }
    return 0.0;
}

double TailDensity::delta() const {
    switch (family_) {
        case DensityFamily::shifted_pareto: return 1.0;
        case DensityFamily::cutoff_pareto: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

namespace {

bool strongly_connected(const Eigen::MatrixXd& P) {
    const int n = static_cast<int>(P.rows());
    // reachability by BFS from node 0, forward and backward; exact zero test
    auto reachable = [&](bool forward) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack = {0};
        seen[0] = true;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j) {
                const double p = forward ? P(i, j) : P(j, i);
                if (p > 0.0 && !seen[j]) {
                    seen[j] = true;
                    stack.push_back(j);
                }
            }
        }
        for (bool s : seen)
            if (!s) return false;
        return true;
    };
    return reachable(true) && reachable(false);
}

}  // namespace

ComplexModel validate(const RawModel& raw) {
    std::vector<std::string> violations;
    const std::size_t n = raw.branches.size();
    if (n == 0) violations.push_back("model has no branches");
    if (n > 64) violations.push_back("model exceeds the 64-branch cap");

    std::vector<BranchSpec> branches;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& rb = raw.branches[i];
        BranchKind kind = BranchKind::one_sided;
        if (rb.kind == "one_sided") kind = BranchKind::one_sided;
        else if (rb.kind == "symmetric") kind = BranchKind::symmetric;
        else violations.push_back("branch " + rb.id + ": unknown kind '" + rb.kind + "'");

        DensityFamily fam = DensityFamily::shifted_pareto;
        if (rb.family == "shifted_pareto") fam = DensityFamily::shifted_pareto;
        else if (rb.family == "cutoff_pareto") fam = DensityFamily::cutoff_pareto;
        else violations.push_back("branch " + rb.id + ": unknown family '" + rb.family + "'");

        if (!(rb.alpha > 0.0))
            violations.push_back("branch " + rb.id + ": alpha must be > 0");
        if (fam == DensityFamily::cutoff_pareto && !(rb.y0 > 0.0))
            violations.push_back("branch " + rb.id + ": y0 must be > 0");

        if (violations.empty())
            branches.push_back({rb.id, kind, TailDensity(fam, rb.alpha, rb.y0)});
    }

    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<int>(n), static_cast<int>(n));
    if (raw.routing.size() != n) {
        violations.push_back("routing matrix must be " + std::to_string(n) + "x" +
                             std::to_string(n));
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (raw.routing[i].size() != n) {
                violations.push_back("routing row " + std::to_string(i) + " has wrong length");
                continue;
            }
            double row_sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p = raw.routing[i][j];
                if (!(p >= 0.0))
                    violations.push_back("routing entry (" + std::to_string(i) + "," +
                                         std::to_string(j) + ") is negative");
                P(static_cast<int>(i), static_cast<int>(j)) = p;
                row_sum += p;
            }
            if (std::fabs(row_sum - 1.0) > 1e-12)
                violations.push_back("routing row " + std::to_string(i) + " not stochastic (sums to " +
                                     std::to_string(row_sum) + ")");
        }
        if (violations.empty() && !strongly_connected(P))
            violations.push_back("routing graph is reducible (not strongly connected)");
    }

    if (!violations.empty()) throw validation_error(std::move(violations));
    return ComplexModel(std::move(branches), std::move(P));
}

StationaryDistribution stationary_distribution(const ComplexModel& model) {
    const int n = model.size();
    // (P^T - I) mu = 0 with the last equation replaced by the normalization.
    Eigen::MatrixXd A = model.routing().transpose() - Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    A.row(n - 1).setOnes();
    rhs(n - 1) = 1.0;
    Eigen::VectorXd mu = A.fullPivLu().solve(rhs);

    const double residual =
        ((model.routing().transpose() * mu - mu).cwiseAbs()).maxCoeff();
    if (!std::isfinite(residual) || residual > 1e-12)
        throw numeric_failure("stationary_distribution: solve residual too large", 0.0, residual);
    for (int k = 0; k < n; ++k) {
        if (!(mu(k) > 0.0))
            throw numeric_failure("stationary_distribution: non-positive component", mu(k), 0.0);
    }
    return {std::move(mu)};
}

RawModel parse_raw_model(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    RawModel raw;
    for (const auto& jb : j.at("branches")) {
        RawModel::RawBranch rb;
        rb.id = jb.value("id", std::string("branch") + std::to_string(raw.branches.size()));
        rb.kind = jb.at("kind").get<std::string>();
        rb.family = jb.at("family").get<std::string>();
        rb.alpha = jb.at("alpha").get<double>();
        rb.y0 = jb.value("y0", 1.0);
        raw.branches.push_back(std::move(rb));
    }
    raw.routing = j.at("routing").get<std::vector<std::vector<double>>>();
    return raw;
}

RawModel load_raw_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_raw_model(ss.str());
}

ComplexModel load_model(const std::string& path) { return validate(load_raw_model(path)); }

std::string raw_model_to_json(const RawModel& raw) {
    nlohmann::json j;
    j["branches"] = nlohmann::json::array();
    for (const auto& rb : raw.branches) {
        nlohmann::json jb{{"id", rb.id}, {"kind", rb.kind}, {"family", rb.family},
                          {"alpha", rb.alpha}};
        if (rb.family == "cutoff_pareto") jb["y0"] = rb.y0;
        j["branches"].push_back(jb);
    }
    j["routing"] = raw.routing;
    return j.dump(2);
}

}  // namespace halfline
