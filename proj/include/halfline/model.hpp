#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace halfline {

enum class BranchKind { one_sided, symmetric };
enum class DensityFamily { shifted_pareto, cutoff_pareto };

/// A heavy-tailed jump-magnitude density v(y) = c(y) y^{-1-alpha} on
/// (0, inf) with c(y) -> c_const at a polynomial rate.
///
/// Two families ship:
///   shifted_pareto: v(y) = alpha (1+y)^{-1-alpha}       (c = alpha, rate 1)
///   cutoff_pareto : v(y) = alpha y0^alpha y^{-1-alpha} 1{y > y0}
///                                              (c = alpha y0^alpha, exact)
class TailDensity {
public:
    TailDensity(DensityFamily family, double alpha, double y0 = 1.0);

    DensityFamily family() const { return family_; }
    double alpha() const { return alpha_; }
    double y0() const { return y0_; }

    /// Density value at y > 0.
    double density(double y) const;

    /// Upper tail T(x) = int_x^inf v(y) dy, exact closed form.
    double tail(double x) const;

    /// Tail quantile: the x > 0 with tail(x) = u, for u in (0,1).
    double quantile(double u) const;

    /// Limit constant c of c(y).
    double c_const() const;

    /// Polynomial approach rate delta in c(y) = c + O(y^{-delta}).
    double delta() const;

    /// Whether the approach of c(y) to its limit has a polynomial rate
    /// (true for both built-in families).
    bool dplus() const { return true; }

private:
    DensityFamily family_;
    double alpha_;
    double y0_;
    double neg_inv_alpha_;  // cached for the sampling hot path
};

struct BranchSpec {
    std::string id;
    BranchKind kind;
    TailDensity density;

    /// 1 for one-sided branches, 1/2 for symmetric ones.
    double chi() const { return kind == BranchKind::one_sided ? 1.0 : 0.5; }
};

/// Unvalidated model description, as read from a config file.
struct RawModel {
    struct RawBranch {
        std::string id;
        std::string kind;
        std::string family;
        double alpha = 0.0;
        double y0 = 1.0;
    };
    std::vector<RawBranch> branches;
    std::vector<std::vector<double>> routing;
};

/// Validated and immutable walk specification: branch set plus the
/// routing matrix used when the walk crosses the origin.
class ComplexModel {
public:
    const std::vector<BranchSpec>& branches() const { return branches_; }
    const Eigen::MatrixXd& routing() const { return routing_; }
    int size() const { return static_cast<int>(branches_.size()); }
    const BranchSpec& branch(int i) const { return branches_.at(i); }

    friend ComplexModel validate(const RawModel& raw);

private:
    ComplexModel(std::vector<BranchSpec> branches, Eigen::MatrixXd routing)
        : branches_(std::move(branches)), routing_(std::move(routing)) {}

    std::vector<BranchSpec> branches_;
    Eigen::MatrixXd routing_;
};

/// Checks every structural invariant (stochastic rows, irreducibility,
/// positive tail exponents, known families, size cap of 64) and returns
/// the immutable model. Throws validation_error listing all violations.
ComplexModel validate(const RawModel& raw);

struct StationaryDistribution {
    Eigen::VectorXd mu;
};

/// Invariant distribution of the routing matrix: mu^T P = mu^T,
/// sum mu = 1, all entries positive. Residual below 1e-12.
StationaryDistribution stationary_distribution(const ComplexModel& model);

/// JSON round trip for model config files.
RawModel parse_raw_model(const std::string& json_text);
RawModel load_raw_model(const std::string& path);
ComplexModel load_model(const std::string& path);
std::string raw_model_to_json(const RawModel& raw);

}  // namespace halfline
