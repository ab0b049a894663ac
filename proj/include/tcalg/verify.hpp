#pragma once

// Verification suite: one check per operator identity, each mapping to a
// residual and a tolerance, assembled into a report with three output formats.

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

#include "tcalg/blaschke.hpp"
#include "tcalg/circle.hpp"
#include "tcalg/config.hpp"
#include "tcalg/dynamics.hpp"
#include "tcalg/hardy.hpp"
#include "tcalg/tmbasis.hpp"
#include "tcalg/transfer.hpp"

namespace tcalg {

inline constexpr std::string_view library_version = "1.0.0";

/// "le": pass iff residual <= tolerance. "gt": pass iff residual > tolerance
/// (used for positivity margins).
enum class Relation { AtMost, Above };

struct CheckInfo {
    std::string_view id;
    std::string_view statement;
    Relation relation;
    double tolerance;
};

/// Every check the suite knows, in execution order.
inline constexpr std::array<CheckInfo, 18> check_manifest{{
    {"log_derivative_identity", "zR'/R equals 1 + sum (1-|z_k|^2)/|z-z_k|^2 on the circle", Relation::AtMost, 1e-10},
    {"weight_positivity", "h = nR/(zR') is positive on the circle", Relation::Above, 0.0},
    {"partial_fraction_sum", "partial-fraction weights R/(zR') over R^{-1}(w) sum to one", Relation::AtMost, 1e-10},
    {"transfer_unit", "L_R(1) = 1 and L_R(R^l) = w^l", Relation::AtMost, 1e-10},
    {"transfer_covariance", "L_R((a o R) b) = a L_R(b)", Relation::AtMost, 1e-10},
    {"adjoint_matrix", "matrix of L_R equals the adjoint of C_R", Relation::AtMost, 1e-8},
    {"composition_isometry", "C_R is an isometry", Relation::AtMost, 1e-8},
    {"covariance_identity", "C_R^* T_a C_R = T_{L_R(a)}", Relation::AtMost, 1e-6},
    {"commutation_identity", "C_R T_b = T_{b o R} C_R for analytic b", Relation::AtMost, 1e-8},
    {"tm_gram", "Takenaka-Malmquist system is orthonormal", Relation::AtMost, 1e-8},
    {"tm_factorization", "e_{kn+l} = Q_l R_l R^k", Relation::AtMost, 1e-10},
    {"cuntz_relations", "W_k = T_{Q_{k-1}R_{k-1}} C_R satisfy the Cuntz relations", Relation::AtMost, 1e-6},
    {"generator_relations", "V_xi^* V_eta = T_{(xi|eta)} modulo compacts (tail profile)", Relation::AtMost, 1e-6},
    {"lift_expanding", "psi' > 1 on the circle", Relation::Above, 0.0},
    {"lift_winding", "psi increases by 2 pi n over one period", Relation::AtMost, 1e-8},
    {"branch_preimages", "branch inverses sigma_k reproduce the preimages of e^{it}", Relation::AtMost, 1e-8},
    {"conjugacy", "R on the circle is conjugate to z^n", Relation::AtMost, 1e-6},
    {"k_groups", "K_0 = Z + Z/(n-1)Z and K_1 = Z", Relation::AtMost, 0.5},
}};

/// Extra check run only for R = lambda z^n.
inline constexpr CheckInfo power_map_check{"power_map_relations", "U W_k = W_{k+1} and U W_n = W_1 U for z^n",
                                           Relation::AtMost, 1e-14};

inline const CheckInfo* find_check(std::string_view id) {
    for (const auto& c : check_manifest)
        if (c.id == id) return &c;
    if (power_map_check.id == id) return &power_map_check;
    return nullptr;
}

/// Ids a run over the given product reports, in order.
inline std::vector<std::string> expected_check_ids(const BlaschkeProduct& b) {
    std::vector<std::string> ids;
    for (const auto& c : check_manifest) ids.emplace_back(c.id);
    if (b.is_monomial()) ids.emplace_back(power_map_check.id);
    return ids;
}

inline void validate(const RunConfig& c) {
    if (c.truncation < 2) throw ConfigError("truncation N must be at least 2");
    if (c.grid < 4 || !std::has_single_bit(static_cast<unsigned>(c.grid)))
        throw ConfigError("grid M must be a power of two >= 4");
    if (c.corner < 1 || 4 * c.corner > c.truncation) throw ConfigError("corner m must satisfy 1 <= m <= N/4");
    if (4 * c.truncation > c.grid) throw ConfigError("truncation N must satisfy N <= M/4");
    if (c.truncation < 32) throw ConfigError("truncation N must be at least 32 for the tail-profile cuts");
    if (c.basis_count < 1) throw ConfigError("basis count L must be positive");
    if (c.lift_samples < 256) throw ConfigError("lift_samples must be at least 256");
    if (c.symbol_band < 0) throw ConfigError("symbol_band must be nonnegative");
    if (c.conjugacy_max_iterations < 1) throw ConfigError("conjugacy_max_iterations must be positive");
    for (const auto& [name, tol] : c.tolerances) {
        if (!find_check(name)) throw ConfigError("tolerance for unknown check '" + name + "'");
        if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("tolerance for '" + name + "' must be > 0");
    }
    try {
        (void)c.product();
    } catch (const BlaschkeError& e) {
        throw ConfigError(std::string("invalid Blaschke product: ") + e.what());
    }
}

struct CheckRecord {
    std::string id;
    std::string statement;
    Relation relation = Relation::AtMost;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    bool errored = false;
    std::string message;
    double runtime_ms = 0.0; // not part of the canonical form
    std::map<std::string, double> extras;
};

struct VerificationReport {
    RunConfig config;
    std::map<std::string, std::string> environment;
    std::vector<CheckRecord> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; });
    }
    bool errored() const {
        return std::any_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.errored; });
    }
    const CheckRecord* find(std::string_view id) const {
        for (const auto& c : checks)
            if (c.id == id) return &c;
        return nullptr;
    }
};

namespace detail {

struct CheckContext {
    const RunConfig& config;
    BlaschkeProduct product;
    CircleGrid grid;
    Eigen::Index size;
    Eigen::Index corner;
};

struct CheckOutcome {
    double residual = 0.0;
    std::map<std::string, double> extras;
    bool extra_condition = true; // additional requirement beyond the residual comparison
    std::string message;
};

/// Per-check generator: independent of execution order.
inline std::mt19937_64 check_rng(const RunConfig& c, std::string_view id) {
    std::uint64_t h = 1469598103934665603ull; // FNV-1a, stable across platforms
    for (unsigned char ch : id) h = (h ^ ch) * 1099511628211ull;
    return std::mt19937_64(c.seed ^ h);
}

inline FourierSymbol random_symbol(std::mt19937_64& rng, int band, bool analytic) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FourierSymbol s(band);
    for (int k = analytic ? 0 : -band; k <= band; ++k) s[k] = cplx(u(rng), u(rng));
    return s;
}

inline std::vector<cplx> circle_targets(std::size_t count) {
    std::vector<cplx> out;
    out.reserve(count);
    for (std::size_t j = 0; j < count; ++j)
        out.push_back(unit(two_pi * (static_cast<double>(j) + 0.37) / static_cast<double>(count)));
    return out;
}

/// Coefficient mass of column m of C_R beyond row N is bounded by rho^{N - n m}.
inline double truncation_bound(const BlaschkeProduct& b, Eigen::Index size, Eigen::Index m) {
    const double rho = b.max_zero_modulus();
    if (rho == 0.0) return b.degree() * m < size ? 0.0 : 1.0;
    const double gap = static_cast<double>(size - b.degree() * m);
    return gap <= 0 ? 1.0 : std::pow(rho, gap);
}

inline CheckOutcome check_log_derivative(const CheckContext& ctx) {
    CheckOutcome out;
    double worst = 0.0, smallest = 1e300;
    for (std::size_t j = 0; j < 1024; ++j) {
        const double theta = two_pi * static_cast<double>(j) / 1024.0;
        const double sum = log_derivative_on_circle(ctx.product, theta);
        worst = std::max(worst, std::abs(log_derivative_quotient(ctx.product, theta) - sum));
        smallest = std::min(smallest, sum);
    }
    out.residual = worst;
    out.extras["min_log_derivative"] = smallest;
    return out;
}

inline CheckOutcome check_weight_positivity(const CheckContext& ctx) {
    CheckOutcome out;
    double lo = 1e300, hi = 0.0;
    for (std::size_t j = 0; j < ctx.grid.size(); ++j) {
        const double h = weight_h(ctx.product, ctx.grid.theta(j));
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    out.residual = lo;
    out.extras["max_h"] = hi;
    if (ctx.product.ill_conditioned()) out.extras["ill_conditioned"] = 1.0;
    return out;
}

inline CheckOutcome check_partial_fraction(const CheckContext& ctx) {
    CheckOutcome out;
    double sum_err = 0.0, weight_err = 0.0, res = 0.0, sep = 1e300;
    const double n = ctx.product.degree();
    for (cplx w : circle_targets(256)) {
        const auto pf = partial_fraction_weights(ctx.product, w);
        double s = 0.0;
        for (std::size_t l = 0; l < pf.weights.size(); ++l) {
            s += pf.weights[l];
            const double h = weight_h(ctx.product, std::arg(pf.preimages.points[l]));
            weight_err = std::max(weight_err, std::abs(pf.weights[l] - h / n));
            res = std::max(res, pf.preimages.residuals[l]);
        }
        sum_err = std::max(sum_err, std::abs(s - 1.0));
        sep = std::min(sep, pf.preimages.min_separation);
    }
    out.residual = std::max(sum_err, weight_err);
    out.extras["weight_sum_error"] = sum_err;
    out.extras["weight_vs_h_error"] = weight_err;
    out.extras["max_preimage_residual"] = res;
    out.extras["min_preimage_separation"] = sep;
    return out;
}

inline CheckOutcome check_transfer_unit(const CheckContext& ctx) {
    CheckOutcome out;
    const TransferOperator op(ctx.product);
    double unit_err = 0.0, power_err = 0.0;
    for (cplx w : circle_targets(256)) {
        unit_err = std::max(unit_err, std::abs(apply_pointwise(op, [](cplx) { return cplx(1.0); }, w) - 1.0));
        for (int l = 1; l <= 8; ++l) {
            const auto& r = ctx.product;
            const cplx v = apply_pointwise(op, [&](cplx z) { return std::pow(r(z), l); }, w);
            power_err = std::max(power_err, std::abs(v - std::pow(w, l)));
        }
    }
    out.residual = std::max(unit_err, power_err);
    out.extras["unit_error"] = unit_err;
    out.extras["power_error"] = power_err;
    return out;
}

inline CheckOutcome check_transfer_covariance(const CheckContext& ctx) {
    CheckOutcome out;
    auto rng = check_rng(ctx.config, "transfer_covariance");
    const TransferOperator op(ctx.product);
    double worst = 0.0, positivity = 0.0;
    const auto targets = circle_targets(64);
    for (int trial = 0; trial < 4; ++trial) {
        const auto a = random_symbol(rng, ctx.config.symbol_band, false);
        const auto b = random_symbol(rng, ctx.config.symbol_band, false);
        for (cplx w : targets) {
            worst = std::max(worst, covariance_check(op, a, b, w));
            const cplx lf = apply_pointwise(op, [&](cplx z) { return cplx(std::norm(a(z))); }, w);
            positivity = std::min(positivity, lf.real());
        }
    }
    out.residual = worst;
    out.extras["min_image_of_nonnegative"] = positivity;
    out.extra_condition = positivity >= -1e-12;
    if (!out.extra_condition) out.message = "L_R maps a nonnegative function below zero";
    return out;
}

inline CheckOutcome check_adjoint(const CheckContext& ctx) {
    CheckOutcome out;
    const auto table = make_preimage_table(ctx.product, ctx.grid);
    const auto lmat = transfer_matrix(table, ctx.size);
    const auto c = composition_matrix(ctx.product, ctx.size, ctx.grid);
    const Matrix diff = (lmat.entries - c.entries.adjoint()).topLeftCorner(ctx.corner, ctx.corner);
    out.residual = operator_norm(diff).value;
    out.extras["truncated_transfer_norm"] = operator_norm(lmat.entries, 1e-8, 2000).value;
    double negative = 0.0;
    for (int j = 0; j < 8; ++j) {
        const auto coeffs = fourier_coefficients(apply_on_grid(table, [j](cplx z) { return std::pow(z, j); }));
        for (int k = 1; k < coeffs.band(); ++k) negative = std::max(negative, std::abs(coeffs(-k)));
    }
    out.extras["max_negative_coefficient"] = negative;
    out.extra_condition = negative <= 1e-10;
    if (!out.extra_condition) out.message = "L_R does not preserve H^2";
    return out;
}

inline CheckOutcome check_isometry(const CheckContext& ctx) {
    CheckOutcome out;
    const auto c = composition_matrix(ctx.product, ctx.size, ctx.grid);
    out.residual = isometry_residual(c, ctx.corner);
    double col = 0.0;
    for (Eigen::Index m = 0; m < ctx.corner; ++m) col = std::max(col, std::abs(c.entries.col(m).norm() - 1.0));
    out.extras["column_norm_error"] = col;
    out.extras["truncation_bound"] = truncation_bound(ctx.product, ctx.size, ctx.corner);
    out.extras["aliasing_bound"] = aliasing_bound(ctx.product.max_zero_modulus(), ctx.grid.size());
    return out;
}

inline CheckOutcome check_covariance(const CheckContext& ctx) {
    CheckOutcome out;
    auto rng = check_rng(ctx.config, "covariance_identity");
    const auto c = composition_matrix(ctx.product, ctx.size, ctx.grid);
    const auto table = symbol_table(ctx.product, ctx.grid);
    double worst = 0.0, adjoint_gap = 0.0, monomial = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_symbol(rng, ctx.config.symbol_band, false);
        const Matrix block = covariance_block(c, table, ctx.product, a, ctx.corner);
        worst = std::max(worst, operator_norm(block).value);
        // T_a^* = T_{conj a}: the conjugate symbol's block is the adjoint block.
        const Matrix conj_block = covariance_block(c, table, ctx.product, a.conjugate(), ctx.corner);
        adjoint_gap = std::max(adjoint_gap, (conj_block - block.adjoint()).cwiseAbs().maxCoeff());
    }
    for (int k = -ctx.config.symbol_band; k <= ctx.config.symbol_band; ++k) {
        const auto a = FourierSymbol::monomial(k);
        monomial = std::max(monomial, operator_norm(covariance_block(c, table, ctx.product, a, ctx.corner)).value);
    }
    out.residual = std::max(worst, monomial);
    out.extras["random_symbol_residual"] = worst;
    out.extras["monomial_symbol_residual"] = monomial;
    out.extras["adjoint_consistency"] = adjoint_gap;
    out.extras["truncation_bound"] = truncation_bound(ctx.product, ctx.size, ctx.corner);
    return out;
}

inline CheckOutcome check_commutation(const CheckContext& ctx) {
    CheckOutcome out;
    auto rng = check_rng(ctx.config, "commutation_identity");
    const auto c = composition_matrix(ctx.product, ctx.size, ctx.grid);
    std::vector<FourierSymbol> symbols;
    for (int k = 0; k <= 4; ++k) symbols.push_back(FourierSymbol::monomial(k));
    for (int t = 0; t < 4; ++t) symbols.push_back(random_symbol(rng, 4, true));
    double worst = 0.0;
    for (const auto& b : symbols) {
        const auto composed = compose_symbol(b, ctx.product, ctx.grid);
        worst = std::max(worst, operator_norm(commutation_block(c, b, composed, ctx.corner)).value);
    }
    out.residual = worst;
    out.extras["truncation_bound"] = truncation_bound(ctx.product, ctx.size, ctx.corner);
    return out;
}

inline CheckOutcome check_gram(const CheckContext& ctx) {
    CheckOutcome out;
    const TMBasis basis(ctx.product, ctx.config.basis_count);
    out.residual = gram_residual(basis, ctx.config.basis_count, ctx.grid);
    return out;
}

inline CheckOutcome check_factorization(const CheckContext& ctx) {
    CheckOutcome out;
    const int n = ctx.product.degree();
    const TMBasis basis(ctx.product, std::max(ctx.config.basis_count, 9 * n));
    const CircleGrid grid(1024);
    double worst = 0.0;
    for (int k = 0; k <= 8; ++k)
        for (int l = 0; l < n; ++l) worst = std::max(worst, factorization_residual(basis, k, l, grid));
    out.residual = worst;
    return out;
}

inline CheckOutcome check_cuntz(const CheckContext& ctx) {
    CheckOutcome out;
    const auto w = cuntz_family(ctx.product, ctx.size, ctx.grid);
    const auto r = cons_residual(w, ctx.corner);
    out.residual = r.worst();
    out.extras["completeness"] = r.completeness;
    out.extras["isometry"] = r.isometry;
    out.extras["orthogonality"] = r.orthogonality;
    return out;
}

/// Cuts N/32, N/16, N/8, N/4 inside the window N/2.
inline std::vector<Eigen::Index> tail_cuts(Eigen::Index size) {
    return {size / 32, size / 16, size / 8, size / 4};
}

inline CheckOutcome check_generator_relations(const CheckContext& ctx) {
    CheckOutcome out;
    const auto table = make_preimage_table(ctx.product, ctx.grid);
    const Eigen::Index window = ctx.size / 2;
    const auto cuts = tail_cuts(ctx.size);
    std::vector<double> profile(cuts.size(), 0.0);
    bool monotone = true;
    const int n = ctx.product.degree();
    for (int k = 1; k <= n; ++k) {
        for (int j = 1; j <= n; ++j) {
            const Matrix res = correspondence_residual(ctx.product, table, basis_section(ctx.product, k),
                                                       basis_section(ctx.product, j), window);
            const auto p = tail_compactness_profile(res, cuts);
            for (std::size_t i = 0; i < p.size(); ++i) {
                profile[i] = std::max(profile[i], p[i]);
                if (i > 0 && p[i] > p[i - 1]) monotone = false;
            }
        }
    }
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        std::ostringstream key;
        key << "tail_cut_" << std::setw(4) << std::setfill('0') << cuts[i];
        out.extras[key.str()] = profile[i];
    }
    out.residual = profile.back();
    out.extra_condition = monotone;
    if (!monotone) out.message = "tail profile is not monotone";
    return out;
}

inline CheckOutcome check_lift_expanding(const CheckContext& ctx) {
    CheckOutcome out;
    const auto lift = build_lift(ctx.product, static_cast<std::size_t>(ctx.config.lift_samples));
    out.residual = lift.expansion_margin();
    out.extras["theta0"] = lift.theta0();
    out.extras["max_slope"] = *std::max_element(lift.slopes().begin(), lift.slopes().end());
    return out;
}

inline CheckOutcome check_lift_winding(const CheckContext& ctx) {
    CheckOutcome out;
    const auto lift = build_lift(ctx.product, static_cast<std::size_t>(ctx.config.lift_samples));
    out.residual = std::abs(lift.total_increase() - two_pi * ctx.product.degree());
    bool increasing = true;
    for (std::size_t j = 1; j < lift.size(); ++j) increasing = increasing && lift.values()[j] > lift.values()[j - 1];
    out.extra_condition = increasing;
    if (!increasing) out.message = "lift samples are not strictly increasing";
    return out;
}

inline CheckOutcome check_branches(const CheckContext& ctx) {
    CheckOutcome out;
    const auto lift = build_lift(ctx.product, static_cast<std::size_t>(ctx.config.lift_samples));
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double t = two_pi * (i + 0.5) / 64.0;
        const auto pre = preimages(ctx.product, unit(t));
        for (int k = 1; k <= ctx.product.degree(); ++k) {
            const cplx z = unit(branch_inverse(lift, k, t));
            double nearest = 1e300;
            for (cplx p : pre.points) nearest = std::min(nearest, std::abs(p - z));
            worst = std::max(worst, nearest);
        }
    }
    out.residual = worst;
    return out;
}

inline CheckOutcome check_conjugacy(const CheckContext& ctx) {
    CheckOutcome out;
    const auto phi = conjugacy_to_power(ctx.product, static_cast<std::size_t>(ctx.config.lift_samples),
                                        ctx.config.conjugacy_max_iterations);
    out.residual = phi.residual(1024);
    const auto s = phi.samples();
    bool monotone = true;
    for (std::size_t j = 1; j < s.size(); ++j) monotone = monotone && s[j] > s[j - 1];
    out.extras["iterations"] = phi.iterations();
    out.extras["last_delta"] = phi.last_delta();
    out.extra_condition = monotone;
    if (!monotone) out.message = "conjugacy samples are not strictly increasing";
    return out;
}

inline CheckOutcome check_k_groups(const CheckContext& ctx) {
    CheckOutcome out;
    const int n = ctx.product.degree();
    const auto k = k_groups(n);
    const std::string torsion = n == 2 ? "" : " ⊕ Z/" + std::to_string(n - 1) + "Z";
    const bool match = k.k0 == "Z" + torsion && k.k1 == "Z";
    out.residual = match ? 0.0 : 1.0;
    out.message = "K0 = " + k.k0 + ", K1 = " + k.k1;
    return out;
}

inline CheckOutcome check_power_map(const CheckContext& ctx) {
    CheckOutcome out;
    const auto w = cuntz_family(ctx.product, ctx.size, ctx.grid);
    const auto gens = quotient_generators(ctx.product, ctx.size, ctx.grid);
    const Eigen::Index m = ctx.corner;
    const Matrix& u = gens.u.entries;
    double worst = 0.0;
    const int n = ctx.product.degree();
    for (int k = 0; k + 1 < n; ++k) {
        const Matrix d = (u * w[static_cast<std::size_t>(k)].entries - w[static_cast<std::size_t>(k + 1)].entries)
                             .topLeftCorner(m, m);
        worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
    const Matrix d = (u * w.back().entries - w.front().entries * u).topLeftCorner(m, m);
    worst = std::max(worst, d.cwiseAbs().maxCoeff());
    out.residual = worst;
    return out;
}

using CheckFn = CheckOutcome (*)(const CheckContext&);

inline CheckFn check_function(std::string_view id) {
    static const std::map<std::string_view, CheckFn> table{
        {"log_derivative_identity", check_log_derivative},
        {"weight_positivity", check_weight_positivity},
        {"partial_fraction_sum", check_partial_fraction},
        {"transfer_unit", check_transfer_unit},
        {"transfer_covariance", check_transfer_covariance},
        {"adjoint_matrix", check_adjoint},
        {"composition_isometry", check_isometry},
        {"covariance_identity", check_covariance},
        {"commutation_identity", check_commutation},
        {"tm_gram", check_gram},
        {"tm_factorization", check_factorization},
        {"cuntz_relations", check_cuntz},
        {"generator_relations", check_generator_relations},
        {"lift_expanding", check_lift_expanding},
        {"lift_winding", check_lift_winding},
        {"branch_preimages", check_branches},
        {"conjugacy", check_conjugacy},
        {"k_groups", check_k_groups},
        {"power_map_relations", check_power_map},
    };
    return table.at(id);
}

inline CheckRecord run_check(const CheckInfo& info, const CheckContext& ctx) {
    CheckRecord rec;
    rec.id = info.id;
    rec.statement = info.statement;
    rec.relation = info.relation;
    const auto it = ctx.config.tolerances.find(rec.id);
    rec.tolerance = it != ctx.config.tolerances.end() ? it->second : info.tolerance;

    const auto start = std::chrono::steady_clock::now();
    try {
        auto outcome = check_function(info.id)(ctx);
        rec.residual = outcome.residual;
        rec.extras = std::move(outcome.extras);
        rec.message = std::move(outcome.message);
        const bool within = info.relation == Relation::AtMost ? rec.residual <= rec.tolerance
                                                              : rec.residual > rec.tolerance;
        rec.passed = within && outcome.extra_condition;
    } catch (const std::exception& e) {
        rec.errored = true;
        rec.passed = false;
        rec.residual = std::numeric_limits<double>::quiet_NaN();
        rec.message = e.what();
    }
    rec.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

} // namespace detail

inline std::map<std::string, std::string> environment_metadata() {
    std::ostringstream eigen;
    eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
    return {{"library", std::string(library_version)},
#if defined(__VERSION__)
            {"compiler", __VERSION__},
#endif
            {"eigen", eigen.str()},
            {"cplusplus", std::to_string(__cplusplus)}};
}

/// Runs every check; module errors are captured per check.
/// Throws ConfigError before any computation when the config is invalid.
inline VerificationReport run_verify(const RunConfig& config, bool parallel = false) {
    validate(config);
    VerificationReport report;
    report.config = config;
    report.environment = environment_metadata();

    const detail::CheckContext ctx{config, config.product(), CircleGrid(static_cast<std::size_t>(config.grid)),
                                   config.truncation, config.corner};
    std::vector<const CheckInfo*> infos;
    for (const auto& c : check_manifest) infos.push_back(&c);
    if (ctx.product.is_monomial()) infos.push_back(&power_map_check);

    if (parallel) {
        std::vector<std::future<CheckRecord>> futures;
        for (const CheckInfo* info : infos)
            futures.push_back(std::async(std::launch::async, [info, &ctx] { return detail::run_check(*info, ctx); }));
        for (auto& f : futures) report.checks.push_back(f.get());
    } else {
        for (const CheckInfo* info : infos) report.checks.push_back(detail::run_check(*info, ctx));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Report formats

enum class ReportFormat { Human, Canonical, Table };

inline ReportFormat parse_format(std::string_view s) {
    if (s == "human") return ReportFormat::Human;
    if (s == "canonical") return ReportFormat::Canonical;
    if (s == "table") return ReportFormat::Table;
    throw ConfigError("unknown report format '" + std::string(s) + "'");
}

namespace detail {
inline nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }
inline double number_from(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}
inline std::string status(const CheckRecord& c) { return c.errored ? "ERROR" : (c.passed ? "PASS" : "FAIL"); }
inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << std::scientific << v;
    return os.str();
}
} // namespace detail

/// Canonical record. Runtimes are omitted so output is byte-stable.
inline nlohmann::json to_canonical_json(const VerificationReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json extras = nlohmann::json::object();
        for (const auto& [k, v] : c.extras) extras[k] = detail::number_or_null(v);
        checks.push_back({{"id", c.id},
                          {"statement", c.statement},
                          {"relation", c.relation == Relation::AtMost ? "le" : "gt"},
                          {"residual", detail::number_or_null(c.residual)},
                          {"tolerance", c.tolerance},
                          {"passed", c.passed},
                          {"errored", c.errored},
                          {"message", c.message},
                          {"extras", extras}});
    }
    return {{"config", to_json(r.config)},
            {"environment", r.environment},
            {"checks", checks},
            {"passed", r.passed()}};
}

inline VerificationReport parse_canonical(const std::string& text) {
    VerificationReport r;
    try {
        const auto j = nlohmann::json::parse(text);
        r.config = RunConfig{};
        r.config.tolerances.clear();
        apply_json(r.config, j.at("config"));
        r.environment = j.at("environment").get<std::map<std::string, std::string>>();
        for (const auto& c : j.at("checks")) {
            CheckRecord rec;
            rec.id = c.at("id").get<std::string>();
            rec.statement = c.at("statement").get<std::string>();
            rec.relation = c.at("relation").get<std::string>() == "le" ? Relation::AtMost : Relation::Above;
            rec.residual = detail::number_from(c.at("residual"));
            rec.tolerance = c.at("tolerance").get<double>();
            rec.passed = c.at("passed").get<bool>();
            rec.errored = c.at("errored").get<bool>();
            rec.message = c.at("message").get<std::string>();
            for (const auto& [k, v] : c.at("extras").items()) rec.extras[k] = detail::number_from(v);
            r.checks.push_back(std::move(rec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed canonical report: ") + e.what());
    }
    return r;
}

/// Equality of everything the canonical form carries (runtimes excluded, NaN == NaN).
inline bool canonical_equal(const VerificationReport& a, const VerificationReport& b) {
    return to_canonical_json(a) == to_canonical_json(b);
}

inline constexpr std::string_view table_header = "check_id,status,relation,residual,tolerance,runtime_ms,statement";

inline std::string render_report(const VerificationReport& r, ReportFormat format) {
    std::ostringstream os;
    switch (format) {
    case ReportFormat::Canonical:
        os << to_canonical_json(r).dump(2) << '\n';
        break;
    case ReportFormat::Table:
        os << table_header << '\n';
        for (const auto& c : r.checks) {
            os << c.id << ',' << detail::status(c) << ',' << (c.relation == Relation::AtMost ? "le" : "gt") << ','
               << detail::fmt(c.residual) << ',' << detail::fmt(c.tolerance) << ',' << std::fixed
               << std::setprecision(3) << c.runtime_ms << std::defaultfloat << ",\"" << c.statement << "\"\n";
        }
        break;
    case ReportFormat::Human: {
        const auto& cfg = r.config;
        os << "Blaschke product: degree " << cfg.zeros.size() << ", lambda angle " << cfg.lambda_angle << ", zeros";
        for (cplx z : cfg.zeros) os << " (" << z.real() << ", " << z.imag() << ")";
        os << "\ntruncation N = " << cfg.truncation << ", corner m = " << cfg.corner << ", grid M = " << cfg.grid
           << ", basis L = " << cfg.basis_count << ", seed = " << cfg.seed << "\n\n";
        for (const auto& c : r.checks) {
            os << '[' << detail::status(c) << "] " << std::left << std::setw(26) << c.id << std::right
               << " residual " << detail::fmt(c.residual) << (c.relation == Relation::AtMost ? " <= " : " >  ")
               << detail::fmt(c.tolerance) << "  (" << std::fixed << std::setprecision(1) << c.runtime_ms
               << std::defaultfloat << " ms)\n";
            os << "       " << c.statement << '\n';
            if (!c.message.empty()) os << "       " << c.message << '\n';
            for (const auto& [k, v] : c.extras) os << "       " << k << " = " << detail::fmt(v) << '\n';
        }
        os << '\n' << (r.passed() ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << '\n';
        break;
    }
    }
    return os.str();
}

inline void emit_report(const VerificationReport& r, ReportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write report to " + path);
    out << render_report(r, format);
    if (!out) throw Error("failed writing report to " + path);
}

} // namespace tcalg
