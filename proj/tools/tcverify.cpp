// tcverify: command-line front end for the verification suite and the
// individual numerical objects (preimages, transfer images, basis, lift).

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tcalg/tcalg.hpp"

namespace {

using namespace tcalg;

enum ExitCode { Pass = 0, Fail = 1, BadConfig = 2, Numerical = 3 };

struct Shared {
    std::string config_path;
    int truncation = 0;
    int corner = 0;
    int grid = 0;
    long long seed = -1;
    std::vector<std::string> tol_overrides;

    RunConfig resolve() const {
        RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (truncation > 0) c.truncation = truncation;
        if (corner > 0) c.corner = corner;
        if (grid > 0) c.grid = grid;
        if (seed >= 0) c.seed = static_cast<std::uint64_t>(seed);
        for (const auto& item : tol_overrides) {
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0) throw ConfigError("--tol-override expects CHECK=VALUE, got " + item);
            const std::string name = item.substr(0, eq);
            try {
                std::size_t used = 0;
                const std::string value = item.substr(eq + 1);
                const double v = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
                c.tolerances[name] = v;
            } catch (const std::logic_error&) {
                throw ConfigError("--tol-override value for " + name + " is not a number");
            }
        }
        return c;
    }

    BlaschkeProduct product() const {
        try {
            return resolve().product();
        } catch (const BlaschkeError& e) {
            throw ConfigError(std::string("invalid Blaschke product: ") + e.what());
        }
    }
};

void add_shared(CLI::App* cmd, Shared& s) {
    cmd->add_option("--config", s.config_path, "JSON run configuration")->check(CLI::ExistingFile);
}

std::ostream& put(std::ostream& os, cplx z) {
    return os << std::setprecision(17) << z.real() << ' ' << z.imag();
}

/// Writes to path when given, otherwise to stdout.
void write_text(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write to " + path);
    out << text;
}

int run_verify_cmd(const Shared& s, const std::string& format, const std::string& report, bool parallel) {
    const auto fmt = parse_format(format);
    const auto r = run_verify(s.resolve(), parallel);
    if (report.empty()) {
        std::cout << render_report(r, fmt);
    } else {
        emit_report(r, fmt, report);
        std::cout << render_report(r, ReportFormat::Human);
    }
    if (r.errored()) return Numerical;
    return r.passed() ? Pass : Fail;
}

int run_preimage_cmd(const Shared& s, double angle) {
    const auto b = s.product();
    const auto pre = preimages(b, unit(angle));
    std::cout << "# re im residual weight\n";
    for (std::size_t l = 0; l < pre.points.size(); ++l) {
        const double weight = weight_h(b, std::arg(pre.points[l])) / b.degree();
        put(std::cout, pre.points[l]) << ' ' << pre.residuals[l] << ' ' << weight << '\n';
    }
    return Pass;
}

FourierSymbol parse_symbol(const std::vector<std::string>& terms) {
    std::map<int, cplx> coeffs;
    for (const auto& t : terms) {
        std::istringstream in(t);
        int k = 0;
        double re = 0.0, im = 0.0;
        char c1 = 0, c2 = 0;
        in >> k >> c1 >> re;
        if (!in || c1 != ':') throw ConfigError("symbol term must be K:RE[:IM], got " + t);
        if (in >> c2) {
            if (c2 != ':' || !(in >> im)) throw ConfigError("symbol term must be K:RE[:IM], got " + t);
        }
        coeffs[k] += cplx(re, im);
    }
    if (coeffs.empty()) coeffs[0] = 1.0;
    return FourierSymbol::from_map(coeffs);
}

int run_transfer_cmd(const Shared& s, const std::vector<std::string>& terms) {
    const RunConfig c = s.resolve();
    const auto b = s.product();
    const auto a = parse_symbol(terms);
    const auto image = image_symbol(TransferOperator(b), a, CircleGrid(static_cast<std::size_t>(c.grid)));
    std::cout << "# k re im  (Fourier coefficients of L(a), |c| > 1e-14)\n";
    const int band = std::min(image.band(), c.grid / 2 - 1);
    for (int k = -band; k <= band; ++k) {
        if (std::abs(image(k)) > 1e-14) put(std::cout << k << ' ', image(k)) << '\n';
    }
    return Pass;
}

int run_basis_cmd(const Shared& s, int count) {
    const RunConfig c = s.resolve();
    const TMBasis basis(s.product(), count > 0 ? count : c.basis_count);
    const CircleGrid grid(static_cast<std::size_t>(c.grid));
    const auto samples = tm_samples(basis, basis.count, grid);
    std::cout << "# l alpha_re alpha_im beta_re beta_im norm_squared\n";
    for (int l = 0; l < basis.count; ++l) {
        const auto& e = samples[static_cast<std::size_t>(l)];
        put(put(std::cout << l << ' ', basis.alpha(l)) << ' ', basis.beta(l))
            << ' ' << l2_inner(e, e).real() << '\n';
    }
    std::cout << "# gram residual " << gram_residual(basis, basis.count, grid) << '\n';
    return Pass;
}

int run_lift_cmd(const Shared& s, int samples, const std::string& output) {
    const RunConfig c = s.resolve();
    const auto lift = build_lift(s.product(), static_cast<std::size_t>(samples > 0 ? samples : c.lift_samples));
    std::ostringstream os;
    os << "# theta psi  (theta0 = " << std::setprecision(17) << lift.theta0() << ", expansion margin "
       << lift.expansion_margin() << ")\n";
    for (std::size_t j = 0; j < lift.size(); ++j) os << lift.nodes()[j] << ' ' << lift.values()[j] << '\n';
    write_text(os.str(), output);
    return Pass;
}

int run_kgroups_cmd(const Shared& s, int degree) {
    const int n = degree > 0 ? degree : s.product().degree();
    if (n < 2) throw ConfigError("degree must be at least 2");
    const auto k = k_groups(n);
    std::cout << "n = " << n << "\nK0 = " << k.k0 << "\nK1 = " << k.k1 << '\n';
    return Pass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-truncation verification of Toeplitz-composition identities for finite Blaschke products"};
    app.require_subcommand(1);
    Shared shared;

    auto* verify = app.add_subcommand("verify", "run the full verification suite");
    add_shared(verify, shared);
    std::string format = "human", report;
    bool parallel = false;
    verify->add_option("--truncation", shared.truncation, "truncation N");
    verify->add_option("--corner", shared.corner, "corner m");
    verify->add_option("--grid", shared.grid, "grid size M");
    verify->add_option("--tol-override", shared.tol_overrides, "per-check tolerance CHECK=VALUE")->take_all();
    verify->add_option("--report", report, "write the report to PATH");
    verify->add_option("--format", format, "human, canonical or table")
        ->check(CLI::IsMember({"human", "canonical", "table"}));
    verify->add_option("--seed", shared.seed, "seed for randomized checks")->check(CLI::NonNegativeNumber);
    verify->add_flag("--parallel", parallel, "run checks concurrently");

    auto* preimage = app.add_subcommand("preimage", "preimages of e^{it} with their weights");
    add_shared(preimage, shared);
    double angle = 0.0;
    preimage->add_option("--angle", angle, "target angle t in radians");

    auto* transfer = app.add_subcommand("transfer", "Fourier coefficients of L_R applied to a symbol");
    add_shared(transfer, shared);
    std::vector<std::string> terms;
    transfer->add_option("--grid", shared.grid, "grid size M");
    transfer->add_option("--term", terms, "symbol coefficient K:RE[:IM], repeatable");

    auto* basis = app.add_subcommand("basis", "Takenaka-Malmquist basis table");
    add_shared(basis, shared);
    int count = 0;
    basis->add_option("--count", count, "number of elements (default: config basis_count)");
    basis->add_option("--grid", shared.grid, "grid size M");

    auto* lift = app.add_subcommand("lift", "two-column (theta, psi) samples of the lift");
    add_shared(lift, shared);
    int samples = 0;
    std::string output;
    lift->add_option("--samples", samples, "number of samples G (default: config lift_samples)")
        ->check(CLI::Range(256, 1 << 24));
    lift->add_option("--output", output, "write the table to PATH");

    auto* kgroups = app.add_subcommand("kgroups", "K-groups of the associated algebra");
    add_shared(kgroups, shared);
    int degree = 0;
    kgroups->add_option("--degree", degree, "degree n (default: degree of the configured product)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Pass : BadConfig;
    }

    try {
        if (*verify) return run_verify_cmd(shared, format, report, parallel);
        if (*preimage) return run_preimage_cmd(shared, angle);
        if (*transfer) return run_transfer_cmd(shared, terms);
        if (*basis) return run_basis_cmd(shared, count);
        if (*lift) return run_lift_cmd(shared, samples, output);
        if (*kgroups) return run_kgroups_cmd(shared, degree);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return BadConfig;
    } catch (const BlaschkeError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return BadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Numerical;
    }
    return Pass;
}
