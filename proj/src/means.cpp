#include "meanscope/means.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace meanscope {

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        g[i] = std::exp(llo + (lhi - llo) * i / double(n - 1));
    return g;
}

}  // namespace

void validate_representing_function(const RepresentingFunction& f) {
    if (!f.eval) throw ValidationError(f.name + ": missing evaluator");
    const double at_one = f.eval(1.0);
    if (!std::isfinite(at_one) || std::abs(at_one - 1.0) > 1e-12)
        throw ValidationError(f.name + ": f(1) = " + std::to_string(at_one) +
                              ", expected 1");
    const auto grid = log_grid(1e-3, 1e3, 200);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = f.eval(grid[i]);
        if (!std::isfinite(values[i]))
            throw ValidationError(f.name + ": non-finite value at t = " +
                                  std::to_string(grid[i]));
    }
    const bool constant =
        std::abs(values.front() - values.back()) <= 1e-14 * std::max(1.0, std::abs(values.back()));
    if (!constant) {
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(values[i] > values[i - 1]))
                throw ValidationError(f.name + ": not strictly increasing near t = " +
                                      std::to_string(grid[i]));
    }
    // Midpoint concavity on consecutive grid pairs.
    for (std::size_t i = 2; i < grid.size(); ++i) {
        const double s = grid[i - 2], t = grid[i];
        const double mid = f.eval(0.5 * (s + t));
        if (mid < 0.5 * (values[i - 2] + values[i]) - 1e-10)
            throw ValidationError(f.name + ": concavity violated near t = " +
                                  std::to_string(t));
    }
}

TriState probe_submultiplicative(const RepresentingFunction& f) {
    const auto grid = log_grid(1e-3, 1e3, 200);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f.eval(grid[i]);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double fxy = f.eval(grid[i] * grid[j]);
            if (fxy > values[i] * values[j] + 1e-12) return TriState::No;
        }
    }
    return TriState::Yes;
}

namespace {

RepresentingFunction make_geometric(double alpha) {
    RepresentingFunction f;
    f.name = "geometric";
    f.alpha = alpha;
    f.eval = [alpha](double t) { return std::pow(t, alpha); };
    f.deriv = [alpha](double t) { return alpha * std::pow(t, alpha - 1.0); };
    f.is_submultiplicative = TriState::Yes;  // t^a is multiplicative
    return f;
}

RepresentingFunction make_arithmetic(double alpha) {
    RepresentingFunction f;
    f.name = "arithmetic";
    f.alpha = alpha;
    f.eval = [alpha](double t) { return (1.0 - alpha) + alpha * t; };
    f.deriv = [alpha](double) { return alpha; };
    // (1-a) + a t fails f(xy) <= f(x)f(y) whenever x, y > 1.
    f.is_submultiplicative = alpha == 1.0 ? TriState::Yes : TriState::No;
    return f;
}

RepresentingFunction make_right_trivial() {
    RepresentingFunction f;
    f.name = "right-trivial";
    f.eval = [](double t) { return t; };
    f.deriv = [](double) { return 1.0; };
    f.is_submultiplicative = TriState::Yes;
    return f;
}

std::map<std::string, RepresentingFunction>& custom_registry() {
    static std::map<std::string, RepresentingFunction> reg;
    return reg;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

RepresentingFunction representing_fn(const std::string& kind, double alpha) {
    if (kind == "geometric" || kind == "arithmetic") {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw InputError("representing_fn: alpha must lie in [0, 1]");
        RepresentingFunction f =
            kind == "geometric" ? make_geometric(alpha) : make_arithmetic(alpha);
        validate_representing_function(f);
        return f;
    }
    if (kind == "right-trivial") {
        RepresentingFunction f = make_right_trivial();
        validate_representing_function(f);
        return f;
    }
    if (kind.rfind("custom:", 0) == 0) {
        std::lock_guard<std::mutex> lock(registry_mutex());
        const auto it = custom_registry().find(kind.substr(7));
        if (it == custom_registry().end())
            throw InputError("representing_fn: unknown custom mean '" + kind + "'");
        return it->second;
    }
    throw InputError("representing_fn: unknown mean kind '" + kind + "'");
}

void register_custom_mean(const std::string& name,
                          std::function<double(double)> eval,
                          std::function<double(double)> deriv) {
    RepresentingFunction f;
    f.name = "custom:" + name;
    f.eval = std::move(eval);
    f.deriv = std::move(deriv);
    validate_representing_function(f);
    f.is_submultiplicative = probe_submultiplicative(f);
    std::lock_guard<std::mutex> lock(registry_mutex());
    custom_registry()[name] = std::move(f);
}

std::vector<RepresentingFunction> registered_means() {
    std::vector<RepresentingFunction> all;
    for (double a : {0.25, 0.5, 0.75}) all.push_back(representing_fn("geometric", a));
    for (double a : {0.25, 0.5, 0.75}) all.push_back(representing_fn("arithmetic", a));
    all.push_back(representing_fn("right-trivial", 0.0));
    return all;
}

HermitianMatrix kubo_ando_mean(const HermitianMatrix& a,
                               const HermitianMatrix& b,
                               const RepresentingFunction& f, double eps) {
    a.require_same_dim(b);
    if (eps < 0.0) throw InputError("kubo_ando_mean: eps must be >= 0");

    const auto spec_b = eigh(b);
    const double b_scale = std::max(std::abs(spec_b.min()), std::abs(spec_b.max()));
    if (spec_b.min() < -kSingularRelCutoff * std::max(1.0, b_scale))
        throw DomainError("kubo_ando_mean: B has negative eigenvalue " +
                          std::to_string(spec_b.min()));

    HermitianMatrix a_reg = a;
    if (eps > 0.0)
        a_reg = a.plus(HermitianMatrix::identity(a.dim()).scaled(eps));
    const auto spec_a = eigh(a_reg);
    const double a_scale = std::max(std::abs(spec_a.min()), std::abs(spec_a.max()));
    if (spec_a.min() <= kSingularRelCutoff * std::max(1.0, a_scale))
        throw SingularError(
            "kubo_ando_mean: A is not strictly positive; pass eps > 0");

    const HermitianMatrix root = matrix_sqrt(a_reg);
    const HermitianMatrix inv_root = matrix_inv_sqrt(a_reg);
    const HermitianMatrix inner =
        hermitian_part(inv_root.matrix() * b.matrix() * inv_root.matrix());
    const HermitianMatrix mapped = fun_calc(inner, f.eval);
    return hermitian_part(root.matrix() * mapped.matrix() * root.matrix());
}

HermitianMatrix weighted_geometric(const HermitianMatrix& a,
                                   const HermitianMatrix& b, double alpha) {
    return kubo_ando_mean(a, b, representing_fn("geometric", alpha));
}

HermitianMatrix weighted_arithmetic(const HermitianMatrix& a,
                                    const HermitianMatrix& b, double alpha) {
    return a.scaled(1.0 - alpha).plus(b.scaled(alpha));
}

AxiomReport check_mean_axioms(const RepresentingFunction& f,
                              const std::vector<Eigen::Index>& dims,
                              int trials, std::uint64_t seed, double tol) {
    if (trials < 1) throw InputError("check_mean_axioms: trials must be >= 1");
    AxiomReport report;
    report.trials = trials;
    const double mean_alpha = f.alpha.value_or(0.5);
    const double gm_alpha =
        (mean_alpha > 0.0 && mean_alpha < 1.0) ? mean_alpha : 0.5;

    // (i) normalization, once per dimension.
    for (Eigen::Index d : dims) {
        const HermitianMatrix id = HermitianMatrix::identity(d);
        const HermitianMatrix m = kubo_ando_mean(id, id, f);
        ++report.normalization_checks;
        if ((m.matrix() - id.matrix()).norm() <= tol) ++report.normalization_passes;
    }

    const SpectralBounds band(0.5, 4.0);
    for (int trial = 0; trial < trials; ++trial) {
        const Eigen::Index d = dims[trial % dims.size()];
        const std::uint64_t base = derive_seed(seed, {0x717, (std::uint64_t)trial});
        RandomStream rng(base);

        const HermitianMatrix a =
            random_banded_hermitian(d, band, false, rng.next_u64());
        const HermitianMatrix b =
            random_banded_hermitian(d, band, false, rng.next_u64());

        // (ii) transformer inequality with random invertible C.
        {
            ComplexMatrix c(d, d);
            for (Eigen::Index j = 0; j < d; ++j)
                for (Eigen::Index i = 0; i < d; ++i) c(i, j) = rng.complex_normal();
            c += 3.0 * ComplexMatrix::Identity(d, d);  // keep well-conditioned
            const HermitianMatrix lhs =
                hermitian_part(c.adjoint() * kubo_ando_mean(a, b, f).matrix() * c);
            const HermitianMatrix rhs = kubo_ando_mean(
                hermitian_part(c.adjoint() * a.matrix() * c),
                hermitian_part(c.adjoint() * b.matrix() * c), f);
            ++report.transformer_checks;
            if (loewner_compare(lhs, rhs, tol, tol).holds) ++report.transformer_passes;
        }

        // (iv) joint monotonicity on ordered pairs A <= A+P, B <= B+Q.
        {
            const HermitianMatrix p =
                random_banded_hermitian(d, SpectralBounds(0.1, 1.0), false,
                                        rng.next_u64());
            const HermitianMatrix q =
                random_banded_hermitian(d, SpectralBounds(0.1, 1.0), false,
                                        rng.next_u64());
            const HermitianMatrix lhs = kubo_ando_mean(a, b, f);
            const HermitianMatrix rhs = kubo_ando_mean(a.plus(p), b.plus(q), f);
            ++report.monotonicity_checks;
            if (loewner_compare(lhs, rhs, tol, tol).holds) ++report.monotonicity_passes;
        }

        // Weight identity w^{1-a}(X #_a Y) = (wX) #_a Y.
        {
            const double w = rng.uniform(0.2, 5.0);
            const HermitianMatrix lhs =
                weighted_geometric(a, b, gm_alpha).scaled(std::pow(w, 1.0 - gm_alpha));
            const HermitianMatrix rhs = weighted_geometric(a.scaled(w), b, gm_alpha);
            ++report.omega_identity_checks;
            const double scale = std::max(1.0, rhs.frobenius_norm());
            if ((lhs.matrix() - rhs.matrix()).norm() <= 1e-10 * scale)
                ++report.omega_identity_passes;
        }
    }

    // Epsilon-regularization consistency on a fixed strictly positive pair.
    {
        RandomStream rng(derive_seed(seed, {0xE55}));
        const Eigen::Index d = dims.front();
        const HermitianMatrix a =
            random_banded_hermitian(d, band, false, rng.next_u64());
        const HermitianMatrix b =
            random_banded_hermitian(d, band, false, rng.next_u64());
        const HermitianMatrix base = kubo_ando_mean(a, b, f);
        double prev = std::numeric_limits<double>::infinity();
        bool decreasing = true;
        for (double eps : {1e-2, 1e-4, 1e-6}) {
            const HermitianMatrix reg = kubo_ando_mean(a, b, f, eps);
            const double dist = (reg.matrix() - base.matrix()).norm();
            if (dist > prev + 1e-12) decreasing = false;
            prev = dist;
        }
        report.eps_consistency = decreasing;
    }

    return report;
}

}  // namespace meanscope
