#include "meanscope/positive_map.hpp"

#include <cmath>

#include "meanscope/hadamard.hpp"

namespace meanscope {

namespace {

void validate_variant(const MapVariant& v) {
    if (const auto* c = std::get_if<Compression>(&v)) {
        if (c->v.rows() < 1 || c->v.cols() < 1)
            throw InputError("Compression: empty V");
        if (!c->v.allFinite()) throw InputError("Compression: non-finite V");
        const ComplexMatrix gram = c->v.adjoint() * c->v;
        const HermitianMatrix g = hermitian_part(gram);
        const double top = eigh(g).max();
        if (top > 1.0 + 1e-10)
            throw ValidationError("Compression: V*V exceeds I (top eigenvalue " +
                                  std::to_string(top) + ")");
    } else if (const auto* s = std::get_if<VectorState>(&v)) {
        if (s->x.size() < 1) throw InputError("VectorState: empty vector");
        if (!s->x.allFinite()) throw InputError("VectorState: non-finite vector");
        if (std::abs(s->x.norm() - 1.0) > 1e-12)
            throw ValidationError("VectorState: vector is not unit norm");
    } else if (const auto* sm = std::get_if<SchurMultiplier>(&v)) {
        const HermitianMatrix s = hermitian_part(sm->s);
        if (eigh(s).min() < -1e-10)
            throw ValidationError("SchurMultiplier: S is not PSD");
        for (Eigen::Index i = 0; i < s.dim(); ++i)
            if (s.matrix()(i, i).real() > 1.0 + 1e-10)
                throw ValidationError("SchurMultiplier: diagonal entry exceeds 1");
    } else if (const auto* ct = std::get_if<CongruenceThen>(&v)) {
        const HermitianMatrix a0 = hermitian_part(ct->a0);
        if (eigh(a0).min() <= 0.0)
            throw ValidationError("CongruenceThen: A0 must be strictly positive");
        if (!ct->inner) throw InputError("CongruenceThen: missing inner map");
    } else if (const auto* hc = std::get_if<HadamardCompression>(&v)) {
        if (hc->d < 1) throw InputError("HadamardCompression: dimension must be >= 1");
    }
}

}  // namespace

PositiveMapSpec::PositiveMapSpec(MapVariant v) : variant_(std::move(v)) {
    validate_variant(variant_);
}

PositiveMapSpec PositiveMapSpec::identity(Eigen::Index d) {
    return PositiveMapSpec(Compression{ComplexMatrix::Identity(d, d)});
}

PositiveMapSpec PositiveMapSpec::compression(ComplexMatrix v) {
    return PositiveMapSpec(Compression{std::move(v)});
}

PositiveMapSpec PositiveMapSpec::vector_state(ComplexVector x) {
    return PositiveMapSpec(VectorState{std::move(x)});
}

PositiveMapSpec PositiveMapSpec::schur(const HermitianMatrix& s) {
    return PositiveMapSpec(SchurMultiplier{s.matrix()});
}

PositiveMapSpec PositiveMapSpec::normalized_trace() {
    return PositiveMapSpec(NormalizedTraceMap{});
}

PositiveMapSpec PositiveMapSpec::congruence_then(const HermitianMatrix& a0,
                                                 PositiveMapSpec inner) {
    return PositiveMapSpec(CongruenceThen{
        a0.matrix(), std::make_shared<const PositiveMapSpec>(std::move(inner))});
}

PositiveMapSpec PositiveMapSpec::hadamard_compression(Eigen::Index d) {
    return PositiveMapSpec(HadamardCompression{d});
}

Eigen::Index PositiveMapSpec::input_dim() const {
    if (const auto* c = std::get_if<Compression>(&variant_)) return c->v.rows();
    if (const auto* s = std::get_if<VectorState>(&variant_)) return s->x.size();
    if (const auto* sm = std::get_if<SchurMultiplier>(&variant_)) return sm->s.rows();
    if (std::get_if<NormalizedTraceMap>(&variant_)) return -1;
    if (const auto* ct = std::get_if<CongruenceThen>(&variant_)) return ct->a0.rows();
    const auto& hc = std::get<HadamardCompression>(variant_);
    return hc.d * hc.d;
}

Eigen::Index PositiveMapSpec::output_dim(Eigen::Index in_dim) const {
    if (const auto* c = std::get_if<Compression>(&variant_)) return c->v.cols();
    if (std::get_if<VectorState>(&variant_)) return 1;
    if (const auto* sm = std::get_if<SchurMultiplier>(&variant_)) return sm->s.rows();
    if (std::get_if<NormalizedTraceMap>(&variant_)) return 1;
    if (const auto* ct = std::get_if<CongruenceThen>(&variant_))
        return ct->inner->output_dim(ct->a0.rows());
    (void)in_dim;
    return std::get<HadamardCompression>(variant_).d;
}

std::string PositiveMapSpec::kind_name() const {
    if (std::get_if<Compression>(&variant_)) return "compression";
    if (std::get_if<VectorState>(&variant_)) return "vector-state";
    if (std::get_if<SchurMultiplier>(&variant_)) return "schur";
    if (std::get_if<NormalizedTraceMap>(&variant_)) return "normalized-trace";
    if (std::get_if<CongruenceThen>(&variant_)) return "congruence-then";
    return "hadamard-compression";
}

HermitianMatrix apply_map(const PositiveMapSpec& spec, const HermitianMatrix& m) {
    const Eigen::Index want = spec.input_dim();
    if (want >= 0 && want != m.dim())
        throw InputError("apply_map: input dimension " + std::to_string(m.dim()) +
                         " does not match map dimension " + std::to_string(want));

    if (const auto* c = std::get_if<Compression>(&spec.variant())) {
        return hermitian_part(c->v.adjoint() * m.matrix() * c->v);
    }
    if (const auto* s = std::get_if<VectorState>(&spec.variant())) {
        const std::complex<double> value = s->x.adjoint() * m.matrix() * s->x;
        return HermitianMatrix::scalar(value.real());
    }
    if (const auto* sm = std::get_if<SchurMultiplier>(&spec.variant())) {
        return hermitian_part(sm->s.cwiseProduct(m.matrix()));
    }
    if (std::get_if<NormalizedTraceMap>(&spec.variant())) {
        return HermitianMatrix::scalar(m.trace_real() / double(m.dim()));
    }
    if (const auto* ct = std::get_if<CongruenceThen>(&spec.variant())) {
        const HermitianMatrix root = matrix_sqrt(hermitian_part(ct->a0));
        const HermitianMatrix inner_arg =
            hermitian_part(root.matrix() * m.matrix() * root.matrix());
        return apply_map(*ct->inner, inner_arg);
    }
    const auto& hc = std::get<HadamardCompression>(spec.variant());
    const ComplexMatrix u = canonical_isometry(hc.d);
    return hermitian_part(u.adjoint() * m.matrix() * u);
}

MapReport validate_map(const PositiveMapSpec& spec, Eigen::Index dim, int trials,
                       std::uint64_t seed) {
    if (trials < 1) throw InputError("validate_map: trials must be >= 1");
    MapReport report;
    report.trials = trials;

    const HermitianMatrix id = HermitianMatrix::identity(dim);
    const HermitianMatrix phi_id = apply_map(spec, id);
    const HermitianMatrix out_id = HermitianMatrix::identity(phi_id.dim());
    report.subunital_gap = eigh(out_id.minus(phi_id)).min();
    report.superunital_gap = eigh(phi_id.minus(out_id)).min();
    report.is_subunital = report.subunital_gap >= -1e-10;
    report.is_unital = report.is_subunital && report.superunital_gap >= -1e-10;

    RandomStream rng(seed);
    int positive = 0;
    double worst_linearity = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const HermitianMatrix psd = random_banded_hermitian(
            dim, SpectralBounds(1e-6, 3.0), false, rng.next_u64());
        const HermitianMatrix mapped = apply_map(spec, psd);
        if (eigh(mapped).min() >= -1e-9 * std::max(1.0, spectral_norm(mapped)))
            ++positive;

        // Linearity residual on random Hermitian (not necessarily PSD) pairs.
        const HermitianMatrix m = random_banded_hermitian(
            dim, SpectralBounds(0.5, 2.0), false, rng.next_u64());
        const HermitianMatrix n = random_banded_hermitian(
            dim, SpectralBounds(0.5, 2.0), false, rng.next_u64());
        const double a = rng.uniform(-2.0, 2.0);
        const double b = rng.uniform(-2.0, 2.0);
        const HermitianMatrix combo = m.scaled(a).plus(n.scaled(b));
        const HermitianMatrix lhs = apply_map(spec, combo);
        const HermitianMatrix rhs =
            apply_map(spec, m).scaled(a).plus(apply_map(spec, n).scaled(b));
        const double scale = std::max(1.0, rhs.frobenius_norm());
        worst_linearity =
            std::max(worst_linearity, (lhs.matrix() - rhs.matrix()).norm() / scale);
    }
    report.positivity_pass = double(positive) / double(trials);
    report.linearity_residual = worst_linearity;
    return report;
}

}  // namespace meanscope
