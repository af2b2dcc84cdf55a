// Inequality registry and suites.
//
// Each case pairs a hypothesis template (operand shape, admissible means
// and maps) with an LHS/RHS builder; run_case certifies LHS <= RHS in the
// Loewner order on instances generated to satisfy the template exactly.
// Suites sweep (mean, map, dim, trial) deterministically from one master
// seed; entries a case rejects are counted as skips, never re-assigned.

#include "meanscope/cases.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

namespace meanscope {

namespace {

std::string hex_seed(std::uint64_t seed) {
    std::ostringstream os;
    os << std::hex << seed;
    return os.str();
}

std::string mean_tag(const RepresentingFunction& f, double alpha) {
    std::ostringstream os;
    os << f.name;
    if (f.alpha) os << "@" << *f.alpha;
    os << "/a=" << alpha;
    return os.str();
}

}  // namespace

const std::vector<CaseInfo>& case_registry() {
    static const std::vector<CaseInfo> registry = [] {
        std::vector<CaseInfo> r;
        auto add = [&](CaseId id, std::string key, std::string name,
                       std::string statement, InstanceShape shape,
                       MeanPolicy mean, MapPolicy map, bool at_half,
                       bool in_default) {
            r.push_back(CaseInfo{id, std::move(key), std::move(name),
                                 std::move(statement), shape, mean, map,
                                 at_half, in_default});
        };
        add(CaseId::MainLeft, "main-left", "secant sandwich, AM-GM half",
            "w^{1-a}(Phi(A) #_a Phi(B)) <= (w Phi(A)) nabla_a Phi(B)",
            InstanceShape::BoxPair, MeanPolicy::AnyMeanOmega,
            MapPolicy::SweepMap, false, true);
        add(CaseId::MainRight, "main-right", "secant sandwich, chord half",
            "(w Phi(A)) nabla_a Phi(B) <= (a/mu) Phi(A s B)",
            InstanceShape::BoxPair, MeanPolicy::AnyMean, MapPolicy::SweepMap,
            false, true);
        add(CaseId::Eq3Premap, "eq3-premap", "pre-map chord inequality",
            "a B + (1-a) w A <= (a/mu) (A s B)", InstanceShape::BoxPair,
            MeanPolicy::AnyMean, MapPolicy::NoMap, false, true);
        add(CaseId::DmSecond, "dm-second", "Diaz-Metcalf, second type",
            "(M2 m2/(M1 m1)) Phi(A) + Phi(B) <= (M2/m1 + m2/M1) Phi(A # B)",
            InstanceShape::BoxPair, MeanPolicy::GeometricHalf,
            MapPolicy::SweepMap, true, true);
        add(CaseId::DmFirst, "dm-first", "Diaz-Metcalf, first type",
            "M m Phi(A) + Phi(B) <= (M+m) Phi(A # B)  for  m^2 A <= B <= M^2 A",
            InstanceShape::RelSquared, MeanPolicy::GeometricHalf,
            MapPolicy::SweepMap, true, true);
        add(CaseId::AndoBaseline, "ando-baseline", "Ando baseline",
            "Phi(A #_a B) <= Phi(A) #_a Phi(B)", InstanceShape::BoxPair,
            MeanPolicy::GeometricAny, MapPolicy::SweepMap, false, true);
        add(CaseId::RevAndoAdd, "rev-ando-add", "additive reverse Ando",
            "Phi(A) #_a Phi(B) - Phi(A #_a B) <= ((1-a)(mu/a)^{a/(a-1)} - nu) Phi(A)",
            InstanceShape::BoxPair, MeanPolicy::GeometricAny,
            MapPolicy::SweepMap, false, true);
        add(CaseId::RevAndoSym, "rev-ando-sym", "symmetric reverse Ando",
            "Phi(A) # Phi(B) - Phi(A # B) <= (1/(4mu) - nu) min{a1,a2} I,  Phi(I) <= I",
            InstanceShape::BoxPair, MeanPolicy::GeometricHalf,
            MapPolicy::SweepMap, true, true);
        add(CaseId::RevAndoSeo, "rev-ando-seo", "ratio-band reverse Ando",
            "Phi(A) #_a Phi(B) - Phi(A #_a B) <= seo(m, M, a) Phi(A)  for  m A <= B <= M A",
            InstanceShape::RelDirect, MeanPolicy::GeometricAny,
            MapPolicy::SweepMap, false, true);
        add(CaseId::KmGeneral, "km-general", "Klamkin-McLenaghan, general mean",
            "G^{-1/2} Phi(B) G^{-1/2} - G^{1/2} Phi(A)^{-1} G^{1/2} <= (1/mu - 2 sqrt(w)) I,  G = Phi(A s B)",
            InstanceShape::BoxPair, MeanPolicy::AnyMeanOmega,
            MapPolicy::SweepMap, true, true);
        add(CaseId::ShishaMond, "shisha-mond", "operator Shisha-Mond",
            "G^{-1/2} Phi(B) G^{-1/2} - G^{1/2} Phi(A)^{-1} G^{1/2} <= (sqrt(M) - sqrt(m))^2 I,  G = Phi(A # B)",
            InstanceShape::RelSquared, MeanPolicy::GeometricHalf,
            MapPolicy::SweepMap, true, true);
        add(CaseId::KmTwoSided, "km-two-sided", "Klamkin-McLenaghan, two-sided bands",
            "G^{-1/2} Phi(B) G^{-1/2} - G^{1/2} Phi(A)^{-1} G^{1/2} <= (sqrt(M2/m1) - sqrt(m2/M1))^2 I",
            InstanceShape::BoxPair, MeanPolicy::GeometricHalf,
            MapPolicy::SweepMap, true, true);
        add(CaseId::VarianceLemma, "variance-lemma", "variance bound",
            "Phi(A^2) - Phi(A)^2 <= (1/4)(a - b)^2 I  for unital Phi",
            InstanceShape::SingleBox, MeanPolicy::NoMean, MapPolicy::UnitalMap,
            false, true);
        add(CaseId::OimsGeneral, "oims-general", "Ozeki-Izumino-Mori-Seo, map form",
            "P^{1/2} Phi(S A^{-1} S) P^{1/2} - |P^{-1/2} Phi(S) P^{1/2}|^2 <= (a1^2/4)(f(v) - f(u))^2 I,  P = Phi(A), S = A s B",
            InstanceShape::BoxPair, MeanPolicy::AnyMean, MapPolicy::SweepMap,
            false, true);
        add(CaseId::OimsVector, "oims-vector", "Ozeki-Izumino-Mori-Seo, vector form",
            "<Ax,x><S A^{-1} S x,x> - <S x,x>^2 <= (a1^2/4)(f(v) - f(u))^2,  S = A s B",
            InstanceShape::BoxPair, MeanPolicy::AnyMean, MapPolicy::VectorOnly,
            false, true);
        add(CaseId::OimsGeometric, "oims-geometric", "Ozeki-Izumino-Mori-Seo, geometric form",
            "<Ax,x><Bx,x> - <A # B x,x>^2 <= ((sqrt(a1 a2) - sqrt(b1 b2))/2)^2 min{a1/b1, a2/b2}",
            InstanceShape::BoxPair, MeanPolicy::GeometricHalf,
            MapPolicy::VectorOnly, true, true);
        add(CaseId::GreubRheinboldt, "greub-rheinboldt", "Greub-Rheinboldt, mean form",
            "Phi(A) #_a Phi(A^{-1}) <= (a/(mu w^{1-a})) Phi(A s A^{-1})",
            InstanceShape::InversePair, MeanPolicy::AnyMeanOmega,
            MapPolicy::SweepMap, false, true);
        add(CaseId::TensorEq8, "tensor-eq8", "tensor supermultiplicativity",
            "(A (x) B) s (C (x) D) <= (A s C) (x) (B s D)  for submultiplicative f",
            InstanceShape::Quad, MeanPolicy::Submult, MapPolicy::NoMap, false,
            true);
        add(CaseId::Had41I, "had-41-i", "Hadamard secant sandwich, nabla form",
            "(w (A o B)) nabla_a (C o D) <= (a/mu) ((A s C) o (B s D))",
            InstanceShape::Quad, MeanPolicy::Submult, MapPolicy::NoMap, false,
            true);
        add(CaseId::Had41II, "had-41-ii", "Hadamard secant sandwich, geometric form",
            "w^{1-a} ((A o B) #_a (C o D)) <= (a/mu) ((A s C) o (B s D))",
            InstanceShape::Quad, MeanPolicy::SubmultOmega, MapPolicy::NoMap,
            false, true);
        add(CaseId::Had41III, "had-41-iii", "Hadamard difference bound, general mean",
            "(A o B) #_a (C o D) - (A s C) o (B s D) <= ((a/mu) w^{a-1} - 1) a1 a2 f(a3 a4/(b1 b2)) I",
            InstanceShape::Quad, MeanPolicy::SubmultOmega, MapPolicy::NoMap,
            false, true);
        add(CaseId::Had41IV, "had-41-iv", "Hadamard additive reverse",
            "(A o B) #_a (C o D) - (A #_a C) o (B #_a D) <= ((1-a)(mu/a)^{a/(a-1)} - nu) a1 a2 I",
            InstanceShape::Quad, MeanPolicy::GeometricAny, MapPolicy::NoMap,
            false, true);
        add(CaseId::Had41V, "had-41-v", "Hadamard Klamkin-McLenaghan",
            "G^{-1/2} (C o D) G^{-1/2} - G^{1/2} (A o B)^{-1} G^{1/2} <= (1/mu - 2 sqrt(w)) I,  G = (A s C) o (B s D)",
            InstanceShape::Quad, MeanPolicy::SubmultOmega, MapPolicy::NoMap,
            true, true);
        add(CaseId::Had42I, "had-42-i", "Hadamard ratio reverse",
            "(A o B) s (C o D) <= K ((A s C) o (B s D))", InstanceShape::Quad,
            MeanPolicy::Submult, MapPolicy::NoMap, false, true);
        add(CaseId::Had42II, "had-42-ii", "Hadamard difference reverse",
            "(A o B) s (C o D) - (A s C) o (B s D) <= -g(t0) (A o B)",
            InstanceShape::Quad, MeanPolicy::Submult, MapPolicy::NoMap, false,
            true);
        add(CaseId::Had41IIIParticular, "had-41-iii-particular",
            "Hadamard difference bound, min refinement (flagged)",
            "(A o B) # (C o D) - (A # C) o (B # D) <= (1/(2 mu sqrt(w)) - 1) min{a1 a2 f(a3 a4/(b1 b2)), a3 a4 a1^{-1} a2^{-1} b3 sqrt(b4)} I",
            InstanceShape::Quad, MeanPolicy::GeometricHalf, MapPolicy::NoMap,
            true, false);
        add(CaseId::Had41IVParticular, "had-41-iv-particular",
            "Hadamard additive reverse, min refinement (flagged)",
            "(A o B) # (C o D) - (A # C) o (B # D) <= (1/(4 mu) - nu) min{a1 a2, a3 a4} I",
            InstanceShape::Quad, MeanPolicy::GeometricHalf, MapPolicy::NoMap,
            true, false);
        return r;
    }();
    return registry;
}

const CaseInfo& case_info(CaseId id) {
    for (const auto& info : case_registry())
        if (info.id == id) return info;
    throw InputError("case_info: unregistered case id");
}

std::optional<CaseId> case_from_key(const std::string& key) {
    for (const auto& info : case_registry())
        if (info.key == key) return info.id;
    return std::nullopt;
}

std::vector<CaseId> default_case_set() {
    std::vector<CaseId> out;
    for (const auto& info : case_registry())
        if (info.in_default_set) out.push_back(info.id);
    return out;
}

std::optional<MapTemplate> map_template_from_name(const std::string& name) {
    if (name == "identity") return MapTemplate::Identity;
    if (name == "compression") return MapTemplate::RandomCompression;
    if (name == "vector-state") return MapTemplate::VectorStateMap;
    if (name == "trace" || name == "normalized-trace")
        return MapTemplate::NormalizedTrace;
    if (name == "subunital-compression") return MapTemplate::SubunitalCompression;
    if (name == "schur") return MapTemplate::RandomSchur;
    if (name == "none") return MapTemplate::None;
    return std::nullopt;
}

std::string map_template_name(MapTemplate t) {
    switch (t) {
        case MapTemplate::None: return "none";
        case MapTemplate::Identity: return "identity";
        case MapTemplate::RandomCompression: return "compression";
        case MapTemplate::VectorStateMap: return "vector-state";
        case MapTemplate::NormalizedTrace: return "normalized-trace";
        case MapTemplate::SubunitalCompression: return "subunital-compression";
        case MapTemplate::RandomSchur: return "schur";
        case MapTemplate::Explicit: return "explicit";
    }
    return "unknown";
}

PositiveMapSpec instantiate_map(MapTemplate t, Eigen::Index dim,
                                RandomStream& rng) {
    switch (t) {
        case MapTemplate::Identity:
            return PositiveMapSpec::identity(dim);
        case MapTemplate::RandomCompression: {
            const Eigen::Index k = std::max<Eigen::Index>(1, dim - 1);
            const ComplexMatrix u = random_unitary(dim, rng);
            return PositiveMapSpec::compression(u.leftCols(k));
        }
        case MapTemplate::VectorStateMap:
            return PositiveMapSpec::vector_state(random_unit_vector(dim, rng));
        case MapTemplate::NormalizedTrace:
            return PositiveMapSpec::normalized_trace();
        case MapTemplate::SubunitalCompression: {
            const Eigen::Index k = std::max<Eigen::Index>(1, dim - 1);
            const ComplexMatrix u = random_unitary(dim, rng);
            return PositiveMapSpec::compression(0.8 * u.leftCols(k));
        }
        case MapTemplate::RandomSchur: {
            // Correlation-type Schur multiplier: PSD with unit diagonal.
            ComplexMatrix g(dim, dim);
            for (Eigen::Index j = 0; j < dim; ++j)
                for (Eigen::Index i = 0; i < dim; ++i)
                    g(i, j) = rng.complex_normal();
            ComplexMatrix w = g * g.adjoint() +
                              0.1 * ComplexMatrix::Identity(dim, dim);
            RealVector inv_root(dim);
            for (Eigen::Index i = 0; i < dim; ++i)
                inv_root(i) = 1.0 / std::sqrt(w(i, i).real());
            const ComplexMatrix s = inv_root.asDiagonal() * w * inv_root.asDiagonal();
            return PositiveMapSpec::schur(hermitian_part(s));
        }
        case MapTemplate::None:
        case MapTemplate::Explicit:
            break;
    }
    throw InputError("instantiate_map: template '" + map_template_name(t) +
                     "' has no random instantiation");
}

namespace {

struct ShapeBands {
    SpectralBounds first;
    SpectralBounds second;
    SpectralBounds rel;
};

SpectralBounds box_band(const std::array<double, 4>& box, int which) {
    return SpectralBounds(box[2 * which + 1], box[2 * which]);
}

std::array<double, 2> certify_band(const HermitianMatrix& m, double lo,
                                   double hi, const std::string& label) {
    const auto d = eigh(m);
    const double tol = 1e-9 * std::max(1.0, std::abs(hi));
    if (d.min() < lo - tol || d.max() > hi + tol)
        throw HypothesisError("certification failed for " + label +
                              ": spectrum [" + std::to_string(d.min()) + ", " +
                              std::to_string(d.max()) + "] outside [" +
                              std::to_string(lo) + ", " + std::to_string(hi) +
                              "]");
    return {d.min(), d.max()};
}

// Relative band of the shape: squared for the Diaz-Metcalf/Shisha band
// m^2 A <= B <= M^2 A, direct for the ratio band m A <= B <= M A.
std::array<double, 2> relative_band(InstanceShape shape,
                                    const BoundConfig& bounds) {
    if (shape == InstanceShape::RelSquared)
        return {bounds.rel_lo * bounds.rel_lo, bounds.rel_hi * bounds.rel_hi};
    return {bounds.rel_lo, bounds.rel_hi};
}

bool map_template_unital(MapTemplate t) {
    switch (t) {
        case MapTemplate::Identity:
        case MapTemplate::RandomCompression:
        case MapTemplate::VectorStateMap:
        case MapTemplate::NormalizedTrace:
        case MapTemplate::RandomSchur:
            return true;
        default:
            return false;
    }
}

}  // namespace

CaseInstance make_instance(CaseId id, std::vector<HermitianMatrix> mats,
                           std::optional<PositiveMapSpec> map,
                           MapTemplate map_template,
                           const RepresentingFunction& f, double alpha,
                           const BoundConfig& requested, std::uint64_t seed) {
    const CaseInfo& info = case_info(id);
    if (mats.empty()) throw InputError("make_instance: no operand matrices");
    const Eigen::Index dim = mats.front().dim();
    for (const auto& m : mats) mats.front().require_same_dim(m);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InputError("alpha must lie in (0,1)");
    if (map) {
        const Eigen::Index want = map->input_dim();
        if (want >= 0 && want != dim)
            throw InputError("make_instance: map dimension mismatch");
    }

    CaseInstance inst;
    inst.id = id;
    inst.dim = dim;
    inst.mats = std::move(mats);
    inst.map = std::move(map);
    inst.map_template = map_template;
    inst.f = f;
    inst.alpha = alpha;
    inst.requested = requested;
    inst.seed = seed;

    // Certify the hypothesis template against the requested bands.
    switch (info.shape) {
        case InstanceShape::BoxPair: {
            if (inst.mats.size() != 2)
                throw InputError("box-pair case needs two matrices");
            inst.certified.push_back(certify_band(
                inst.mats[0], requested.box[1], requested.box[0], "A"));
            inst.certified.push_back(certify_band(
                inst.mats[1], requested.box[3], requested.box[2], "B"));
            break;
        }
        case InstanceShape::RelSquared:
        case InstanceShape::RelDirect: {
            if (inst.mats.size() != 2)
                throw InputError("relative case needs two matrices");
            inst.certified.push_back(certify_band(
                inst.mats[0], requested.box[1], requested.box[0], "A"));
            const auto band = relative_band(info.shape, requested);
            const HermitianMatrix inv_root = matrix_inv_sqrt(inst.mats[0]);
            const HermitianMatrix w = hermitian_part(
                inv_root.matrix() * inst.mats[1].matrix() * inv_root.matrix());
            inst.certified_rel =
                certify_band(w, band[0], band[1], "A^{-1/2} B A^{-1/2}");
            const auto db = eigh(inst.mats[1]);
            inst.certified.push_back({db.min(), db.max()});
            break;
        }
        case InstanceShape::SingleBox: {
            if (inst.mats.size() != 1)
                throw InputError("single-box case needs one matrix");
            inst.certified.push_back(certify_band(
                inst.mats[0], requested.box[1], requested.box[0], "A"));
            break;
        }
        case InstanceShape::InversePair: {
            if (inst.mats.size() != 2)
                throw InputError("inverse-pair case needs two matrices");
            inst.certified.push_back(certify_band(
                inst.mats[0], requested.box[1], requested.box[0], "A"));
            const HermitianMatrix inv = matrix_inverse(inst.mats[0]);
            const double scale = std::max(1.0, inv.frobenius_norm());
            if ((inv.matrix() - inst.mats[1].matrix()).norm() > 1e-9 * scale)
                throw HypothesisError("inverse-pair case: B is not A^{-1}");
            const auto db = eigh(inst.mats[1]);
            inst.certified.push_back({db.min(), db.max()});
            break;
        }
        case InstanceShape::Quad: {
            if (inst.mats.size() != 4)
                throw InputError("quad case needs four matrices");
            static const char* names[] = {"A", "B", "C", "D"};
            for (int i = 0; i < 4; ++i)
                inst.certified.push_back(
                    certify_band(inst.mats[i], requested.quad[2 * i + 1],
                                 requested.quad[2 * i], names[i]));
            break;
        }
    }

    std::ostringstream fp;
    fp << info.key << ":d" << dim << ":" << mean_tag(f, alpha) << ":"
       << map_template_name(map_template) << ":s" << hex_seed(seed);
    inst.fingerprint = fp.str();
    return inst;
}

namespace {

// Needs Phi(A sigma B) and Phi(A) to be inverted downstream; reject badly
// conditioned draws and retry with a derived sub-seed.
bool needs_condition_guard(CaseId id) {
    switch (id) {
        case CaseId::KmGeneral:
        case CaseId::ShishaMond:
        case CaseId::KmTwoSided:
        case CaseId::OimsGeneral:
        case CaseId::OimsVector:
        case CaseId::Had41V:
            return true;
        default:
            return false;
    }
}

bool condition_acceptable(const CaseInstance& inst) {
    const auto cond_of = [](const HermitianMatrix& m) {
        const auto d = eigh(m);
        if (d.min() <= 0.0) return std::numeric_limits<double>::infinity();
        return d.max() / d.min();
    };
    constexpr double kMaxCond = 1e10;
    if (inst.id == CaseId::Had41V) {
        const HermitianMatrix g =
            hadamard(kubo_ando_mean(inst.mats[0], inst.mats[2], inst.f),
                     kubo_ando_mean(inst.mats[1], inst.mats[3], inst.f));
        return cond_of(g) <= kMaxCond;
    }
    const auto phi = [&](const HermitianMatrix& m) {
        return inst.map ? apply_map(*inst.map, m) : m;
    };
    const HermitianMatrix s = kubo_ando_mean(inst.mats[0], inst.mats[1], inst.f);
    return cond_of(phi(s)) <= kMaxCond && cond_of(phi(inst.mats[0])) <= kMaxCond;
}

CaseInstance generate_once(CaseId id, Eigen::Index dim,
                           const BoundConfig& bounds, MapTemplate map_kind,
                           const RepresentingFunction& f, double alpha,
                           std::uint64_t seed,
                           const PositiveMapSpec* fixed_map) {
    const CaseInfo& info = case_info(id);
    RandomStream rng(derive_seed(seed, {0x9E5}));

    // Shared eigenbasis when a commuting family is requested.
    ComplexMatrix shared_u;
    if (bounds.commuting && dim > 1) shared_u = random_unitary(dim, rng);
    const auto draw = [&](const SpectralBounds& band) {
        const std::uint64_t s = rng.next_u64();
        if (bounds.commuting && dim > 1) {
            RandomStream sub(s);
            return hermitian_from_spectrum(
                random_spectrum(dim, band, bounds.pin_endpoints, sub), shared_u);
        }
        return random_banded_hermitian(dim, band, bounds.pin_endpoints, s);
    };

    std::vector<HermitianMatrix> mats;
    switch (info.shape) {
        case InstanceShape::BoxPair: {
            mats.push_back(draw(box_band(bounds.box, 0)));
            mats.push_back(draw(box_band(bounds.box, 1)));
            break;
        }
        case InstanceShape::RelSquared:
        case InstanceShape::RelDirect: {
            const auto band = relative_band(info.shape, bounds);
            const HermitianMatrix a = draw(box_band(bounds.box, 0));
            const HermitianMatrix c = draw(SpectralBounds(band[0], band[1]));
            const HermitianMatrix root = matrix_sqrt(a);
            mats.push_back(a);
            mats.push_back(
                hermitian_part(root.matrix() * c.matrix() * root.matrix()));
            break;
        }
        case InstanceShape::SingleBox: {
            mats.push_back(draw(box_band(bounds.box, 0)));
            break;
        }
        case InstanceShape::InversePair: {
            const HermitianMatrix a = draw(box_band(bounds.box, 0));
            mats.push_back(a);
            mats.push_back(matrix_inverse(a));
            break;
        }
        case InstanceShape::Quad: {
            for (int i = 0; i < 4; ++i)
                mats.push_back(draw(SpectralBounds(bounds.quad[2 * i + 1],
                                                   bounds.quad[2 * i])));
            break;
        }
    }

    std::optional<PositiveMapSpec> map;
    MapTemplate effective = map_kind;
    if (info.map_policy == MapPolicy::NoMap) {
        effective = MapTemplate::None;
    } else if (info.map_policy == MapPolicy::VectorOnly) {
        // Vector-state statements keep an explicitly supplied vector
        // state but replace any other template.
        const bool explicit_vector_state =
            effective == MapTemplate::Explicit && fixed_map &&
            std::holds_alternative<VectorState>(fixed_map->variant());
        if (!explicit_vector_state) effective = MapTemplate::VectorStateMap;
    }
    if (effective == MapTemplate::Explicit) {
        if (!fixed_map)
            throw InputError("generate_instance: explicit template without a map");
        map = *fixed_map;
    } else if (effective != MapTemplate::None) {
        map = instantiate_map(effective, dim, rng);
    }

    return make_instance(id, std::move(mats), std::move(map), effective, f,
                         alpha, bounds, seed);
}

}  // namespace

CaseInstance generate_instance(CaseId id, Eigen::Index dim,
                               const BoundConfig& bounds, MapTemplate map_kind,
                               const RepresentingFunction& f, double alpha,
                               std::uint64_t seed,
                               const PositiveMapSpec* fixed_map) {
    if (dim < 1) throw InputError("generate_instance: dimension must be >= 1");
    CaseInstance inst =
        generate_once(id, dim, bounds, map_kind, f, alpha, seed, fixed_map);
    if (!needs_condition_guard(id)) return inst;
    for (int attempt = 0; attempt < 32; ++attempt) {
        if (condition_acceptable(inst)) return inst;
        inst = generate_once(id, dim, bounds, map_kind, f, alpha,
                             derive_seed(seed, {0xC0DE, (std::uint64_t)attempt}),
                             fixed_map);
    }
    throw HypothesisError(
        "generate_instance: could not draw a well-conditioned instance");
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

namespace {

HermitianMatrix apply_phi(const CaseInstance& inst, const HermitianMatrix& m) {
    return inst.map ? apply_map(*inst.map, m) : m;
}

HermitianMatrix sigma(const CaseInstance& inst, const HermitianMatrix& a,
                      const HermitianMatrix& b) {
    return kubo_ando_mean(a, b, inst.f);
}

void require_geometric(const CaseInstance& inst, bool half) {
    if (inst.f.name != "geometric")
        throw HypothesisError(case_info(inst.id).key +
                              ": requires the weighted geometric mean");
    const double a = inst.f.alpha.value_or(-1.0);
    if (half && std::abs(a - 0.5) > 1e-15)
        throw HypothesisError(case_info(inst.id).key +
                              ": requires the geometric mean at alpha = 1/2");
    if (!half && std::abs(a - inst.alpha) > 1e-15)
        throw HypothesisError(case_info(inst.id).key +
                              ": mean weight must match the instance alpha");
}

void require_submultiplicative(const CaseInstance& inst) {
    if (inst.f.is_submultiplicative == TriState::No)
        throw HypothesisError(case_info(inst.id).key +
                              ": representing function must be submultiplicative");
    if (inst.f.is_submultiplicative == TriState::Unknown)
        throw HypothesisError(case_info(inst.id).key +
                              ": submultiplicativity of '" + inst.f.name +
                              "' is unvalidated");
}

void require_unital(const CaseInstance& inst) {
    if (!inst.map) throw HypothesisError("case requires a positive map");
    const HermitianMatrix phi_id =
        apply_map(*inst.map, HermitianMatrix::identity(inst.dim));
    const HermitianMatrix id_out = HermitianMatrix::identity(phi_id.dim());
    if ((phi_id.matrix() - id_out.matrix()).norm() > 1e-9)
        throw HypothesisError(case_info(inst.id).key + ": map must be unital");
}

void require_subunital(const CaseInstance& inst) {
    if (!inst.map) return;  // identity treatment of no-map cases
    const HermitianMatrix phi_id =
        apply_map(*inst.map, HermitianMatrix::identity(inst.dim));
    const HermitianMatrix id_out = HermitianMatrix::identity(phi_id.dim());
    if (eigh(id_out.minus(phi_id)).min() < -1e-9)
        throw HypothesisError(case_info(inst.id).key +
                              ": map must satisfy Phi(I) <= I");
}

ChordConstants case_chord(const CaseInstance& inst, double alpha) {
    const auto& box = inst.requested.box;
    return chord_constants(inst.f, box[0], box[1], box[2], box[3], alpha);
}

HermitianMatrix identity_like(const HermitianMatrix& m) {
    return HermitianMatrix::identity(m.dim());
}

// Klamkin-McLenaghan shaped LHS: G^{-1/2} Q G^{-1/2} - G^{1/2} P^{-1} G^{1/2}.
HermitianMatrix km_lhs(const HermitianMatrix& g, const HermitianMatrix& q,
                       const HermitianMatrix& p) {
    const HermitianMatrix gi = matrix_inv_sqrt(g);
    const HermitianMatrix gs = matrix_sqrt(g);
    const HermitianMatrix first = hermitian_part(gi.matrix() * q.matrix() * gi.matrix());
    const HermitianMatrix second = hermitian_part(
        gs.matrix() * matrix_inverse(p).matrix() * gs.matrix());
    return first.minus(second);
}

const HermitianMatrix& mat_a(const CaseInstance& i) { return i.mats[0]; }
const HermitianMatrix& mat_b(const CaseInstance& i) { return i.mats[1]; }

}  // namespace

AssembledCase assemble_case(const CaseInstance& inst) {
    const CaseInfo& info = case_info(inst.id);
    if (!(inst.alpha > 0.0 && inst.alpha < 1.0))
        throw HypothesisError("alpha must lie in (0,1)");

    switch (info.mean_policy) {
        case MeanPolicy::GeometricAny: require_geometric(inst, false); break;
        case MeanPolicy::GeometricHalf: require_geometric(inst, true); break;
        case MeanPolicy::Submult: require_submultiplicative(inst); break;
        case MeanPolicy::SubmultOmega: require_submultiplicative(inst); break;
        default: break;
    }
    const double alpha = inst.alpha;

    switch (inst.id) {
        case CaseId::MainLeft: {
            const ChordConstants cc = case_chord(inst, alpha);
            if (!cc.omega_defined)
                throw HypothesisError("main-left: omega is undefined (nu = 0)");
            const HermitianMatrix pa = apply_phi(inst, mat_a(inst));
            const HermitianMatrix pb = apply_phi(inst, mat_b(inst));
            const HermitianMatrix lhs =
                weighted_geometric(pa, pb, alpha)
                    .scaled(std::pow(cc.omega, 1.0 - alpha));
            const HermitianMatrix rhs =
                pa.scaled(alpha * cc.nu / cc.mu).plus(pb.scaled(alpha));
            return {lhs, rhs,
                    {{"mu", cc.mu}, {"nu", cc.nu}, {"omega", cc.omega},
                     {"alpha", alpha}}};
        }
        case CaseId::MainRight: {
            const ChordConstants cc = case_chord(inst, alpha);
            const HermitianMatrix pa = apply_phi(inst, mat_a(inst));
            const HermitianMatrix pb = apply_phi(inst, mat_b(inst));
            const HermitianMatrix lhs =
                pa.scaled(alpha * cc.nu / cc.mu).plus(pb.scaled(alpha));
            const HermitianMatrix rhs =
                apply_phi(inst, sigma(inst, mat_a(inst), mat_b(inst)))
                    .scaled(alpha / cc.mu);
            return {lhs, rhs,
                    {{"mu", cc.mu}, {"nu", cc.nu}, {"omega", cc.omega},
                     {"alpha", alpha}, {"alpha_over_mu", alpha / cc.mu}}};
        }
        case CaseId::Eq3Premap: {
            const ChordConstants cc = case_chord(inst, alpha);
            const HermitianMatrix lhs = mat_b(inst).scaled(alpha).plus(
                mat_a(inst).scaled(alpha * cc.nu / cc.mu));
            const HermitianMatrix rhs =
                sigma(inst, mat_a(inst), mat_b(inst)).scaled(alpha / cc.mu);
            return {lhs, rhs,
                    {{"mu", cc.mu}, {"nu", cc.nu}, {"alpha", alpha}}};
        }
        case CaseId::DmSecond: {
            const auto& box = inst.requested.box;
            const double m1 = std::sqrt(box[1]), big1 = std::sqrt(box[0]);
            const double m2 = std::sqrt(box[3]), big2 = std::sqrt(box[2]);
            const double lhs_coeff = big2 * m2 / (big1 * m1);
            const double rhs_coeff = big2 / m1 + m2 / big1;
            const HermitianMatrix pa = apply_phi(inst, mat_a(inst));
            const HermitianMatrix pb = apply_phi(inst, mat_b(inst));
            const HermitianMatrix lhs = pa.scaled(lhs_coeff).plus(pb);
            const HermitianMatrix rhs =
                apply_phi(inst, sigma(inst, mat_a(inst), mat_b(inst)))
                    .scaled(rhs_coeff);
            return {lhs, rhs,
                    {{"lhs_coeff", lhs_coeff}, {"rhs_coeff", rhs_coeff}}};
        }
        case CaseId::DmFirst: {
            const double m = inst.requested.rel_lo, M = inst.requested.rel_hi;
            const HermitianMatrix pa = apply_phi(inst, mat_a(inst));
            const HermitianMatrix pb = apply_phi(inst, mat_b(inst));
            const HermitianMatrix lhs = pa.scaled(M * m).plus(pb);
            const HermitianMatrix rhs =
                apply_phi(inst, sigma(inst, mat_a(inst), mat_b(inst)))
                    .scaled(M + m);
            return {lhs, rhs, {{"m", m}, {"M", M}}};
        }
        case CaseId::AndoBaseline: {
            const HermitianMatrix lhs =
                apply_phi(inst, sigma(inst, mat_a(inst), mat_b(inst)));
            const HermitianMatrix rhs =
                weighted_geometric(apply_phi(inst, mat_a(inst)),
                                   apply_phi(inst, mat_b(inst)), alpha);
            return {lhs, rhs, {{"alpha", alpha}}};
        }
        case CaseId::RevAndoAdd: {
            const ChordConstants cc = case_chord(inst, alpha);
            const DerivedConstants dc = derived_constants(cc);
            const HermitianMatrix pa = apply_phi(inst, mat_a(inst));
            const HermitianMatrix pb = apply_phi(inst, mat_b(inst));
            const HermitianMatrix lhs =
                weighted_geometric(pa, pb, alpha)
                    .minus(apply_phi(inst, sigma(inst, mat_a(inst), mat_b(inst))));
            const HermitianMatrix rhs = pa.scaled(dc.rev_ando_add);
            return {lhs, rhs,
                    {{"mu", cc.mu}, {"nu", cc.nu},
                     {"rev_ando_add", dc.rev_ando_add}}};
        }
        case CaseId::RevAndoSym: {
            require_subunital(inst);
            const ChordConstants cc = case_chord(inst, 0.5);
            const double coeff = 1.0 / (4.0 * cc.mu) - cc.nu;
            const double min_top =
                std::min(inst.certified[0][1], inst.certified[1][1]);
            const HermitianMatrix pa = apply_phi(inst, mat_a(inst));
            const HermitianMatrix pb = apply_phi(inst, mat_b(inst));
            const HermitianMatrix lhs =
                weighted_geometric(pa, pb, 0.5)
                    .minus(apply_phi(inst, sigma(inst, mat_a(inst), mat_b(inst))));
            const HermitianMatrix rhs =
                identity_like(pa).scaled(coeff * min_top);
            return {lhs, rhs,
                    {{"mu", cc.mu}, {"nu", cc.nu}, {"coeff", coeff},
                     {"min_top", min_top}}};
        }
        case CaseId::RevAndoSeo: {
            const double m = inst.requested.rel_lo, M = inst.requested.rel_hi;
            const ChordConstants cc =
                chord_constants(inst.f, 1.0, 1.0, M, m, alpha);
            const DerivedConstants dc = derived_constants(cc);
            const HermitianMatrix pa = apply_phi(inst, mat_a(inst));
            const HermitianMatrix pb = apply_phi(inst, mat_b(inst));
            const HermitianMatrix lhs =
                weighted_geometric(pa, pb, alpha)
                    .minus(apply_phi(inst, sigma(inst, mat_a(inst), mat_b(inst))));
            const HermitianMatrix rhs = pa.scaled(dc.rev_ando_add);
            return {lhs, rhs,
                    {{"m", m}, {"M", M}, {"seo", dc.rev_ando_add}}};
        }
        case CaseId::KmGeneral: {
            const ChordConstants cc = case_chord(inst, 0.5);
            if (!cc.omega_defined)
                throw HypothesisError("km-general: omega is undefined (nu = 0)");
            const DerivedConstants dc = derived_constants(cc);
            const HermitianMatrix g =
                apply_phi(inst, sigma(inst, mat_a(inst), mat_b(inst)));
            const HermitianMatrix lhs =
                km_lhs(g, apply_phi(inst, mat_b(inst)),
                       apply_phi(inst, mat_a(inst)));
            const HermitianMatrix rhs = identity_like(g).scaled(dc.shisha);
            return {lhs, rhs,
                    {{"mu", cc.mu}, {"omega", cc.omega}, {"shisha", dc.shisha}}};
        }
        case CaseId::ShishaMond: {
            const double m = inst.requested.rel_lo, M = inst.requested.rel_hi;
            const double coeff = std::pow(std::sqrt(M) - std::sqrt(m), 2);
            const HermitianMatrix g =
                apply_phi(inst, sigma(inst, mat_a(inst), mat_b(inst)));
            const HermitianMatrix lhs =
                km_lhs(g, apply_phi(inst, mat_b(inst)),
                       apply_phi(inst, mat_a(inst)));
            const HermitianMatrix rhs = identity_like(g).scaled(coeff);
            return {lhs, rhs, {{"m", m}, {"M", M}, {"coeff", coeff}}};
        }
        case CaseId::KmTwoSided: {
            const auto& box = inst.requested.box;
            const double m1 = std::sqrt(box[1]), big1 = std::sqrt(box[0]);
            const double m2 = std::sqrt(box[3]), big2 = std::sqrt(box[2]);
            const double coeff =
                std::pow(std::sqrt(big2 / m1) - std::sqrt(m2 / big1), 2);
            const HermitianMatrix g =
                apply_phi(inst, sigma(inst, mat_a(inst), mat_b(inst)));
            const HermitianMatrix lhs =
                km_lhs(g, apply_phi(inst, mat_b(inst)),
                       apply_phi(inst, mat_a(inst)));
            const HermitianMatrix rhs = identity_like(g).scaled(coeff);
            return {lhs, rhs, {{"coeff", coeff}}};
        }
        case CaseId::VarianceLemma: {
            require_unital(inst);
            const auto& box = inst.requested.box;
            const double coeff = 0.25 * (box[0] - box[1]) * (box[0] - box[1]);
            const HermitianMatrix& a = mat_a(inst);
            const HermitianMatrix a2 = hermitian_part(a.matrix() * a.matrix());
            const HermitianMatrix pa = apply_phi(inst, a);
            const HermitianMatrix lhs = apply_phi(inst, a2).minus(
                hermitian_part(pa.matrix() * pa.matrix()));
            const HermitianMatrix rhs = identity_like(pa).scaled(coeff);
            return {lhs, rhs, {{"coeff", coeff}}};
        }
        case CaseId::OimsGeneral:
        case CaseId::OimsVector: {
            require_subunital(inst);
            const auto& box = inst.requested.box;
            const double u = box[3] / box[0];
            const double v = box[2] / box[1];
            const double df = inst.f.eval(v) - inst.f.eval(u);
            const double coeff = 0.25 * box[0] * box[0] * df * df;
            const HermitianMatrix s = sigma(inst, mat_a(inst), mat_b(inst));
            const HermitianMatrix q = hermitian_part(
                s.matrix() * matrix_inverse(mat_a(inst)).matrix() * s.matrix());
            const HermitianMatrix p = apply_phi(inst, mat_a(inst));
            const HermitianMatrix ps = matrix_sqrt(p);
            const HermitianMatrix pi = matrix_inverse(p);
            const HermitianMatrix t1 =
                hermitian_part(ps.matrix() * apply_phi(inst, q).matrix() * ps.matrix());
            const ComplexMatrix phi_s = apply_phi(inst, s).matrix();
            const HermitianMatrix t2 = hermitian_part(
                ps.matrix() * phi_s * pi.matrix() * phi_s * ps.matrix());
            return {t1.minus(t2), identity_like(p).scaled(coeff),
                    {{"coeff", coeff}, {"f_u", inst.f.eval(u)},
                     {"f_v", inst.f.eval(v)}}};
        }
        case CaseId::OimsGeometric: {
            // Certified (tighter) bounds feed the min-type constant.
            const double a1 = inst.certified[0][1], b1 = inst.certified[0][0];
            const double a2 = inst.certified[1][1], b2 = inst.certified[1][0];
            const double core =
                std::pow(0.5 * (std::sqrt(a1 * a2) - std::sqrt(b1 * b2)), 2);
            const double coeff = core * std::min(a1 / b1, a2 / b2);
            const HermitianMatrix pa = apply_phi(inst, mat_a(inst));
            const HermitianMatrix pb = apply_phi(inst, mat_b(inst));
            const HermitianMatrix pg = apply_phi(
                inst, weighted_geometric(mat_a(inst), mat_b(inst), 0.5));
            const double lhs_value = pa.scalar_value() * pb.scalar_value() -
                                     pg.scalar_value() * pg.scalar_value();
            return {HermitianMatrix::scalar(lhs_value),
                    HermitianMatrix::scalar(coeff),
                    {{"coeff", coeff}}};
        }
        case CaseId::GreubRheinboldt: {
            const double m = inst.requested.box[1], M = inst.requested.box[0];
            const ChordConstants cc =
                chord_constants(inst.f, M, m, 1.0 / m, 1.0 / M, alpha);
            if (!cc.omega_defined)
                throw HypothesisError(
                    "greub-rheinboldt: omega is undefined (nu = 0)");
            const DerivedConstants dc = derived_constants(cc);
            const HermitianMatrix pa = apply_phi(inst, mat_a(inst));
            const HermitianMatrix pinv = apply_phi(inst, mat_b(inst));
            const HermitianMatrix lhs = weighted_geometric(pa, pinv, alpha);
            const HermitianMatrix rhs =
                apply_phi(inst, sigma(inst, mat_a(inst), mat_b(inst)))
                    .scaled(dc.greub_factor);
            return {lhs, rhs,
                    {{"mu", cc.mu}, {"omega", cc.omega},
                     {"greub_factor", dc.greub_factor}}};
        }
        case CaseId::TensorEq8: {
            const HermitianMatrix lhs =
                sigma(inst, kron(inst.mats[0], inst.mats[1]),
                      kron(inst.mats[2], inst.mats[3]));
            const HermitianMatrix rhs =
                kron(sigma(inst, inst.mats[0], inst.mats[2]),
                     sigma(inst, inst.mats[1], inst.mats[3]));
            return {lhs, rhs, {}};
        }
        default:
            break;
    }

    // Hadamard-product family: four banded operands, entrywise products.
    const HermitianMatrix& a = inst.mats[0];
    const HermitianMatrix& b = inst.mats[1];
    const HermitianMatrix& c = inst.mats[2];
    const HermitianMatrix& d = inst.mats[3];
    const HadamardChordConstants hc = hadamard_constants(
        inst.f, inst.requested.quad, info.constants_at_half ? 0.5 : alpha);
    const HermitianMatrix ab = hadamard(a, b);
    const HermitianMatrix cd = hadamard(c, d);

    switch (inst.id) {
        case CaseId::Had41I: {
            const HermitianMatrix lhs =
                ab.scaled(alpha * hc.nu / hc.mu42).plus(cd.scaled(alpha));
            const HermitianMatrix g =
                hadamard(sigma(inst, a, c), sigma(inst, b, d));
            return {lhs, g.scaled(alpha / hc.mu42),
                    {{"mu", hc.mu42}, {"nu", hc.nu}, {"omega", hc.omega41},
                     {"alpha", alpha}}};
        }
        case CaseId::Had41II: {
            if (!hc.omega41_defined)
                throw HypothesisError("had-41-ii: omega is undefined (nu = 0)");
            const HermitianMatrix lhs =
                weighted_geometric(ab, cd, alpha)
                    .scaled(std::pow(hc.omega41, 1.0 - alpha));
            const HermitianMatrix g =
                hadamard(sigma(inst, a, c), sigma(inst, b, d));
            return {lhs, g.scaled(alpha / hc.mu42),
                    {{"mu", hc.mu42}, {"nu", hc.nu}, {"omega", hc.omega41}}};
        }
        case CaseId::Had41III: {
            if (!hc.omega41_defined)
                throw HypothesisError("had-41-iii: omega is undefined (nu = 0)");
            const auto& q = inst.requested.quad;
            const double ratio =
                (alpha / hc.mu42) * std::pow(hc.omega41, alpha - 1.0);
            const double coeff =
                (ratio - 1.0) * q[0] * q[2] *
                inst.f.eval(q[4] * q[6] / (q[1] * q[3]));
            const HermitianMatrix g =
                hadamard(sigma(inst, a, c), sigma(inst, b, d));
            const HermitianMatrix lhs =
                weighted_geometric(ab, cd, alpha).minus(g);
            return {lhs, identity_like(ab).scaled(coeff),
                    {{"ratio", ratio}, {"coeff", coeff}}};
        }
        case CaseId::Had41IV: {
            const double rev =
                (1.0 - alpha) * std::pow(hc.mu42 / alpha, alpha / (alpha - 1.0)) -
                hc.nu42;
            const auto& q = inst.requested.quad;
            const double coeff = rev * q[0] * q[2];
            const HermitianMatrix lhs =
                weighted_geometric(ab, cd, alpha)
                    .minus(hadamard(weighted_geometric(a, c, alpha),
                                    weighted_geometric(b, d, alpha)));
            return {lhs, identity_like(ab).scaled(coeff),
                    {{"rev", rev}, {"coeff", coeff}}};
        }
        case CaseId::Had41V: {
            if (!hc.omega41_defined)
                throw HypothesisError("had-41-v: omega is undefined (nu = 0)");
            const double omega_half = hc.nu42 / hc.mu42;
            const double coeff =
                1.0 / hc.mu42 - 2.0 * std::sqrt(omega_half);
            const HermitianMatrix g =
                hadamard(sigma(inst, a, c), sigma(inst, b, d));
            const HermitianMatrix lhs = km_lhs(g, cd, ab);
            return {lhs, identity_like(g).scaled(coeff),
                    {{"mu", hc.mu42}, {"omega", omega_half}, {"coeff", coeff}}};
        }
        case CaseId::Had42I: {
            const HermitianMatrix lhs = sigma(inst, ab, cd);
            const HermitianMatrix g =
                hadamard(sigma(inst, a, c), sigma(inst, b, d));
            return {lhs, g.scaled(hc.K),
                    {{"K", hc.K}, {"c", hc.c}, {"mu", hc.mu42}, {"nu", hc.nu42}}};
        }
        case CaseId::Had42II: {
            const HermitianMatrix g =
                hadamard(sigma(inst, a, c), sigma(inst, b, d));
            const HermitianMatrix lhs = sigma(inst, ab, cd).minus(g);
            const HermitianMatrix rhs = ab.scaled(-hc.g_at_t0);
            return {lhs, rhs,
                    {{"t0", hc.t0}, {"neg_g_t0", -hc.g_at_t0},
                     {"mu", hc.mu42}, {"nu", hc.nu42}}};
        }
        case CaseId::Had41IIIParticular: {
            const double omega_half = hc.nu42 / hc.mu42;
            const double ratio =
                1.0 / (2.0 * hc.mu42 * std::sqrt(omega_half)) - 1.0;
            // Certified bounds feed both arms of the min.
            const double a1 = inst.certified[0][1], b1 = inst.certified[0][0];
            const double a2 = inst.certified[1][1], b2 = inst.certified[1][0];
            const double a3 = inst.certified[2][1], b3 = inst.certified[2][0];
            const double a4 = inst.certified[3][1], b4 = inst.certified[3][0];
            const double arm1 = a1 * a2 * inst.f.eval(a3 * a4 / (b1 * b2));
            const double arm2 = a3 * a4 / (a1 * a2) * b3 * std::sqrt(b4);
            const double coeff = ratio * std::min(arm1, arm2);
            const HermitianMatrix g =
                hadamard(sigma(inst, a, c), sigma(inst, b, d));
            const HermitianMatrix lhs = weighted_geometric(ab, cd, 0.5).minus(g);
            return {lhs, identity_like(ab).scaled(coeff),
                    {{"ratio", ratio}, {"arm1", arm1}, {"arm2", arm2},
                     {"coeff", coeff}}};
        }
        case CaseId::Had41IVParticular: {
            const double rev = 1.0 / (4.0 * hc.mu42) - hc.nu42;
            const double a1 = inst.certified[0][1];
            const double a2 = inst.certified[1][1];
            const double a3 = inst.certified[2][1];
            const double a4 = inst.certified[3][1];
            const double coeff = rev * std::min(a1 * a2, a3 * a4);
            const HermitianMatrix lhs =
                weighted_geometric(ab, cd, 0.5)
                    .minus(hadamard(weighted_geometric(a, c, 0.5),
                                    weighted_geometric(b, d, 0.5)));
            return {lhs, identity_like(ab).scaled(coeff),
                    {{"rev", rev}, {"coeff", coeff}}};
        }
        default:
            throw InputError("assemble_case: unhandled case id");
    }
}

Certificate run_case(CaseId id, const CaseInstance& inst, Tolerance tol) {
    if (inst.id != id)
        throw InputError("run_case: instance was generated for a different case");
    const AssembledCase built = assemble_case(inst);
    Certificate cert;
    cert.case_key = case_info(id).key;
    cert.order = loewner_compare(built.lhs, built.rhs, tol.abs, tol.rel);
    cert.lhs_norm = spectral_norm(built.lhs);
    cert.rhs_norm = spectral_norm(built.rhs);
    cert.constants = built.constants;
    cert.fingerprint = inst.fingerprint;
    return cert;
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

namespace {

double scalar_chord_nu(const RepresentingFunction& f, double u, double v) {
    const double mu = (f.eval(v) - f.eval(u)) / (v - u);
    return f.eval(u) - mu * u;
}

}  // namespace

bool case_accepts_mean(CaseId id, const RepresentingFunction& f, double alpha,
                       const BoundConfig& bounds, bool allow_unknown_submult) {
    const CaseInfo& info = case_info(id);
    if (!(alpha > 0.0 && alpha < 1.0)) return false;
    const auto omega_defined = [&]() {
        double u = 0.0, v = 0.0;
        switch (info.shape) {
            case InstanceShape::InversePair:
                // Bands (a1, b1, a2, b2) = (M, m, 1/m, 1/M).
                u = 1.0 / (bounds.box[0] * bounds.box[0]);
                v = 1.0 / (bounds.box[1] * bounds.box[1]);
                break;
            case InstanceShape::Quad:
                u = bounds.quad[5] * bounds.quad[7] /
                    (bounds.quad[0] * bounds.quad[2]);
                v = bounds.quad[4] * bounds.quad[6] /
                    (bounds.quad[1] * bounds.quad[3]);
                break;
            default:
                u = bounds.box[3] / bounds.box[0];
                v = bounds.box[2] / bounds.box[1];
                break;
        }
        return scalar_chord_nu(f, u, v) > 1e-14;
    };
    const auto submult_ok = [&]() {
        if (f.is_submultiplicative == TriState::Yes) return true;
        if (f.is_submultiplicative == TriState::Unknown)
            return allow_unknown_submult;
        return false;
    };
    switch (info.mean_policy) {
        case MeanPolicy::AnyMean:
            return true;
        case MeanPolicy::AnyMeanOmega:
            return omega_defined();
        case MeanPolicy::GeometricAny:
            return f.name == "geometric" && f.alpha &&
                   std::abs(*f.alpha - alpha) < 1e-15;
        case MeanPolicy::GeometricHalf:
            return f.name == "geometric" && f.alpha &&
                   std::abs(*f.alpha - 0.5) < 1e-15 &&
                   std::abs(alpha - 0.5) < 1e-15;
        case MeanPolicy::Submult:
            return submult_ok();
        case MeanPolicy::SubmultOmega:
            return submult_ok() && omega_defined();
        case MeanPolicy::NoMean:
            return true;
    }
    return false;
}

bool case_accepts_map(CaseId id, MapTemplate t) {
    const CaseInfo& info = case_info(id);
    switch (info.map_policy) {
        case MapPolicy::SweepMap:
            return t != MapTemplate::None;
        case MapPolicy::UnitalMap:
            return map_template_unital(t) || t == MapTemplate::Explicit;
        case MapPolicy::VectorOnly:
        case MapPolicy::NoMap:
            return true;  // template overridden inside generation
    }
    return false;
}

// Numeric unitality probe for explicit maps (templates carry the flag
// structurally).
static bool explicit_map_unital(const PositiveMapSpec& spec) {
    const Eigen::Index din = spec.input_dim();
    if (din < 1) return true;  // normalized trace accepts any dimension
    const HermitianMatrix phi_id =
        apply_map(spec, HermitianMatrix::identity(din));
    return (phi_id.matrix() -
            ComplexMatrix::Identity(phi_id.dim(), phi_id.dim()))
               .norm() <= 1e-9;
}

std::vector<RepresentingFunction> SuiteConfig::default_mean_sweep() {
    std::vector<RepresentingFunction> sweep;
    for (double a : {0.25, 0.5, 0.75}) sweep.push_back(representing_fn("geometric", a));
    sweep.push_back(representing_fn("arithmetic", 0.5));
    sweep.push_back(representing_fn("right-trivial", 0.0));
    return sweep;
}

namespace {

CaseAggregate run_case_block(const SuiteConfig& config, CaseId id) {
    const CaseInfo& info = case_info(id);
    CaseAggregate agg;
    agg.case_key = info.key;
    const std::uint64_t case_hash = fnv1a64(info.key);

    const bool have_explicit = config.explicit_map.has_value();
    const bool explicit_unital =
        have_explicit && explicit_map_unital(*config.explicit_map);

    for (Eigen::Index dim : config.dims) {
        for (int trial = 0; trial < config.trials; ++trial) {
            const RepresentingFunction& mean =
                config.means[trial % config.means.size()];
            const MapTemplate map_t =
                have_explicit
                    ? MapTemplate::Explicit
                    : config.maps[(trial / config.means.size()) %
                                  config.maps.size()];
            double alpha = mean.alpha.value_or(0.5);
            if (!(alpha > 0.0 && alpha < 1.0)) alpha = 0.5;

            bool accepted =
                case_accepts_mean(id, mean, alpha, config.bounds,
                                  config.allow_unknown_submult) &&
                case_accepts_map(id, map_t);
            if (accepted && map_t == MapTemplate::Explicit &&
                info.map_policy == MapPolicy::UnitalMap && !explicit_unital)
                accepted = false;
            if (!accepted) {
                ++agg.skipped;
                continue;
            }

            const std::uint64_t seed = derive_seed(
                config.seed, {case_hash, (std::uint64_t)dim, (std::uint64_t)trial});
            const CaseInstance inst = generate_instance(
                id, dim, config.bounds, map_t, mean, alpha, seed,
                have_explicit ? &*config.explicit_map : nullptr);
            const Certificate cert = run_case(id, inst, config.tol);

            ++agg.trials;
            if (cert.order.holds) {
                ++agg.passes;
                if (cert.order.numerical_equality) ++agg.numerical_equalities;
            } else {
                ++agg.failures;
                agg.failure_dumps.push_back(FailureRecord{cert, inst});
            }
            if (cert.order.min_gap_eig < agg.worst_min_gap) {
                agg.worst_min_gap = cert.order.min_gap_eig;
                agg.worst_fingerprint = cert.fingerprint;
            }
        }
    }
    return agg;
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& config) {
    if (config.trials < 1) throw InputError("run_suite: trials must be >= 1");
    if (config.dims.empty()) throw InputError("run_suite: no dimensions given");
    for (Eigen::Index d : config.dims)
        if (d < 1) throw InputError("run_suite: dimensions must be >= 1");
    if (config.means.empty())
        throw InputError("run_suite: no representing functions given");
    if (config.maps.empty()) throw InputError("run_suite: no maps given");

    std::vector<CaseId> cases = config.cases;
    std::sort(cases.begin(), cases.end(), [](CaseId a, CaseId b) {
        return case_info(a).key < case_info(b).key;
    });
    cases.erase(std::unique(cases.begin(), cases.end()), cases.end());

    SuiteResult result;
    result.per_case.resize(cases.size());

    unsigned workers = config.threads > 0
                           ? unsigned(config.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, cases.size() == 0 ? 1 : cases.size());

    if (workers <= 1) {
        for (std::size_t i = 0; i < cases.size(); ++i)
            result.per_case[i] = run_case_block(config, cases[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.push_back(std::async(std::launch::async, [&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cases.size()) return;
                    result.per_case[i] = run_case_block(config, cases[i]);
                }
            }));
        }
        for (auto& f : pool) f.get();
    }

    for (const auto& agg : result.per_case) {
        result.total_trials += agg.trials;
        result.total_failures += agg.failures;
        result.total_numerical_equalities += agg.numerical_equalities;
        result.total_skipped += agg.skipped;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Sharpness scan
// ---------------------------------------------------------------------------

namespace {

// Structured near-equality families: endpoint-pinned random draws,
// two-point spectra with an aligned vector state, and twin/commuting
// operands.
CaseInstance generate_sharp_instance(CaseId id, const SharpnessConfig& cfg,
                                     const RepresentingFunction& mean,
                                     int family, std::uint64_t seed) {
    const CaseInfo& info = case_info(id);
    BoundConfig bounds = cfg.bounds;
    bounds.pin_endpoints = true;
    if (family == 2) bounds.commuting = true;

    if (family != 1)
        return generate_instance(id, cfg.dim, bounds, cfg.map, mean, cfg.alpha,
                                 seed);

    // Two-point spectra on a shared basis; vector states aligned with the
    // extreme eigenvectors.
    RandomStream rng(derive_seed(seed, {0x29}));
    const Eigen::Index d = cfg.dim;
    const ComplexMatrix u = d > 1 ? random_unitary(d, rng)
                                  : ComplexMatrix::Identity(1, 1);
    const auto two_point = [&](double lo, double hi) {
        RealVector lam(d);
        for (Eigen::Index i = 0; i < d; ++i)
            lam(i) = rng.uniform() < 0.5 ? lo : hi;
        if (d >= 2) {
            lam(0) = lo;
            lam(d - 1) = hi;
        }
        std::sort(lam.data(), lam.data() + d);
        return hermitian_from_spectrum(lam, u);
    };

    std::vector<HermitianMatrix> mats;
    switch (info.shape) {
        case InstanceShape::BoxPair:
            mats.push_back(two_point(bounds.box[1], bounds.box[0]));
            mats.push_back(two_point(bounds.box[3], bounds.box[2]));
            break;
        case InstanceShape::SingleBox:
            mats.push_back(two_point(bounds.box[1], bounds.box[0]));
            break;
        case InstanceShape::InversePair: {
            const HermitianMatrix a = two_point(bounds.box[1], bounds.box[0]);
            mats.push_back(a);
            mats.push_back(matrix_inverse(a));
            break;
        }
        case InstanceShape::RelSquared:
        case InstanceShape::RelDirect: {
            const auto band = relative_band(info.shape, bounds);
            const HermitianMatrix a = two_point(bounds.box[1], bounds.box[0]);
            const HermitianMatrix c = two_point(band[0], band[1]);
            const HermitianMatrix root = matrix_sqrt(a);
            mats.push_back(a);
            mats.push_back(
                hermitian_part(root.matrix() * c.matrix() * root.matrix()));
            break;
        }
        case InstanceShape::Quad:
            for (int i = 0; i < 4; ++i)
                mats.push_back(
                    two_point(bounds.quad[2 * i + 1], bounds.quad[2 * i]));
            break;
    }

    std::optional<PositiveMapSpec> map;
    MapTemplate effective = cfg.map;
    if (info.map_policy == MapPolicy::NoMap) {
        effective = MapTemplate::None;
    } else if (info.map_policy == MapPolicy::VectorOnly ||
               cfg.map == MapTemplate::VectorStateMap) {
        effective = MapTemplate::VectorStateMap;
        // Equal superposition of the extreme eigenvectors.
        ComplexVector x;
        if (d >= 2) {
            x = (u.col(0) + u.col(d - 1)) / std::sqrt(2.0);
        } else {
            x = ComplexVector::Unit(1, 0);
        }
        map = PositiveMapSpec::vector_state(x);
    }
    if (!map && effective != MapTemplate::None)
        map = instantiate_map(effective, d, rng);

    return make_instance(id, std::move(mats), std::move(map), effective, mean,
                         cfg.alpha, bounds, seed);
}

}  // namespace

SharpnessResult sharpness_scan(CaseId id, const SharpnessConfig& config,
                               int budget) {
    if (budget < 1) throw InputError("sharpness_scan: budget must be >= 1");
    const RepresentingFunction mean =
        representing_fn(config.mean_kind, config.alpha);
    static const char* family_names[] = {"pinned", "two-point", "twin"};

    SharpnessResult result;
    std::vector<SharpnessRecord> records;
    const std::uint64_t case_hash = fnv1a64(case_info(id).key);
    for (int t = 0; t < budget; ++t) {
        const int family = t % 3;
        if (!case_accepts_mean(id, mean, config.alpha, config.bounds, false))
            throw HypothesisError("sharpness_scan: mean '" + mean.name +
                                  "' does not satisfy the case hypotheses");
        const std::uint64_t seed =
            derive_seed(config.seed, {case_hash, (std::uint64_t)t});
        const CaseInstance inst =
            generate_sharp_instance(id, config, mean, family, seed);
        const Certificate cert = run_case(id, inst, config.tol);
        ++result.evaluated;
        if (!cert.order.holds) {
            ++result.violations;
            continue;  // a defect, never reported as sharp
        }
        SharpnessRecord rec;
        rec.fingerprint = cert.fingerprint;
        rec.family = family_names[family];
        rec.min_gap = cert.order.min_gap_eig;
        rec.scale = cert.order.scale;
        rec.rel_gap = cert.order.min_gap_eig / std::max(1.0, cert.order.scale);
        records.push_back(rec);
    }
    std::sort(records.begin(), records.end(),
              [](const SharpnessRecord& a, const SharpnessRecord& b) {
                  return a.rel_gap < b.rel_gap;
              });
    if (int(records.size()) > config.top_k) records.resize(config.top_k);
    result.top = std::move(records);
    return result;
}

}  // namespace meanscope
