#pragma once

#include <memory>
#include <string>
#include <variant>

#include "meanscope/spectral.hpp"

namespace meanscope {

class PositiveMapSpec;

// M  ->  V* M V with V*V <= I (d_in x d_out).
struct Compression {
    ComplexMatrix v;
};

// M  ->  [<M x, x>] for a unit vector x; output is 1x1.
struct VectorState {
    ComplexVector x;
};

// M  ->  S o M for PSD S with diagonal entries <= 1.
struct SchurMultiplier {
    ComplexMatrix s;
};

// M  ->  [(tr M) / d].
struct NormalizedTraceMap {};

// C  ->  inner(A0^{1/2} C A0^{1/2}) for strictly positive A0.
struct CongruenceThen {
    ComplexMatrix a0;
    std::shared_ptr<const PositiveMapSpec> inner;
};

// M on H (x) H  ->  U* M U with U e_n = e_n (x) e_n.
struct HadamardCompression {
    Eigen::Index d;
};

using MapVariant = std::variant<Compression, VectorState, SchurMultiplier,
                                NormalizedTraceMap, CongruenceThen,
                                HadamardCompression>;

// Declarative positive linear map; construction validates the variant
// constraint (V*V <= I, ||x|| = 1, S PSD with diag <= 1, A0 > 0).
class PositiveMapSpec {
  public:
    explicit PositiveMapSpec(MapVariant v);

    static PositiveMapSpec identity(Eigen::Index d);
    static PositiveMapSpec compression(ComplexMatrix v);
    static PositiveMapSpec vector_state(ComplexVector x);
    static PositiveMapSpec schur(const HermitianMatrix& s);
    static PositiveMapSpec normalized_trace();
    static PositiveMapSpec congruence_then(const HermitianMatrix& a0,
                                           PositiveMapSpec inner);
    static PositiveMapSpec hadamard_compression(Eigen::Index d);

    const MapVariant& variant() const { return variant_; }

    // Input dimension, or -1 when any dimension is accepted
    // (normalized trace).
    Eigen::Index input_dim() const;
    Eigen::Index output_dim(Eigen::Index in_dim) const;

    std::string kind_name() const;

  private:
    MapVariant variant_;
};

HermitianMatrix apply_map(const PositiveMapSpec& spec, const HermitianMatrix& m);

struct MapReport {
    int trials = 0;
    double positivity_pass = 0.0;   // fraction of PSD inputs mapped to PSD
    double linearity_residual = 0.0;
    double subunital_gap = 0.0;     // smallest eigenvalue of I - Phi(I)
    double superunital_gap = 0.0;   // smallest eigenvalue of Phi(I) - I
    bool is_unital = false;
    bool is_subunital = false;      // qualifies for Phi(I) <= I hypotheses
};

MapReport validate_map(const PositiveMapSpec& spec, Eigen::Index dim,
                       int trials, std::uint64_t seed);

}  // namespace meanscope
