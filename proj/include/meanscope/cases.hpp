#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meanscope/constants.hpp"
#include "meanscope/hadamard.hpp"
#include "meanscope/positive_map.hpp"

namespace meanscope {

enum class CaseId {
    MainLeft,
    MainRight,
    Eq3Premap,
    DmSecond,
    DmFirst,
    AndoBaseline,
    RevAndoAdd,
    RevAndoSym,
    RevAndoSeo,
    KmGeneral,
    ShishaMond,
    KmTwoSided,
    VarianceLemma,
    OimsGeneral,
    OimsVector,
    OimsGeometric,
    GreubRheinboldt,
    TensorEq8,
    Had41I,
    Had41II,
    Had41III,
    Had41IV,
    Had41V,
    Had42I,
    Had42II,
    Had41IIIParticular,  // opt-in: min-refined constant, not in "all"
    Had41IVParticular,   // opt-in: min-refined constant, not in "all"
};

// Which matrices an instance carries and how they are related.
enum class InstanceShape {
    BoxPair,      // A in [b1,a1], B in [b2,a2]
    RelSquared,   // A in [b1,a1], B = A^{1/2} C A^{1/2}, spec(C) in [m^2, M^2]
    RelDirect,    // same with spec(C) in [m, M]
    SingleBox,    // A only
    InversePair,  // A in [m, M], B = A^{-1}
    Quad,         // A, B, C, D in their own boxes
};

enum class MeanPolicy {
    AnyMean,        // any registered representing function
    AnyMeanOmega,   // any mean whose chord intercept is positive
    GeometricAny,   // weighted geometric, any alpha in (0,1)
    GeometricHalf,  // the geometric mean (alpha = 1/2)
    Submult,        // submultiplicative representing function
    SubmultOmega,   // submultiplicative and positive chord intercept
    NoMean,
};

enum class MapPolicy {
    SweepMap,     // any positive linear map
    UnitalMap,    // Phi(I) = I required
    VectorOnly,   // the statement is about vector states
    NoMap,
};

struct CaseInfo {
    CaseId id;
    std::string key;        // stable string id used by CLI and reports
    std::string name;       // classical attribution / short label
    std::string statement;  // the certified inequality, ASCII form
    InstanceShape shape;
    MeanPolicy mean_policy;
    MapPolicy map_policy;
    bool constants_at_half = false;  // constants fixed at alpha = 1/2
    bool in_default_set = true;
};

const std::vector<CaseInfo>& case_registry();
const CaseInfo& case_info(CaseId id);
std::optional<CaseId> case_from_key(const std::string& key);
std::vector<CaseId> default_case_set();

// Generation targets; relative bands and quad boxes have their own slots.
struct BoundConfig {
    std::array<double, 4> box{4.0, 1.0, 4.0, 1.0};  // a1, b1, a2, b2
    std::array<double, 8> quad{4.0, 1.0, 4.0, 1.0, 4.0, 1.0, 4.0, 1.0};
    double rel_lo = 1.0;  // m of  m A <= B <= M A  (squared per case shape)
    double rel_hi = 2.0;  // M
    bool pin_endpoints = true;
    bool commuting = false;  // share one eigenbasis across operands
};

enum class MapTemplate {
    None,
    Identity,
    RandomCompression,    // random isometry, unital
    VectorStateMap,
    NormalizedTrace,
    SubunitalCompression, // 0.8 x isometry, Phi(I) = 0.64 I
    RandomSchur,          // correlation-matrix Schur multiplier, unital
    Explicit,             // caller-supplied concrete PositiveMapSpec
};

std::optional<MapTemplate> map_template_from_name(const std::string& name);
std::string map_template_name(MapTemplate t);

PositiveMapSpec instantiate_map(MapTemplate t, Eigen::Index dim,
                                RandomStream& rng);

struct CaseInstance {
    CaseId id;
    Eigen::Index dim = 0;
    std::vector<HermitianMatrix> mats;  // A, B [, C, D]
    std::optional<PositiveMapSpec> map;
    MapTemplate map_template = MapTemplate::None;
    RepresentingFunction f;
    double alpha = 0.5;
    BoundConfig requested;
    // Post-generation certification: eigenvalue ranges per operand and,
    // for relative shapes, of A^{-1/2} B A^{-1/2}.
    std::vector<std::array<double, 2>> certified;
    std::array<double, 2> certified_rel{0.0, 0.0};
    std::uint64_t seed = 0;
    std::string fingerprint;
};

// `fixed_map` backs MapTemplate::Explicit; ignored for other templates
// (and by no-map / vector-state-only case shapes).
CaseInstance generate_instance(CaseId id, Eigen::Index dim,
                               const BoundConfig& bounds, MapTemplate map_kind,
                               const RepresentingFunction& f, double alpha,
                               std::uint64_t seed,
                               const PositiveMapSpec* fixed_map = nullptr);

// Wrap explicitly supplied operands (witness instances); certifies the
// case hypothesis template against the requested bands.
CaseInstance make_instance(CaseId id, std::vector<HermitianMatrix> mats,
                           std::optional<PositiveMapSpec> map,
                           MapTemplate map_template,
                           const RepresentingFunction& f, double alpha,
                           const BoundConfig& requested, std::uint64_t seed);

struct AssembledCase {
    HermitianMatrix lhs;
    HermitianMatrix rhs;
    std::map<std::string, double> constants;
};

// LHS/RHS exactly as the certified statement reads; throws
// HypothesisError when the instance does not satisfy the case template.
AssembledCase assemble_case(const CaseInstance& inst);

struct Tolerance {
    double abs = kDefaultTolAbs;
    double rel = kDefaultTolRel;
};

struct Certificate {
    std::string case_key;
    OrderCertificate order;
    double lhs_norm = 0.0;
    double rhs_norm = 0.0;
    std::map<std::string, double> constants;
    std::string fingerprint;
};

Certificate run_case(CaseId id, const CaseInstance& inst, Tolerance tol = {});

// True when the (mean, map) combination can satisfy the case hypotheses
// for the given bound configuration; used by suites to skip rather than
// fail incompatible sweep entries.
bool case_accepts_mean(CaseId id, const RepresentingFunction& f, double alpha,
                       const BoundConfig& bounds, bool allow_unknown_submult);
bool case_accepts_map(CaseId id, MapTemplate t);

struct SuiteConfig {
    std::vector<CaseId> cases = default_case_set();
    std::vector<Eigen::Index> dims{1, 2, 3, 5, 8};
    int trials = 200;
    std::uint64_t seed = 42;
    Tolerance tol;
    static std::vector<RepresentingFunction> default_mean_sweep();
    // Sweep entries; trial t uses means[t % means] and maps[t / means % maps].
    std::vector<RepresentingFunction> means = default_mean_sweep();
    std::vector<MapTemplate> maps{MapTemplate::Identity,
                                  MapTemplate::RandomCompression,
                                  MapTemplate::VectorStateMap,
                                  MapTemplate::NormalizedTrace};
    BoundConfig bounds;
    // When set, every mapped case uses this concrete map (dims must match
    // its input dimension); `maps` is ignored.
    std::optional<PositiveMapSpec> explicit_map;
    bool allow_unknown_submult = false;
    int threads = 0;  // 0 = auto
};

struct FailureRecord {
    Certificate certificate;
    CaseInstance instance;
};

struct CaseAggregate {
    std::string case_key;
    int trials = 0;
    int passes = 0;
    int numerical_equalities = 0;
    int failures = 0;
    int skipped = 0;
    double worst_min_gap = std::numeric_limits<double>::infinity();
    std::string worst_fingerprint;
    std::vector<FailureRecord> failure_dumps;
};

struct SuiteResult {
    std::vector<CaseAggregate> per_case;  // sorted by case key
    int total_trials = 0;
    int total_failures = 0;
    int total_numerical_equalities = 0;
    int total_skipped = 0;
};

SuiteResult run_suite(const SuiteConfig& config);

struct SharpnessConfig {
    Eigen::Index dim = 2;
    std::string mean_kind = "geometric";
    double alpha = 0.5;
    MapTemplate map = MapTemplate::VectorStateMap;
    BoundConfig bounds;
    std::uint64_t seed = 42;
    Tolerance tol;
    int top_k = 5;
};

struct SharpnessRecord {
    std::string fingerprint;
    std::string family;  // pinned / two-point / twin
    double min_gap = 0.0;
    double scale = 0.0;
    double rel_gap = 0.0;  // min_gap / max(scale, 1)
};

struct SharpnessResult {
    std::vector<SharpnessRecord> top;  // ascending by rel_gap, no violations
    int violations = 0;                // gaps beyond tolerance (defects)
    int evaluated = 0;
};

SharpnessResult sharpness_scan(CaseId id, const SharpnessConfig& config,
                               int budget);

}  // namespace meanscope
