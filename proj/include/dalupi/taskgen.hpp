#pragma once

#include <cstdint>
#include <string>

#include "dalupi/samples.hpp"
#include "dalupi/world.hpp"

namespace dalupi {

/// Which identification assumption (if any) the generated world violates.
/// Each knob breaks exactly the named assumption and provably preserves the
/// other two; gen_world verifies this on every output and refuses to return
/// a world that does not match its knob.
enum class WorldKnob { None, BreakOverlapW, BreakSufficiency, BreakCovariateShiftW };

const char* knob_name(WorldKnob k);
WorldKnob knob_from_name(const std::string& s);

struct WorldGenSpec {
    std::size_t x_card = 6;
    std::size_t w_card = 4;
    std::size_t y_card = 3;
    WorldKnob knob = WorldKnob::None;
    /// Sharpness of the random simplex draws: large values give near-uniform
    /// rows, small values spiky ones. Must be > 0.
    double concentration = 1.0;
    std::uint64_t seed = 0;
};

json world_gen_spec_to_json(const WorldGenSpec& s);
WorldGenSpec world_gen_spec_from_json(const json& j);

DiscreteWorld gen_world(const WorldGenSpec& spec);

/// Sample sizes per data role.
struct RoleCounts {
    std::size_t source_labeled = 0;
    std::size_t target_pi = 0;
    std::size_t target_unlabeled = 0;
    std::size_t target_labeled = 0;
    std::size_t test_source = 0;
    std::size_t test_target = 0;

    std::size_t of(Role r) const;
};

json role_counts_to_json(const RoleCounts& c);
RoleCounts role_counts_from_json(const json& j);

/// Image classification task with a class-coded patch and class-skewed
/// background textures. Every image is one of num_backgrounds global
/// textures plus a patch_size^2 patch at a uniform random position whose
/// interior intensity encodes the label; pixel noise is added everywhere.
/// In the source domain the background index b follows
/// P(b|y) = epsilon if b == y else (1-epsilon)/(c-1), so at epsilon = 1 the
/// background is a perfect label proxy that a source-only learner can latch
/// onto; in the target domain b is uniform and carries no information. The
/// PI is the patch box plus its ground-truth pixels (SingleBox).
///
/// The target-domain streams never consume epsilon, so for fixed seed and
/// counts every target-side sample is bitwise identical across epsilon.
struct SkewTaskSpec {
    std::size_t num_classes = 5;
    double epsilon = 0.2;  // in [1/num_classes, 1]
    std::size_t image_size = 32;
    std::size_t patch_size = 8;
    std::size_t num_backgrounds = 5;  // must equal num_classes
    double noise_sigma = 0.02;
    double background_amplitude = 0.22;
    RoleCounts counts;
    std::uint64_t seed = 0;
};

json skew_task_spec_to_json(const SkewTaskSpec& s);
SkewTaskSpec skew_task_spec_from_json(const json& j);

SampleSet gen_skew_task(const SkewTaskSpec& spec);

/// Binary classification task with binary attribute PI. The label depends
/// on the attributes through a fixed logistic rule shared by both domains;
/// attribute marginals shift across domains by `shift`, and x carries the
/// attributes twice: an informative block shared across domains and a
/// redundant block whose layout and offset flip between domains, so
/// shortcuts through the redundant block do not transfer.
struct AttributeTaskSpec {
    std::size_t attr_dim = 7;
    double shift = 0.5;  // in [0, 1]; 0 would make the W marginals equal
    double noise_sigma = 0.1;
    RoleCounts counts;
    std::uint64_t seed = 0;
};

json attribute_task_spec_to_json(const AttributeTaskSpec& s);
AttributeTaskSpec attribute_task_spec_from_json(const json& j);

SampleSet gen_attribute_task(const AttributeTaskSpec& spec);

/// Draws from a discrete world materialized as a SampleSet with one-hot
/// x / w / y encodings (w one-hot doubles as BinaryAttributes PI). The
/// meta sidecar records the raw index triples per role.
SampleSet sample_world_set(const DiscreteWorld& world, const RoleCounts& counts,
                           std::uint64_t seed);

}  // namespace dalupi
