#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "dalupi/common.hpp"
#include "dalupi/io.hpp"

namespace dalupi {

/// Shape of the privileged information attached to each training example.
enum class PiKind { None, BinaryAttributes, SingleBox };

const char* pi_kind_name(PiKind k);
PiKind pi_kind_from_name(const std::string& s);

/// Data roles an estimator may or may not read. Settings are audited
/// against these: every accessor call below is counted per role, and the
/// harness fails a cell whose fit touched a role outside its contract.
enum class Role {
    SourceLabeled = 0,  // (x, w, y) from the source domain
    TargetPi,           // (x, w) from the target domain, labels withheld
    TargetUnlabeled,    // x from the target domain
    TargetLabeled,      // (x, y) from the target domain; only the oracle
                        // baseline may train on this
    TestSource,         // held-out (x, y), never read during any fit
    TestTarget,
};

inline constexpr std::size_t kRoleCount = 6;
inline constexpr std::array<Role, kRoleCount> kAllRoles = {
    Role::SourceLabeled, Role::TargetPi,   Role::TargetUnlabeled,
    Role::TargetLabeled, Role::TestSource, Role::TestTarget};

const char* role_name(Role r);

/// Rows of one role. Unused blocks (w for unlabeled data, y for PI-only
/// data) stay 0 x 0.
struct RoleData {
    Mat x, w, y;
    std::size_t size() const { return x.rows; }
};

/// Empirical data for one task, split into access-audited roles.
///
/// Feature conventions:
///  - x: flat feature vector; for image tasks a row-major pixel grid.
///  - w, BinaryAttributes: d entries in {0,1}.
///  - w, SingleBox: [x_min, y_min, x_max, y_max, patch...] with the box in
///    pixel units and the patch the ground-truth pixels inside it.
///  - y: class one-hot (classification) or value vector (regression).
class SampleSet {
public:
    PiKind pi_kind = PiKind::None;
    std::size_t attr_dim = 0;                                    // BinaryAttributes
    std::size_t image_height = 0, image_width = 0, patch_size = 0;  // SingleBox
    std::size_t x_dim = 0, w_dim = 0, y_dim = 0;
    json meta;  // generator sidecar: ground-truth labels, boxes, tables

    void set_role(Role r, RoleData d);

    /// Counted access; every read during a fit is audited.
    const RoleData& get(Role r) const {
        accesses_[static_cast<std::size_t>(r)]++;
        return roles_[static_cast<std::size_t>(r)];
    }
    /// Uncounted access, for serialization and test assertions only.
    const RoleData& peek(Role r) const { return roles_[static_cast<std::size_t>(r)]; }

    std::size_t count(Role r) const { return peek(r).size(); }
    std::uint64_t access_count(Role r) const { return accesses_[static_cast<std::size_t>(r)]; }
    std::array<std::uint64_t, kRoleCount> access_snapshot() const { return accesses_; }

    /// Throws ValidationError on dimension mismatches, non-binary
    /// attributes, or boxes outside the image.
    void validate() const;

private:
    std::array<RoleData, kRoleCount> roles_;
    mutable std::array<std::uint64_t, kRoleCount> accesses_{};
};

json samples_to_json(const SampleSet& s);
SampleSet samples_from_json(const json& j);

}  // namespace dalupi
