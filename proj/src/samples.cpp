#include "dalupi/samples.hpp"

#include <cmath>

namespace dalupi {

const char* pi_kind_name(PiKind k) {
    switch (k) {
        case PiKind::None: return "none";
        case PiKind::BinaryAttributes: return "binary_attributes";
        case PiKind::SingleBox: return "single_box";
    }
    return "?";
}

PiKind pi_kind_from_name(const std::string& s) {
    if (s == "none") return PiKind::None;
    if (s == "binary_attributes") return PiKind::BinaryAttributes;
    if (s == "single_box") return PiKind::SingleBox;
    throw IoError("unknown pi_kind: " + s);
}

const char* role_name(Role r) {
    switch (r) {
        case Role::SourceLabeled: return "source_labeled";
        case Role::TargetPi: return "target_pi";
        case Role::TargetUnlabeled: return "target_unlabeled";
        case Role::TargetLabeled: return "target_labeled";
        case Role::TestSource: return "test_source";
        case Role::TestTarget: return "test_target";
    }
    return "?";
}

void SampleSet::set_role(Role r, RoleData d) {
    roles_[static_cast<std::size_t>(r)] = std::move(d);
}

namespace {

void check_block(const Mat& m, std::size_t rows, std::size_t dim, const std::string& what) {
    if (m.rows == 0 && m.cols == 0) return;  // absent block
    if (m.rows != rows) throw ValidationError(what + ": row count mismatch");
    if (m.cols != dim) throw ValidationError(what + ": width mismatch");
    for (double v : m.a)
        if (!std::isfinite(v)) throw ValidationError(what + ": non-finite entry");
}

}  // namespace

void SampleSet::validate() const {
    if (pi_kind == PiKind::BinaryAttributes && w_dim != attr_dim)
        throw ValidationError("samples: w_dim != attr_dim for binary attributes");
    if (pi_kind == PiKind::SingleBox) {
        if (patch_size < 1 || image_height < 2 || image_width < 2)
            throw ValidationError("samples: single_box needs patch_size >= 1 and image dims >= 2");
        if (w_dim != 4 + patch_size * patch_size)
            throw ValidationError("samples: w_dim != 4 + patch^2 for single_box");
        if (x_dim != image_height * image_width)
            throw ValidationError("samples: x_dim != image pixel count");
    }
    for (Role r : kAllRoles) {
        const RoleData& d = peek(r);
        const std::string who = std::string("samples role ") + role_name(r);
        check_block(d.x, d.size(), x_dim, who + " x");
        check_block(d.w, d.size(), w_dim, who + " w");
        check_block(d.y, d.size(), y_dim, who + " y");
        if (d.w.rows == 0) continue;
        if (pi_kind == PiKind::BinaryAttributes) {
            for (double v : d.w.a)
                if (v != 0.0 && v != 1.0)
                    throw ValidationError(who + ": attribute not in {0,1}");
        } else if (pi_kind == PiKind::SingleBox) {
            for (std::size_t i = 0; i < d.w.rows; ++i) {
                double x0 = d.w.at(i, 0), y0 = d.w.at(i, 1), x1 = d.w.at(i, 2), y1 = d.w.at(i, 3);
                if (!(x0 < x1 && y0 < y1))
                    throw ValidationError(who + ": degenerate box in row " + std::to_string(i));
                if (x0 < 0 || y0 < 0 || x1 > static_cast<double>(image_width) ||
                    y1 > static_cast<double>(image_height))
                    throw ValidationError(who + ": box outside image in row " + std::to_string(i));
            }
        }
    }
}

json samples_to_json(const SampleSet& s) {
    json j;
    j["version"] = "dalupi-samples/1";
    j["pi_kind"] = pi_kind_name(s.pi_kind);
    j["attr_dim"] = s.attr_dim;
    j["image_height"] = s.image_height;
    j["image_width"] = s.image_width;
    j["patch_size"] = s.patch_size;
    j["x_dim"] = s.x_dim;
    j["w_dim"] = s.w_dim;
    j["y_dim"] = s.y_dim;
    json roles = json::object();
    for (Role r : kAllRoles) {
        const RoleData& d = s.peek(r);
        json b;
        b["x"] = mat_to_json(d.x);
        b["w"] = mat_to_json(d.w);
        b["y"] = mat_to_json(d.y);
        roles[role_name(r)] = std::move(b);
    }
    j["roles"] = std::move(roles);
    j["meta"] = s.meta.is_null() ? json::object() : s.meta;
    return j;
}

SampleSet samples_from_json(const json& j) {
    expect_version(j, "dalupi-samples/1", "samples file");
    SampleSet s;
    try {
        s.pi_kind = pi_kind_from_name(j.at("pi_kind").get<std::string>());
        s.attr_dim = j.at("attr_dim").get<std::size_t>();
        s.image_height = j.at("image_height").get<std::size_t>();
        s.image_width = j.at("image_width").get<std::size_t>();
        s.patch_size = j.at("patch_size").get<std::size_t>();
        s.x_dim = j.at("x_dim").get<std::size_t>();
        s.w_dim = j.at("w_dim").get<std::size_t>();
        s.y_dim = j.at("y_dim").get<std::size_t>();
        const json& roles = j.at("roles");
        for (Role r : kAllRoles) {
            const json& b = roles.at(role_name(r));
            RoleData d;
            d.x = mat_from_json(b.at("x"), s.x_dim, "x");
            d.w = b.at("w").empty() ? Mat() : mat_from_json(b.at("w"), s.w_dim, "w");
            d.y = b.at("y").empty() ? Mat() : mat_from_json(b.at("y"), s.y_dim, "y");
            s.set_role(r, std::move(d));
        }
        s.meta = j.value("meta", json::object());
    } catch (const json::exception& e) {
        throw IoError(std::string("samples file: ") + e.what());
    }
    s.validate();
    return s;
}

}  // namespace dalupi
