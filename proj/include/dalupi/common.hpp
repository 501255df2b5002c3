#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dalupi {

/// Raised when a constructed object violates one of its declared invariants
/// (non-normalized distribution, negative mass, shape mismatch, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a quantity is requested that the given world / data does not
/// determine (identification failures, unsupported loss/world combinations).
struct IdentificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when an optimization run diverges or is misconfigured.
struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised on malformed files, unknown version tags and CLI misuse.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Probability mass below this is treated as outside the support.
inline constexpr double kSupportEps = 1e-12;

inline constexpr const char* kSoftwareVersion = "dalupi 0.1.0";

/// Dense row-major matrix of doubles; the one numeric container shared by
/// worlds, sample sets and predictors.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    std::vector<double> row(std::size_t i) const {
        return std::vector<double>(a.begin() + static_cast<std::ptrdiff_t>(i * cols),
                                   a.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
    }
    void set_row(std::size_t i, const std::vector<double>& r) {
        for (std::size_t j = 0; j < cols; ++j) at(i, j) = r[j];
    }
    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

/// FNV-1a, 64 bit. Used to fingerprint experiment specs in result files.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

/// argmax with ties broken toward the lowest index.
inline std::size_t argmax_index(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace dalupi
