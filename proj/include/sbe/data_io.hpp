#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sbe/core.hpp"

namespace sbe {

/// One mixture component: count samples from N(mean, covariance).
struct GaussianComponent {
  std::vector<double> mean;
  Matrix covariance;  // d x d, symmetric positive semidefinite
  std::size_t count = 0;
};

struct GaussianMixtureSpec {
  std::vector<GaussianComponent> components;
};

/// Points drawn as base centroid + isotropic Gaussian noise.
struct NoisyCentroidSpec {
  Matrix centroids;  // K x d base points
  std::size_t per_center_count = 0;
  double noise_sigma = 0.0;
};

Dataset generate_gaussian(const GaussianMixtureSpec& spec, RngStream& rng);
Dataset generate_noisy_centroids(const NoisyCentroidSpec& spec, RngStream& rng);

/// Comma-separated numeric text; optional single header line; optional label
/// column stripped into Dataset labels. Parse errors carry the line number.
Dataset load_csv(const std::filesystem::path& path, bool has_header = false,
                 std::optional<std::size_t> label_column = std::nullopt);

/// Shortest round-trip decimal serialization; reloading is bitwise exact.
std::string format_double(double v);
void write_csv(const std::filesystem::path& path, const Matrix& m);
std::string matrix_to_csv(const Matrix& m);

/// IDX3 image file (big-endian magic 0x00000803); pixels scaled to [0,1]
/// by 1/255. Format errors name the offending byte offset.
Dataset load_idx(const std::filesystem::path& images_path);

/// IDX1 label file (magic 0x00000801). Used only to report ground-truth
/// cluster counts, never fed to solvers.
std::vector<int> load_idx_labels(const std::filesystem::path& labels_path);

/// Symmetric PSD factor F with F F^T = S (eigendecomposition, eigenvalues
/// clamped at -1e-12 * scale); throws ContractViolation if S is not PSD.
Matrix psd_factor(const Matrix& s);

// ---- Built-in presets ------------------------------------------------------

inline constexpr const char* kPresetGaussian2d = "paper-sec3.1-gaussian";
inline constexpr const char* kPresetNoisyMnist = "paper-sec3.3-noisy-mnist";

std::vector<std::string> preset_names();

/// Four 2-D Gaussians, 1000 points each.
GaussianMixtureSpec preset_gaussian_2d();

/// 8 base images in 784 dimensions with isotropic noise. Bases default to
/// synthetic stand-ins drawn from `rng` (smooth low-rank patterns in [0,1]);
/// pass explicit bases to use real images.
NoisyCentroidSpec preset_noisy_mnist(RngStream& rng, std::size_t per_center = 7500,
                                     double sigma = 0.25,
                                     std::optional<Matrix> bases = std::nullopt);

/// k smooth low-rank pattern vectors in [0,1]^dim with heterogeneous pairwise
/// separations, standing in for digit images.
Matrix synthetic_digit_bases(std::size_t k, std::size_t dim, RngStream& rng);

}  // namespace sbe
