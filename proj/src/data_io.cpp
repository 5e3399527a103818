#include "sbe/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "sbe/errors.hpp"

namespace sbe {

// ---- full-precision decimal serialization -----------------------------------

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  out.reserve(m.values.size() * 12);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (j) out.push_back(',');
      out += format_double(m.at(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open for writing: " + path.string());
  const std::string body = matrix_to_csv(m);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw FormatError("write failed: " + path.string());
}

// ---- CSV loader --------------------------------------------------------------

namespace {

double parse_cell(std::string_view cell, std::size_t line_no) {
  // Trim spaces; accept plain and scientific decimal notation.
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
    cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t'))
    cell.remove_suffix(1);
  double value = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
    throw FormatError("line " + std::to_string(line_no) + ": invalid numeric value '" +
                      std::string(cell) + "'");
  return value;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, bool has_header,
                 std::optional<std::size_t> label_column) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open: " + path.string());

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (has_header && line_no == 1) continue;
    if (line.empty()) continue;

    std::size_t ncells = 0;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell(line.data() + start,
                                  (comma == std::string::npos ? line.size() : comma) -
                                      start);
      const double v = parse_cell(cell, line_no);
      if (label_column && ncells == *label_column)
        labels.push_back(static_cast<int>(v));
      else
        values.push_back(v);
      ++ncells;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols == 0) {
      cols = ncells;
    } else if (ncells != cols) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(cols) + " columns, got " + std::to_string(ncells));
    }
    ++rows;
  }
  if (rows == 0) throw FormatError("empty file: " + path.string());
  if (label_column && *label_column >= cols)
    throw FormatError("label column " + std::to_string(*label_column) +
                      " out of range for " + std::to_string(cols) + " columns");

  Matrix m;
  m.rows = rows;
  m.cols = label_column ? cols - 1 : cols;
  m.values = std::move(values);
  if (m.cols == 0) throw FormatError("no feature columns left after label removal");
  return Dataset(std::move(m), DataSource::Csv, std::move(labels));
}

// ---- IDX loader --------------------------------------------------------------

namespace {

std::uint32_t read_be32(const unsigned char* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

std::vector<unsigned char> read_all_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open: " + path.string());
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(f),
                                    std::istreambuf_iterator<char>());
}

}  // namespace

Dataset load_idx(const std::filesystem::path& images_path) {
  const auto bytes = read_all_bytes(images_path);
  if (bytes.size() < 16)
    throw FormatError(images_path.string() + ": truncated header, need 16 bytes, file is " +
                      std::to_string(bytes.size()));
  const std::uint32_t magic = read_be32(bytes.data());
  if (magic != 0x00000803u) {
    std::ostringstream msg;
    msg << images_path.string() << ": bad magic 0x" << std::hex << magic
        << " at offset 0 (expected 0x00000803)";
    throw FormatError(msg.str());
  }
  const std::uint64_t n = read_be32(bytes.data() + 4);
  const std::uint64_t r = read_be32(bytes.data() + 8);
  const std::uint64_t c = read_be32(bytes.data() + 12);
  const std::uint64_t expected = 16 + n * r * c;
  if (bytes.size() < expected)
    throw FormatError(images_path.string() + ": truncated payload at offset " +
                      std::to_string(bytes.size()) + ", expected " +
                      std::to_string(expected) + " bytes");

  Matrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(r * c));
  for (std::size_t t = 0; t < n * r * c; ++t)
    m.values[t] = static_cast<double>(bytes[16 + t]) / 255.0;
  return Dataset(std::move(m), DataSource::Idx);
}

std::vector<int> load_idx_labels(const std::filesystem::path& labels_path) {
  const auto bytes = read_all_bytes(labels_path);
  if (bytes.size() < 8)
    throw FormatError(labels_path.string() + ": truncated header, need 8 bytes, file is " +
                      std::to_string(bytes.size()));
  const std::uint32_t magic = read_be32(bytes.data());
  if (magic != 0x00000801u) {
    std::ostringstream msg;
    msg << labels_path.string() << ": bad magic 0x" << std::hex << magic
        << " at offset 0 (expected 0x00000801)";
    throw FormatError(msg.str());
  }
  const std::uint64_t n = read_be32(bytes.data() + 4);
  if (bytes.size() < 8 + n)
    throw FormatError(labels_path.string() + ": truncated payload at offset " +
                      std::to_string(bytes.size()) + ", expected " +
                      std::to_string(8 + n) + " bytes");
  return std::vector<int>(bytes.begin() + 8, bytes.begin() + 8 + n);
}

// ---- symmetric PSD factor ----------------------------------------------------

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Small d only.
void jacobi_eigen(Matrix a, std::vector<double>& eigenvalues, Matrix& eigenvectors) {
  const std::size_t d = a.rows;
  eigenvectors = Matrix(d, d, 0.0);
  for (std::size_t i = 0; i < d; ++i) eigenvectors.at(i, i) = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off += a.at(p, q) * a.at(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cos = 1.0 / std::sqrt(t * t + 1.0);
        const double sin = t * cos;
        for (std::size_t i = 0; i < d; ++i) {
          const double aip = a.at(i, p);
          const double aiq = a.at(i, q);
          a.at(i, p) = cos * aip - sin * aiq;
          a.at(i, q) = sin * aip + cos * aiq;
        }
        for (std::size_t i = 0; i < d; ++i) {
          const double api = a.at(p, i);
          const double aqi = a.at(q, i);
          a.at(p, i) = cos * api - sin * aqi;
          a.at(q, i) = sin * api + cos * aqi;
        }
        for (std::size_t i = 0; i < d; ++i) {
          const double vip = eigenvectors.at(i, p);
          const double viq = eigenvectors.at(i, q);
          eigenvectors.at(i, p) = cos * vip - sin * viq;
          eigenvectors.at(i, q) = sin * vip + cos * viq;
        }
      }
    }
  }
  eigenvalues.resize(d);
  for (std::size_t i = 0; i < d; ++i) eigenvalues[i] = a.at(i, i);
}

}  // namespace

Matrix psd_factor(const Matrix& s) {
  if (s.rows != s.cols) throw ContractViolation("psd_factor: matrix not square");
  const std::size_t d = s.rows;
  double scale = 1.0;
  for (const double v : s.values) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (std::abs(s.at(i, j) - s.at(j, i)) > 1e-12 * scale)
        throw ContractViolation("psd_factor: matrix not symmetric");

  std::vector<double> lambda;
  Matrix v;
  jacobi_eigen(s, lambda, v);
  Matrix factor(d, d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    if (lambda[j] < -1e-12 * scale)
      throw ContractViolation("psd_factor: matrix not positive semidefinite");
    const double root = std::sqrt(std::max(lambda[j], 0.0));
    for (std::size_t i = 0; i < d; ++i) factor.at(i, j) = v.at(i, j) * root;
  }
  return factor;  // factor * factor^T = s
}

// ---- generators --------------------------------------------------------------

Dataset generate_gaussian(const GaussianMixtureSpec& spec, RngStream& rng) {
  if (spec.components.empty())
    throw ContractViolation("generate_gaussian: no components");
  std::size_t dim = spec.components.front().mean.size();
  std::size_t total = 0;
  for (const auto& comp : spec.components) {
    if (comp.count < 1) throw ContractViolation("generate_gaussian: component count < 1");
    if (comp.mean.size() != dim || comp.covariance.rows != dim ||
        comp.covariance.cols != dim)
      throw ContractViolation("generate_gaussian: inconsistent component dimensions");
    total += comp.count;
  }

  Matrix points(total, dim);
  std::size_t row = 0;
  std::vector<double> z(dim);
  for (const auto& comp : spec.components) {
    const Matrix factor = psd_factor(comp.covariance);
    for (std::size_t s = 0; s < comp.count; ++s, ++row) {
      for (std::size_t t = 0; t < dim; ++t) z[t] = rng.normal();
      double* p = points.row(row);
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = comp.mean[i];
        const double* frow = factor.row(i);
        for (std::size_t t = 0; t < dim; ++t) acc += frow[t] * z[t];
        p[i] = acc;
      }
    }
  }
  return Dataset(std::move(points), DataSource::Synthetic);
}

Dataset generate_noisy_centroids(const NoisyCentroidSpec& spec, RngStream& rng) {
  if (spec.centroids.rows < 1 || spec.centroids.cols < 1)
    throw ContractViolation("generate_noisy_centroids: need at least one base centroid");
  if (spec.per_center_count < 1)
    throw ContractViolation("generate_noisy_centroids: per_center_count must be >= 1");
  if (!(spec.noise_sigma >= 0.0))
    throw ContractViolation("generate_noisy_centroids: noise_sigma must be >= 0");

  const std::size_t k = spec.centroids.rows;
  const std::size_t d = spec.centroids.cols;
  Matrix points(k * spec.per_center_count, d);
  std::size_t row = 0;
  std::vector<int> labels;
  labels.reserve(points.rows);
  for (std::size_t j = 0; j < k; ++j) {
    const double* base = spec.centroids.row(j);
    for (std::size_t s = 0; s < spec.per_center_count; ++s, ++row) {
      double* p = points.row(row);
      for (std::size_t t = 0; t < d; ++t)
        p[t] = base[t] + spec.noise_sigma * rng.normal();
      labels.push_back(static_cast<int>(j));
    }
  }
  return Dataset(std::move(points), DataSource::Synthetic, std::move(labels));
}

// ---- presets -----------------------------------------------------------------

std::vector<std::string> preset_names() {
  return {kPresetGaussian2d, kPresetNoisyMnist};
}

GaussianMixtureSpec preset_gaussian_2d() {
  GaussianMixtureSpec spec;
  spec.components = {
      {{-5.0, -3.0}, Matrix::from_rows({{0.8, 0.1}, {0.1, 0.8}}), 1000},
      {{5.0, -3.0}, Matrix::from_rows({{1.2, 0.6}, {0.6, 0.7}}), 1000},
      {{0.0, 5.0}, Matrix::from_rows({{0.5, 0.05}, {0.05, 1.6}}), 1000},
      {{2.5, 4.0}, Matrix::from_rows({{1.5, 0.05}, {0.05, 0.6}}), 1000},
  };
  return spec;
}

Matrix synthetic_digit_bases(std::size_t k, std::size_t dim, RngStream& rng) {
  // Smooth low-rank patterns: k points spread in a random 6-dimensional
  // subspace, shifted into the unit intensity range. Low-rank placement gives
  // the heterogeneous pairwise separations digit images have; independent
  // uniform pixels would put every base equally far from every other. The
  // spread puts typical squared separations near 70, comparable to the
  // default noise energy sigma^2 d = 49 at sigma 0.25.
  const std::size_t rank = 6;
  Matrix z(k, rank);
  for (double& v : z.values) v = 2.5 * rng.normal();
  Matrix axes(rank, dim);
  for (std::size_t r = 0; r < rank; ++r) {
    double* row = axes.row(r);
    for (std::size_t t = 0; t < dim; ++t) row[t] = rng.normal();
    const double norm = std::sqrt(row_sqnorm(row, dim));
    for (std::size_t t = 0; t < dim; ++t) row[t] /= norm;
  }
  Matrix bases(k, dim);
  for (std::size_t j = 0; j < k; ++j) {
    double* b = bases.row(j);
    for (std::size_t t = 0; t < dim; ++t) {
      double acc = 0.5;
      for (std::size_t r = 0; r < rank; ++r) acc += z.at(j, r) * axes.at(r, t);
      b[t] = std::clamp(acc, 0.0, 1.0);
    }
  }
  return bases;
}

NoisyCentroidSpec preset_noisy_mnist(RngStream& rng, std::size_t per_center,
                                     double sigma, std::optional<Matrix> bases) {
  NoisyCentroidSpec spec;
  spec.centroids = bases ? std::move(*bases) : synthetic_digit_bases(8, 784, rng);
  spec.per_center_count = per_center;
  spec.noise_sigma = sigma;
  return spec;
}

}  // namespace sbe
