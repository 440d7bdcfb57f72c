#pragma once

// Random generators and independent reference computations shared by the
// unit tests and the acceptance runner. Nothing here calls into the code it
// is used to check.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <bi/error.hpp>
#include <bi/evidence.hpp>
#include <bi/geometry.hpp>
#include <bi/inference.hpp>
#include <bi/obstacle.hpp>

namespace bt {

using bi::Vec3;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal(double sigma = 1.0) { return std::normal_distribution<double>(0.0, sigma)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

  Vec3 point(double half_width) {
    return Vec3(uniform(-half_width, half_width), uniform(-half_width, half_width), uniform(-half_width, half_width));
  }

  Vec3 unit() {
    Vec3 v;
    do {
      v = Vec3(normal(), normal(), normal());
    } while (v.norm() < 1e-6);
    return v.normalized();
  }

  // Uniform over SO(3) via a normalized Gaussian quaternion.
  Eigen::Matrix3d rotation() {
    Eigen::Quaterniond q(normal(), normal(), normal(), normal());
    q.normalize();
    return q.toRotationMatrix();
  }

  // Strictly positive column-stochastic table, combination-major like Cpt.
  std::vector<double> likelihood_table(std::size_t n_targets, std::size_t n_combos) {
    std::vector<double> table(n_targets * n_combos);
    for (std::size_t i = 0; i < n_targets; ++i) {
      double sum = 0.0;
      for (std::size_t e = 0; e < n_combos; ++e) {
        const double w = uniform(0.05, 1.0);
        table[e * n_targets + i] = w;
        sum += w;
      }
      for (std::size_t e = 0; e < n_combos; ++e) table[e * n_targets + i] /= sum;
    }
    return table;
  }

  // Draw from a discrete distribution given unnormalized weights.
  std::size_t categorical(const std::vector<double>& weights) {
    return std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng_);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Posterior after a whole evidence sequence, computed in one shot in log
// space: prior_i * prod_k P(e_k | T_i), normalized.
inline std::vector<double> product_oracle(const std::vector<double>& prior,
                                          const std::vector<std::vector<double>>& likelihood_rows) {
  const std::size_t n = prior.size();
  std::vector<double> log_post(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double acc = std::log(static_cast<long double>(prior[i]));
    for (const auto& row : likelihood_rows) acc += std::log(static_cast<long double>(row[i]));
    log_post[i] = static_cast<double>(acc);
  }
  double top = log_post[0];
  for (double v : log_post) top = std::max(top, v);
  double z = 0.0;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(log_post[i] - top);
    z += out[i];
  }
  for (double& v : out) v /= z;
  return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// Sum within 1e-9 of one and every entry strictly positive.
inline bool well_formed(const bi::Belief& belief) {
  double sum = 0.0;
  for (double p : belief.probs) {
    if (!(p > 0.0) || !std::isfinite(p)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) < 1e-9;
}

// Quadratic form of the ellipsoid written as an implicit world-frame matrix:
// (p - c)^T M (p - c) with M = R diag(1/a^2, 1/b^2, 1/c^2) R^T, rebuilt from
// the axis directions only.
inline double implicit_form(const bi::VirtualEllipsoid& e, const Vec3& p) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  const double inv[3] = {1.0 / (e.a * e.a), 1.0 / (e.b * e.b), 1.0 / (e.c_axis * e.c_axis)};
  for (int k = 0; k < 3; ++k) {
    const Vec3 axis = e.rotation.col(k);
    m += inv[k] * axis * axis.transpose();
  }
  const Vec3 d = p - e.center;
  return d.dot(m * d);
}

// Uniform sample from the solid ellipsoid by rejection in its bounding box.
inline Vec3 interior_point(Gen& gen, const bi::VirtualEllipsoid& e) {
  for (;;) {
    const Vec3 local(gen.uniform(-e.a, e.a), gen.uniform(-e.b, e.b), gen.uniform(-e.c_axis, e.c_axis));
    const double q = (local.x() / e.a) * (local.x() / e.a) + (local.y() / e.b) * (local.y() / e.b) +
                     (local.z() / e.c_axis) * (local.z() / e.c_axis);
    if (q <= 1.0) return e.center + e.rotation * local;
  }
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Fresh scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("bi-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// The code of the bi::Error thrown by f, or nullopt when it returns normally.
template <class F>
std::optional<bi::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const bi::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Minimal observation with a given nose, gaze, wrist and palm tilt (radians
// from vertical up, tilted about the world x axis).
inline bi::Observation make_obs(double t, const Vec3& nose, const Vec3& head_dir, const Vec3& wrist,
                                double palm_tilt) {
  bi::Observation obs;
  obs.t = t;
  obs.nose = nose;
  obs.head_dir = head_dir.normalized();
  obs.wrist = wrist;
  const Vec3 normal(0.0, -std::sin(palm_tilt), std::cos(palm_tilt));
  const Vec3 u = Vec3::UnitX();
  const Vec3 v = normal.cross(u);  // (p1 - p0) x (p2 - p0) = u x v = normal
  obs.hand_points = {wrist, wrist + 0.08 * u, wrist + 0.06 * v};
  return obs;
}

}  // namespace bt
