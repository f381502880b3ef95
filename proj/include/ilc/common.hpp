#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace ilc {

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s
inline constexpr double kPi = std::numbers::pi;

// Errors ---------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied a value outside an operation's domain.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

// Numerical conditioning failure (singular matrix where one cannot occur).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A constraint of the frame problem cannot be met. `frame` is -1 when the
// violation is not tied to a single frame.
class Infeasible : public Error {
 public:
  Infeasible(std::string constraint, int frame, const std::string& what)
      : Error(what), constraint_(std::move(constraint)), frame_(frame) {}

  const std::string& constraint() const noexcept { return constraint_; }
  int frame() const noexcept { return frame_; }

 private:
  std::string constraint_;
  int frame_;
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw InvalidInput(msg);
}

inline void require_finite(double v, const char* msg) {
  if (!std::isfinite(v)) throw InvalidInput(msg);
}

// 3-vectors ------------------------------------------------------------------

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator-(Vec3 a) { return a *= -1.0; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

using Rng = std::mt19937_64;

// Deterministic seed derivation --------------------------------------------

// splitmix64 finalizer; used to derive independent sub-seeds from a master seed.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Unit conversions -----------------------------------------------------------

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace ilc
