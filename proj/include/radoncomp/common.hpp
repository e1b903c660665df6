#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace radoncomp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kFourPi = 4.0 * std::numbers::pi;

// Ambient dimension of the numerical engines. Multiplier formulas accept any n.
inline constexpr int kDim = 3;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) { return v * (1.0 / norm(v)); }

// Two unit vectors completing `n` to a right-handed orthonormal frame.
inline void orthonormal_frame(const Vec3& n, Vec3& e1, Vec3& e2) {
  const Vec3 helper = std::abs(n.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  e1 = normalized(cross(helper, n));
  e2 = cross(n, e1);
}

enum class ErrorCode {
  InvalidGrid,
  BandwidthExceeded,
  DegenerateInput,
  OutOfRange,
  NotPositive,
  NotEven,
  NotApplicable,
  ConstructionFailed,
  DecayTooSlow,
  GridTooCoarse,
  GridMismatch,
  CertificateRequired,
  TailTooHeavy,
  InputInvalid,
  SyntaxError,
  UnknownIdentifier,
  ArityError,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace radoncomp
