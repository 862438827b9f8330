#pragma once
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mch {

using cplx = std::complex<double>;
using std::size_t;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr cplx I{0.0, 1.0};

// error taxonomy; the CLI maps these to exit codes 2/3/4
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& w) : std::runtime_error(w) {}
};
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& w) : std::runtime_error(w) {}
};
struct IoError : std::runtime_error {
  explicit IoError(const std::string& w) : std::runtime_error(w) {}
};

struct Mat2 {
  cplx a00, a01, a10, a11;
  cplx det() const { return a00 * a11 - a01 * a10; }
};

// fixed scientific formatting, 17 significant digits, locale-independent
std::string fmt17(double v);

std::vector<double> linspace(double a, double b, int n);

}  // namespace mch
