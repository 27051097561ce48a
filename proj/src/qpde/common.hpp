#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qpde {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

/// Error with a pipeline stage tag, surfaced verbatim by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& msg)
        : std::runtime_error("[" + stage + "] " + msg), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

inline std::int64_t pow2(int n) { return std::int64_t(1) << n; }

inline bool is_pow2(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

} // namespace qpde
