#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kb {

// Error for inputs that are well-formed but outside the mathematical domain
// of an operation (odd degree, excluded locus, tolerance ambiguity, ...).
// `code` is a stable machine-readable tag; `what()` is the human message.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

namespace errc {
inline constexpr const char* odd_degree = "odd_degree";
inline constexpr const char* bad_argument = "bad_argument";
inline constexpr const char* mismatched_tau = "mismatched_tau";
inline constexpr const char* not_fixed = "not_fixed";
inline constexpr const char* ambiguous_at_tolerance = "ambiguous_at_tolerance";
inline constexpr const char* excluded_real_locus = "excluded_real_locus";
inline constexpr const char* not_on_real_circle = "not_on_real_circle";
inline constexpr const char* empty_moduli = "empty_moduli";
inline constexpr const char* mixed_flavors = "mixed_flavors";
inline constexpr const char* unsupported_atom = "unsupported_atom";
inline constexpr const char* bad_descriptor = "bad_descriptor";
}  // namespace errc

}  // namespace kb
