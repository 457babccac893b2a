#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coherence {

enum class Errc {
    space_mismatch,
    zero_vector,
    non_finite,
    not_composite,
    truncation_too_small,
    insufficient_output_cutoff,
    invalid_weight,
    antipodal_point,
    weight_condition_violated,
    not_unit,
    not_two_qubit,
    strategy_unavailable,
    quadrature_failure,
    step_size_too_large,
    invalid_argument,
};

std::string_view to_string(Errc code) noexcept;

// Numerical failures (as opposed to rejected inputs) map to a distinct CLI exit code.
constexpr bool is_numerical(Errc code) noexcept {
    return code == Errc::non_finite || code == Errc::quadrature_failure ||
           code == Errc::step_size_too_large || code == Errc::zero_vector;
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace coherence
