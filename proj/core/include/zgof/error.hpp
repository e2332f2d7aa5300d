#pragma once

#include <stdexcept>
#include <string>

namespace zgof {

// Every failure the library reports carries one of these codes. The CLI
// maps codes onto process exit codes; tests match on them.
enum class Errc {
    too_few_categories,
    negative_or_oversized_probability,
    sum_not_one,
    nonpositive_shape,
    unknown_catalog_name,
    negative_count,
    dimension_mismatch,
    zero_expected_cell,
    empty_sample,
    degenerate_cumulative,
    empty_distribution,
    degenerate_bracket,
    outcome_space_too_large,
    syntax_error,
    unknown_distribution_name,
    invalid_parameter,
    io_failure,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace zgof
