#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qct {

// Stable error codes shared by the C++ API, the CLI (machine-readable error
// JSON + exit codes) and the python bindings.
enum class Errc {
    // circuit / qasm
    measure_in_unitary,
    dimension_too_large,
    dimension_mismatch,
    syntax_error,
    unknown_gate,
    index_out_of_range,
    invalid_gate,
    // synth
    not_unitary,
    basis_not_inverse_closed,
    empty_net,
    delta_too_far,
    net_too_coarse,
    // route
    too_few_physical_qubits,
    disconnected_region,
    edge_absent_both_directions,
    // ising
    missing_variable,
    domain_violation,
    non_positive_alpha,
    non_positive_m,
    too_many_variables,
    non_positive_t,
    invalid_variable_name,
    // embed
    invalid_embedding,
    missing_physical_variable,
    even_n,
    non_positive_gamma,
    insufficient_room,
    embedding_not_found,
    // sampler
    empty_model,
    norm_drift,
    degenerate_spectrum_observed,
    invalid_schedule,
    // generic input problems (bad files, malformed JSON, ...)
    invalid_input,
};

std::string_view errc_name(Errc c);

// Exit-code category used by the CLI: 2 = input, 3 = capacity, 4 = numeric.
int errc_exit_code(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Error(Errc code, const std::string& message, long detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code),
          detail_(detail) {}

    Errc code() const { return code_; }

    // Optional structured payload: line number for syntax_error, achieved
    // replica count for insufficient_room, ...
    long detail() const { return detail_; }

  private:
    Errc code_;
    long detail_ = -1;
};

}  // namespace qct
