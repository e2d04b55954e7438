#include "qct/error.hpp"

namespace qct {

std::string_view errc_name(Errc c) {
    switch (c) {
        case Errc::measure_in_unitary: return "measure_in_unitary";
        case Errc::dimension_too_large: return "dimension_too_large";
        case Errc::dimension_mismatch: return "dimension_mismatch";
        case Errc::syntax_error: return "syntax_error";
        case Errc::unknown_gate: return "unknown_gate";
        case Errc::index_out_of_range: return "index_out_of_range";
        case Errc::invalid_gate: return "invalid_gate";
        case Errc::not_unitary: return "not_unitary";
        case Errc::basis_not_inverse_closed: return "basis_not_inverse_closed";
        case Errc::empty_net: return "empty_net";
        case Errc::delta_too_far: return "delta_too_far";
        case Errc::net_too_coarse: return "net_too_coarse";
        case Errc::too_few_physical_qubits: return "too_few_physical_qubits";
        case Errc::disconnected_region: return "disconnected_region";
        case Errc::edge_absent_both_directions: return "edge_absent_both_directions";
        case Errc::missing_variable: return "missing_variable";
        case Errc::domain_violation: return "domain_violation";
        case Errc::non_positive_alpha: return "non_positive_alpha";
        case Errc::non_positive_m: return "non_positive_m";
        case Errc::too_many_variables: return "too_many_variables";
        case Errc::non_positive_t: return "non_positive_t";
        case Errc::invalid_variable_name: return "invalid_variable_name";
        case Errc::invalid_embedding: return "invalid_embedding";
        case Errc::missing_physical_variable: return "missing_physical_variable";
        case Errc::even_n: return "even_n";
        case Errc::non_positive_gamma: return "non_positive_gamma";
        case Errc::insufficient_room: return "insufficient_room";
        case Errc::embedding_not_found: return "embedding_not_found";
        case Errc::empty_model: return "empty_model";
        case Errc::norm_drift: return "norm_drift";
        case Errc::degenerate_spectrum_observed: return "degenerate_spectrum_observed";
        case Errc::invalid_schedule: return "invalid_schedule";
        case Errc::invalid_input: return "invalid_input";
    }
    return "unknown_error";
}

int errc_exit_code(Errc c) {
    switch (c) {
        // capacity limits
        case Errc::dimension_too_large:
        case Errc::too_many_variables:
        case Errc::too_few_physical_qubits:
        case Errc::insufficient_room:
        case Errc::embedding_not_found:
        case Errc::empty_net:
            return 3;
        // numeric trouble
        case Errc::norm_drift:
        case Errc::net_too_coarse:
        case Errc::delta_too_far:
        case Errc::degenerate_spectrum_observed:
        case Errc::not_unitary:
            return 4;
        // everything else is an input problem
        default:
            return 2;
    }
}

}  // namespace qct
