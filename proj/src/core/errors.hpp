#pragma once

#include <stdexcept>
#include <string>

namespace lvef {

// Every failure the library reports, as a stable code plus a human message.
enum class errc {
    invalid_argument,
    io_error,
    // csv / file ingestion
    missing_column,
    malformed_row,
    empty_group,
    not_pgm,
    missing_frame,
    dimension_mismatch,
    // geometry
    degenerate_trace,
    out_of_bounds,
    // cycles / refinement / volumes
    no_cycles,
    invalid_cycle,
    zero_length,
    non_positive_edv,
    // regression ensemble
    insufficient_data,
    non_finite_input,
    singular_design,
    untrained_model,
    version_mismatch,
    corrupt_model,
    flat_target,
    // statistics
    zero_variance,
    too_few_samples,
    degenerate_differences,
    single_class,
    length_mismatch,
    single_class_resample,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw Error(code, message);
}

inline const char* errc_name(errc code) {
    switch (code) {
        case errc::invalid_argument: return "invalid_argument";
        case errc::io_error: return "io_error";
        case errc::missing_column: return "missing_column";
        case errc::malformed_row: return "malformed_row";
        case errc::empty_group: return "empty_group";
        case errc::not_pgm: return "not_pgm";
        case errc::missing_frame: return "missing_frame";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::degenerate_trace: return "degenerate_trace";
        case errc::out_of_bounds: return "out_of_bounds";
        case errc::no_cycles: return "no_cycles";
        case errc::invalid_cycle: return "invalid_cycle";
        case errc::zero_length: return "zero_length";
        case errc::non_positive_edv: return "non_positive_edv";
        case errc::insufficient_data: return "insufficient_data";
        case errc::non_finite_input: return "non_finite_input";
        case errc::singular_design: return "singular_design";
        case errc::untrained_model: return "untrained_model";
        case errc::version_mismatch: return "version_mismatch";
        case errc::corrupt_model: return "corrupt_model";
        case errc::flat_target: return "flat_target";
        case errc::zero_variance: return "zero_variance";
        case errc::too_few_samples: return "too_few_samples";
        case errc::degenerate_differences: return "degenerate_differences";
        case errc::single_class: return "single_class";
        case errc::length_mismatch: return "length_mismatch";
        case errc::single_class_resample: return "single_class_resample";
    }
    return "unknown";
}

} // namespace lvef
