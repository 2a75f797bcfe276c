#pragma once

#include <stdexcept>
#include <string>

namespace rowweed {

/// Stable machine-readable error identifiers, also used for CLI exit codes.
enum class ErrorCode {
    constant_plane,
    empty_segmentation,
    degenerate_component,
    empty_skeleton,
    dimension_mismatch,
    invalid_count,
    no_lines,
    too_few_samples,
    single_class_train_set,
    single_class,
    malformed_csv,
    unknown_patch,
    invalid_spec,
    unknown_preset,
    bad_config,
    io_error,
};

const char* error_code_name(ErrorCode code);

class PipelineError : public std::runtime_error {
public:
    PipelineError(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

#define ROWWEED_DEFINE_ERROR(ClassName, code_value)                   \
    class ClassName : public PipelineError {                          \
    public:                                                           \
        explicit ClassName(const std::string& message)                \
            : PipelineError(ErrorCode::code_value, message) {}        \
    }

ROWWEED_DEFINE_ERROR(ConstantPlaneError, constant_plane);
ROWWEED_DEFINE_ERROR(EmptySegmentationError, empty_segmentation);
ROWWEED_DEFINE_ERROR(DegenerateComponentError, degenerate_component);
ROWWEED_DEFINE_ERROR(EmptySkeletonError, empty_skeleton);
ROWWEED_DEFINE_ERROR(DimensionMismatchError, dimension_mismatch);
ROWWEED_DEFINE_ERROR(InvalidCountError, invalid_count);
ROWWEED_DEFINE_ERROR(NoLinesError, no_lines);
ROWWEED_DEFINE_ERROR(TooFewSamplesError, too_few_samples);
ROWWEED_DEFINE_ERROR(SingleClassTrainSetError, single_class_train_set);
ROWWEED_DEFINE_ERROR(SingleClassError, single_class);
ROWWEED_DEFINE_ERROR(MalformedCsvError, malformed_csv);
ROWWEED_DEFINE_ERROR(UnknownPatchError, unknown_patch);
ROWWEED_DEFINE_ERROR(InvalidSpecError, invalid_spec);
ROWWEED_DEFINE_ERROR(UnknownPresetError, unknown_preset);
ROWWEED_DEFINE_ERROR(BadConfigError, bad_config);
ROWWEED_DEFINE_ERROR(IoError, io_error);

#undef ROWWEED_DEFINE_ERROR

}  // namespace rowweed
