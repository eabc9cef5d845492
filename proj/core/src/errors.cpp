#include "clusterlens/errors.hpp"

namespace clusterlens {

const char* errc_name(errc code) {
    switch (code) {
        case errc::bad_magic: return "BadMagic";
        case errc::truncated_file: return "TruncatedFile";
        case errc::non_finite_value: return "NonFiniteValue";
        case errc::io_failure: return "IoFailure";
        case errc::parse_error: return "ParseError";
        case errc::duplicate_index: return "DuplicateIndex";
        case errc::subclass_in_two_superclasses: return "SubclassInTwoSuperclasses";
        case errc::missing_column: return "MissingColumn";
        case errc::empty_input: return "EmptyInput";
        case errc::k_out_of_range: return "KOutOfRange";
        case errc::length_mismatch: return "LengthMismatch";
        case errc::empty_table: return "EmptyTable";
        case errc::too_few_samples: return "TooFewSamples";
        case errc::shape_mismatch: return "ShapeMismatch";
        case errc::unknown_subclass: return "UnknownSubclass";
        case errc::superclass_too_small: return "SuperclassTooSmall";
        case errc::empty_dataset: return "EmptyDataset";
        case errc::no_shared_layers: return "NoSharedLayers";
        case errc::single_class: return "SingleClass";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::empty_series: return "EmptySeries";
        case errc::bad_config: return "BadConfig";
    }
    return "UnknownError";
}

}  // namespace clusterlens
