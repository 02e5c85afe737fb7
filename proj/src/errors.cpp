#include "tilekmc/errors.hpp"

namespace tilekmc {

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::site_occupied: return "SiteOccupied";
        case Errc::site_empty: return "SiteEmpty";
        case Errc::not_adjacent: return "NotAdjacent";
        case Errc::unknown_label: return "UnknownLabel";
        case Errc::non_positive_temperature: return "NonPositiveTemperature";
        case Errc::empty_input: return "EmptyInput";
        case Errc::zero_length: return "ZeroLength";
        case Errc::too_few_points: return "TooFewPoints";
        case Errc::bad_k: return "BadK";
        case Errc::degenerate_matrix: return "DegenerateMatrix";
        case Errc::empty_range: return "EmptyRange";
        case Errc::no_empty_site: return "NoEmptySite";
        case Errc::io_failure: return "IoFailure";
        case Errc::bad_config: return "BadConfig";
        case Errc::encoding_failure: return "EncodingFailure";
        case Errc::invalid_argument: return "InvalidArgument";
    }
    return "UnknownError";
}

} // namespace tilekmc
