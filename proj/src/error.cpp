#include "mobius_lab/error.hpp"

namespace mobius_lab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "domain error";
        case ErrorKind::Precondition: return "precondition error";
        case ErrorKind::Capacity: return "capacity error";
        case ErrorKind::Budget: return "budget error";
        case ErrorKind::Accuracy: return "accuracy error";
        case ErrorKind::Range: return "range error";
        case ErrorKind::CacheInvalid: return "cache-invalid error";
        case ErrorKind::Config: return "configuration error";
    }
    return "error";
}

}  // namespace mobius_lab
