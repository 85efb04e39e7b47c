#include <unicode/errorcode.h>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "embkit/embedding.hpp"
#include "embkit/error.hpp"

namespace embkit {

std::string nfc_normalize(std::string_view utf8) {
    icu::ErrorCode status;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (status.isFailure()) {
        throw ArgumentError(std::string("ICU NFC unavailable: ") + status.errorName());
    }
    icu::UnicodeString input = icu::UnicodeString::fromUTF8(
        icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    icu::UnicodeString normalized = nfc->normalize(input, status);
    if (status.isFailure()) {
        throw ArgumentError(std::string("NFC normalization failed: ") + status.errorName());
    }
    std::string out;
    normalized.toUTF8String(out);
    return out;
}

std::string utf8_lowercase(std::string_view utf8) {
    icu::UnicodeString s = icu::UnicodeString::fromUTF8(
        icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    s.toLower();
    std::string out;
    s.toUTF8String(out);
    return out;
}

}  // namespace embkit
