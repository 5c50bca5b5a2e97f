#pragma once

#include <stdexcept>
#include <string>

namespace cmc {

// Domain error codes. The CLI maps these to exit status 1; usage problems
// are reported separately as status 2.
enum class errc {
  empty_subset,
  index_out_of_range,
  empty_bit_sequence,
  not_power_of_two,
  overlapping_classes,
  not_a_bijection,
  unknown_class,
  unknown_element,
  outlier_not_compressible,
  dummy_code,
  empty_input,
  stream_too_short,
  dimension_mismatch,
  complex_spectrum,
  defective_matrix,
  non_positive_scale,
  size_mismatch,
  too_large_for_exact,
  extent_out_of_range,
  invalid_argument,
  format_error,
  io_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::empty_subset: return "EmptySubset";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::empty_bit_sequence: return "EmptyBitSequence";
    case errc::not_power_of_two: return "NotPowerOfTwo";
    case errc::overlapping_classes: return "OverlappingClasses";
    case errc::not_a_bijection: return "NotABijection";
    case errc::unknown_class: return "UnknownClass";
    case errc::unknown_element: return "UnknownElement";
    case errc::outlier_not_compressible: return "OutlierNotCompressible";
    case errc::dummy_code: return "DummyCode";
    case errc::empty_input: return "EmptyInput";
    case errc::stream_too_short: return "StreamTooShort";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::complex_spectrum: return "ComplexSpectrum";
    case errc::defective_matrix: return "DefectiveMatrix";
    case errc::non_positive_scale: return "NonPositiveScale";
    case errc::size_mismatch: return "SizeMismatch";
    case errc::too_large_for_exact: return "TooLargeForExact";
    case errc::extent_out_of_range: return "ExtentOutOfRange";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::format_error: return "FormatError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace cmc
