#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace isbjssp {

enum class ErrorCode : int {
  kOk = 0,
  kMalformedHeader,
  kWrongOperationCount,
  kMachineIndexOutOfRange,
  kDuplicateMachineInJob,
  kNonPositiveProcTime,
  kAlreadyRemoved,
  kNotRemoved,
  kAbsentNode,
  kNotReady,
  kSchedulableActionsPending,
  kStepCapExceeded,
  kTooLarge,
  kEmptyActionSet,
  kDimensionMismatch,
  kNoCache,
  kShapeMismatch,
  kEmptyGraph,
  kLengthMismatch,
  kEmptyBatch,
  kMissingCheckpoint,
  kConfigError,
  kIoError,
  kInvalidArgument,
};

const char* error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library carries a code so the C API can
// translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

using Rng = std::mt19937_64;

// Distribution helpers with a fixed algorithm, so seeded streams reproduce
// across standard library implementations.
int uniform_int(Rng& rng, int lo, int hi);
double uniform_real(Rng& rng);

// splitmix64 finalizer; used to derive independent per-cell seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;
std::uint64_t hash_string(const std::string& s) noexcept;

// Shortest text that parses back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace isbjssp
