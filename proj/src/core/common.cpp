#include "isbjssp/common.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace isbjssp {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kWrongOperationCount: return "WrongOperationCount";
    case ErrorCode::kMachineIndexOutOfRange: return "MachineIndexOutOfRange";
    case ErrorCode::kDuplicateMachineInJob: return "DuplicateMachineInJob";
    case ErrorCode::kNonPositiveProcTime: return "NonPositiveProcTime";
    case ErrorCode::kAlreadyRemoved: return "AlreadyRemoved";
    case ErrorCode::kNotRemoved: return "NotRemoved";
    case ErrorCode::kAbsentNode: return "AbsentNode";
    case ErrorCode::kNotReady: return "NotReady";
    case ErrorCode::kSchedulableActionsPending: return "SchedulableActionsPending";
    case ErrorCode::kStepCapExceeded: return "StepCapExceeded";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kEmptyActionSet: return "EmptyActionSet";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNoCache: return "NoCache";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kMissingCheckpoint: return "MissingCheckpoint";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

int uniform_int(Rng& rng, int lo, int hi) {
  if (hi < lo) throw Error(ErrorCode::kInvalidArgument, "uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t threshold = (0 - span) % span;  // 2^64 mod span
  std::uint64_t x;
  do {
    x = rng();
  } while (x < threshold);
  return lo + static_cast<int>(x % span);
}

double uniform_real(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_string(const std::string& s) noexcept {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failed: " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

}  // namespace isbjssp
