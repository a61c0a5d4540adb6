#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace layoutforge {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- layout DSL -----------------------------------------------------------

class EmptyLayout final : public Error {
 public:
  EmptyLayout() : Error("layout contains no objects") {}
};

class MalformedLine final : public Error {
 public:
  MalformedLine(int line_no, const std::string& reason)
      : Error("line " + std::to_string(line_no) + ": " + reason),
        line_no_(line_no) {}
  int line_no() const { return line_no_; }

 private:
  int line_no_;
};

class LengthMismatch final : public Error {
 public:
  LengthMismatch(std::size_t layout_count, std::size_t prompt_count)
      : Error("layout has " + std::to_string(layout_count) +
              " objects but prompt list has " + std::to_string(prompt_count)) {}
};

class MissingField final : public Error {
 public:
  explicit MissingField(const std::string& field)
      : Error("missing field: " + field), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class AnswerUnparseable final : public Error {
 public:
  explicit AnswerUnparseable(const std::string& why)
      : Error("answer organization does not parse as a layout: " + why) {}
};

class InvalidObject final : public Error {
 public:
  using Error::Error;
};

// ---- geometry / metrics ---------------------------------------------------

class NonpositiveExtent final : public Error {
 public:
  using Error::Error;
};

class EmptyScene final : public Error {
 public:
  EmptyScene() : Error("scene contains no objects") {}
};

// ---- reward ---------------------------------------------------------------

class SchemaError final : public Error {
 public:
  using Error::Error;
};

class ZeroExpectedTotal final : public Error {
 public:
  ZeroExpectedTotal() : Error("expected counts sum to zero") {}
};

class SingleSample final : public Error {
 public:
  SingleSample()
      : Error("entropy weights need at least two samples; "
              "use uniform weights for a single sample") {}
};

class WeightSumError final : public Error {
 public:
  explicit WeightSumError(double sum)
      : Error("criterion weights sum to " + std::to_string(sum) +
              ", expected 1") {}
};

// ---- gateway --------------------------------------------------------------

class UnboundPlaceholder final : public Error {
 public:
  explicit UnboundPlaceholder(const std::string& name)
      : Error("unbound placeholder: {" + name + "}"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class CassetteMiss final : public Error {
 public:
  explicit CassetteMiss(const std::string& digest)
      : Error("cassette has no entry for digest " + digest), digest_(digest) {}
  const std::string& digest() const { return digest_; }

 private:
  std::string digest_;
};

class CorruptCassette final : public Error {
 public:
  CorruptCassette(std::size_t offset, const std::string& reason)
      : Error("corrupt cassette at byte " + std::to_string(offset) + ": " +
              reason),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class TransportError final : public Error {
 public:
  using Error::Error;
};

class RateLimited final : public Error {
 public:
  explicit RateLimited(int attempts)
      : Error("rate limited after " + std::to_string(attempts) + " attempts") {}
};

class NoStructureFound final : public Error {
 public:
  NoStructureFound() : Error("no JSON object or array in response") {}
};

class UnbalancedStructure final : public Error {
 public:
  explicit UnbalancedStructure(const std::string& why)
      : Error("unbalanced or invalid JSON structure: " + why) {}
};

// ---- pipeline -------------------------------------------------------------

class GenerationRejected final : public Error {
 public:
  explicit GenerationRejected(int attempts)
      : Error("generator produced unusable output in " +
              std::to_string(attempts) + " attempts") {}
};

class FootprintMutated final : public Error {
 public:
  explicit FootprintMutated(std::size_t index)
      : Error("lifting changed the footprint of object " +
              std::to_string(index)),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class AssetCountMismatch final : public Error {
 public:
  AssetCountMismatch(std::size_t objects, std::size_t assets)
      : Error("scene has " + std::to_string(objects) + " objects but " +
              std::to_string(assets) + " assets") {}
};

// ---- datagen --------------------------------------------------------------

class QuotaViolation final : public Error {
 public:
  explicit QuotaViolation(const std::string& scene_type, const std::string& why)
      : Error("granularity quota violated for \"" + scene_type + "\": " + why),
        scene_type_(scene_type) {}
  const std::string& scene_type() const { return scene_type_; }

 private:
  std::string scene_type_;
};

class RoomBoundViolation final : public Error {
 public:
  using Error::Error;
};

class AnswerMismatch final : public Error {
 public:
  using Error::Error;
};

class BatchTooSmall final : public Error {
 public:
  explicit BatchTooSmall(std::size_t got)
      : Error("sample batch needs at least 2 usable samples, got " +
              std::to_string(got)) {}
};

// ---- render ---------------------------------------------------------------

class CanvasTooLarge final : public Error {
 public:
  CanvasTooLarge(std::size_t w, std::size_t h, std::size_t cap)
      : Error("canvas " + std::to_string(w) + "x" + std::to_string(h) +
              " exceeds area cap " + std::to_string(cap)) {}
};

}  // namespace layoutforge
