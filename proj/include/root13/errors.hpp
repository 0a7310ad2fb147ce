#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace root13 {

// Base class for every domain error thrown by the library. The CLI maps
// these to exit code 1; anything else is a bug.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class MalformedLine : public Error {
 public:
  explicit MalformedLine(std::size_t line_no, const std::string& detail = "")
      : Error("malformed line " + std::to_string(line_no) +
              (detail.empty() ? "" : ": " + detail)),
        line_no_(line_no) {}
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class EncodingError : public Error {
 public:
  explicit EncodingError(std::size_t line_no)
      : Error("invalid UTF-8 on line " + std::to_string(line_no)),
        line_no_(line_no) {}
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("no content token survives filtering") {}
};

class BadMagic : public Error {
 public:
  BadMagic() : Error("bad magic bytes: not a recognized model file") {}
};

class UnsupportedVersion : public Error {
 public:
  explicit UnsupportedVersion(std::uint32_t version)
      : Error("unsupported format version " + std::to_string(version)),
        version_(version) {}
  std::uint32_t version() const { return version_; }

 private:
  std::uint32_t version_;
};

class TruncatedFile : public Error {
 public:
  TruncatedFile() : Error("unexpected end of file") {}
};

class UnknownTerm : public Error {
 public:
  explicit UnknownTerm(const std::string& word)
      : Error("unknown term: \"" + word + "\""), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class NoCooccurrence : public Error {
 public:
  NoCooccurrence() : Error("terms never co-occur") {}
};

class MismatchedN : public Error {
 public:
  MismatchedN(std::uint32_t n1, std::uint32_t n2)
      : Error("profiles built with different requested_n: " +
              std::to_string(n1) + " vs " + std::to_string(n2)) {}
};

class ForeignProfile : public Error {
 public:
  ForeignProfile() : Error("context profile does not belong to this model") {}
};

class EmptyTable : public Error {
 public:
  explicit EmptyTable(const std::string& what = "table has no rows")
      : Error(what) {}
};

class BadLabel : public Error {
 public:
  BadLabel(std::size_t line_no, const std::string& label)
      : Error("bad label \"" + label + "\" on line " + std::to_string(line_no)),
        line_no_(line_no) {}
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class BadParams : public Error {
 public:
  explicit BadParams(const std::string& msg) : Error("bad params: " + msg) {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: model has " + std::to_string(expected) +
              " columns, vector has " + std::to_string(got)) {}
};

class BadK : public Error {
 public:
  explicit BadK(const std::string& msg) : Error("bad k: " + msg) {}
};

class UnknownColumn : public Error {
 public:
  explicit UnknownColumn(const std::string& name)
      : Error("unknown column: \"" + name + "\""), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class BadStep : public Error {
 public:
  explicit BadStep(const std::string& msg) : Error("bad ablation step: " + msg) {}
};

class EmptyConfusion : public Error {
 public:
  EmptyConfusion() : Error("confusion matrix has zero total") {}
};

class EmptySet : public Error {
 public:
  EmptySet() : Error("empty label multiset") {}
};

}  // namespace root13
