#ifndef INDSYS_DATASET_IO_HPP
#define INDSYS_DATASET_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "indsys/model.hpp"

namespace indsys {

struct ParseError : Error {
  using Error::Error;
};

enum class Severity { kWarning, kError };

struct Finding {
  Severity severity = Severity::kWarning;
  std::string code;     // stable machine code, e.g. "E_NO_FITTING_MEAN"
  std::string subject;  // entity or entity pair the finding is about
  std::string message;
};

// Deterministically ordered findings (code, then subject).
struct ConsistencyReport {
  std::vector<Finding> findings;

  bool ok() const;  // no errors (warnings allowed)
  int error_count() const;
  std::string to_text() const;
};

// Parses and resolves a dataset document. Throws ParseError for malformed
// input or schema mismatch, ReferenceError for dangling references, Error for
// other structural defects. The returned dataset is finalized.
Dataset load_dataset(std::istream& in);
Dataset load_dataset_file(const std::string& path);

std::string serialize_dataset(const Dataset& dataset);
void save_dataset_file(const Dataset& dataset, const std::string& path);

// Checks everything the optimizer relies on beyond structure: every part can
// ride every link it could be routed over (errors), and cosmetic orphans
// (warnings). Pure: same dataset, same report.
ConsistencyReport validate_consistency(const Dataset& dataset);

}  // namespace indsys

#endif  // INDSYS_DATASET_IO_HPP
