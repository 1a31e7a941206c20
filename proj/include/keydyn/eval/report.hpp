#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "keydyn/core/keys.hpp"
#include "keydyn/eval/algorithms.hpp"
#include "keydyn/eval/cross_validation.hpp"

namespace keydyn {

enum class CellStatus {
  ok,
  not_converged,  // value is best effort
  failed,         // no value; `note` says why
};

struct ReportCell {
  std::optional<double> eer_percent;
  std::optional<double> impostor_percent;
  CellStatus status = CellStatus::ok;
  std::string note;
};

struct EvalReport {
  bool impostor_mode = false;
  std::uint64_t seed = 0;
  std::vector<Algorithm> algorithms;  // rows, report order
  std::vector<PhraseId> datasets;     // columns
  std::map<std::pair<Algorithm, PhraseId>, ReportCell> cells;

  const ReportCell* cell(Algorithm a, PhraseId p) const;
};

/// Column label, e.g. "Turkish".
std::string dataset_label(PhraseId p);
/// CSV dataset field: turkish, password or concat.
std::string dataset_key(PhraseId p);

/// Fixed-width table with one decimal; the minimum of each numeric column is
/// starred and non-converged cells carry a trailing '!'.
std::string render_text(const EvalReport& report);

/// `algorithm,dataset,eer_percent,impostor_error_percent`, one line per cell.
std::string render_csv(const EvalReport& report);

/// Runs one cell: cross-validation, or the impostor protocol when `impostors`
/// is given. Classifier errors become failed cells instead of exceptions,
/// except for input problems (missing class, too few subjects, layout).
ReportCell evaluate_cell(const Dataset& data, const Dataset* impostors, Algorithm algorithm,
                         const EvalOptions& options);

/// Every (algorithm, dataset) pair. `impostors` may be empty; when it is
/// not, it must hold an impostor dataset for every requested phrase.
EvalReport evaluate(const std::map<PhraseId, Dataset>& data, const std::map<PhraseId, Dataset>& impostors,
                    const std::vector<Algorithm>& algorithms, const std::vector<PhraseId>& datasets,
                    const EvalOptions& options);

}  // namespace keydyn
