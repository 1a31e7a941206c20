#include "keydyn/eval/report.hpp"

#include <algorithm>
#include <sstream>

#include "keydyn/error.hpp"
#include "keydyn/format.hpp"

namespace keydyn {

const ReportCell* EvalReport::cell(Algorithm a, PhraseId p) const {
  const auto it = cells.find({a, p});
  return it == cells.end() ? nullptr : &it->second;
}

std::string dataset_label(PhraseId p) {
  switch (p) {
    case PhraseId::turkish: return "Turkish";
    case PhraseId::password: return "Password";
    case PhraseId::concatenated: return "Concatenated";
  }
  return "?";
}

std::string dataset_key(PhraseId p) { return std::string(to_string(p)); }

namespace {

struct Column {
  std::string label;
  PhraseId phrase;
  bool impostor;
};

std::optional<double> value_of(const ReportCell& c, bool impostor) {
  return impostor ? c.impostor_percent : c.eer_percent;
}

std::vector<Column> columns(const EvalReport& r) {
  std::vector<Column> out;
  for (auto p : r.datasets) {
    if (r.impostor_mode) {
      out.push_back({dataset_label(p) + " EER", p, false});
      out.push_back({dataset_label(p) + " Imp. Err.", p, true});
    } else {
      out.push_back({dataset_label(p), p, false});
    }
  }
  return out;
}

std::string pad_left(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

}  // namespace

std::string render_text(const EvalReport& r) {
  const auto cols = columns(r);
  std::size_t name_width = std::string_view("Algorithm").size();
  for (auto a : r.algorithms) name_width = std::max(name_width, display_name(a).size());

  // Column minima over cells that produced a number.
  std::vector<std::optional<double>> minima;
  for (const auto& c : cols) {
    std::optional<double> m;
    for (auto a : r.algorithms) {
      const auto* cell = r.cell(a, c.phrase);
      if (!cell) continue;
      if (const auto v = value_of(*cell, c.impostor); v && (!m || *v < *m)) m = v;
    }
    minima.push_back(m);
  }

  std::ostringstream os;
  os << (r.impostor_mode ? "Error rates with impostors (%)" : "Equal error rate (%)") << ", seed " << r.seed
     << '\n';
  os << pad_right("Algorithm", name_width);
  std::vector<std::size_t> widths;
  for (const auto& c : cols) {
    widths.push_back(std::max<std::size_t>(c.label.size(), 7) + 2);
    os << pad_left(c.label, widths.back());
  }
  os << '\n';
  for (auto a : r.algorithms) {
    os << pad_right(std::string(display_name(a)), name_width);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto* cell = r.cell(a, cols[i].phrase);
      std::string text = "-";
      if (cell) {
        const auto v = value_of(*cell, cols[i].impostor);
        text = v ? format_fixed(*v, 1) : "";
        if (v && minima[i] && *v == *minima[i]) text += '*';
        if (cell->status != CellStatus::ok) text += '!';
      }
      os << pad_left(text, widths[i]);
    }
    os << '\n';
  }
  // Failure notes, so a '!' is never unexplained.
  for (auto a : r.algorithms) {
    for (auto p : r.datasets) {
      const auto* cell = r.cell(a, p);
      if (cell && cell->status != CellStatus::ok) {
        os << "! " << to_string(a) << '/' << dataset_key(p) << ": " << cell->note << '\n';
      }
    }
  }
  return os.str();
}

std::string render_csv(const EvalReport& r) {
  std::ostringstream os;
  os << "algorithm,dataset,eer_percent,impostor_error_percent\n";
  for (auto a : r.algorithms) {
    for (auto p : r.datasets) {
      const auto* cell = r.cell(a, p);
      if (!cell) continue;
      os << to_string(a) << ',' << dataset_key(p) << ',';
      if (cell->eer_percent) os << format_number(*cell->eer_percent);
      os << ',';
      if (cell->impostor_percent) os << format_number(*cell->impostor_percent);
      os << '\n';
    }
  }
  return os.str();
}

ReportCell evaluate_cell(const Dataset& data, const Dataset* impostors, Algorithm algorithm,
                         const EvalOptions& options) {
  ReportCell cell;
  try {
    if (impostors) {
      const auto r = impostor_evaluate(data, *impostors, algorithm, options);
      cell.eer_percent = r.eer_percent;
      cell.impostor_percent = r.impostor_error_percent;
      if (!r.genuine.converged) {
        cell.status = CellStatus::not_converged;
        cell.note = "solver stopped before reaching its tolerance";
      }
    } else {
      const auto folds = make_folds(data, options.folds, options.seed);
      const auto r = cross_validate(data, algorithm, folds, options.config, options.seed, options.jobs);
      cell.eer_percent = cv_eer(r, options.fold_average);
      if (!r.converged) {
        cell.status = CellStatus::not_converged;
        cell.note = "solver stopped before reaching its tolerance";
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::diverged && e.code() != ErrorCode::singular_covariance) throw;
    cell = ReportCell{};
    cell.status = CellStatus::failed;
    cell.note = e.what();
  }
  return cell;
}

EvalReport evaluate(const std::map<PhraseId, Dataset>& data, const std::map<PhraseId, Dataset>& impostors,
                    const std::vector<Algorithm>& algorithms, const std::vector<PhraseId>& datasets,
                    const EvalOptions& options) {
  EvalReport report;
  report.impostor_mode = !impostors.empty();
  report.seed = options.seed;
  report.algorithms = algorithms;
  report.datasets = datasets;
  for (auto p : datasets) {
    const auto it = data.find(p);
    if (it == data.end()) throw Error(ErrorCode::invalid_argument, "no " + dataset_key(p) + " dataset given");
    const Dataset* imp = nullptr;
    if (report.impostor_mode) {
      const auto jt = impostors.find(p);
      if (jt == impostors.end()) {
        throw Error(ErrorCode::invalid_argument, "no " + dataset_key(p) + " impostor dataset given");
      }
      imp = &jt->second;
    }
    for (auto a : algorithms) report.cells[{a, p}] = evaluate_cell(it->second, imp, a, options);
  }
  return report;
}

}  // namespace keydyn
