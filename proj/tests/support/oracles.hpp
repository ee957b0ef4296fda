#pragma once

// Brute-force reference computations used only by tests. Nothing here calls
// into the library's fitting or scoring code: parameters are re-estimated
// from raw rows with long double accumulators and every likelihood term is
// evaluated as a probability (or density) first and logged afterwards.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <vector>

namespace oracle {

struct Instance {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> labels;
  std::size_t classes = 0;

  std::size_t features() const { return rows.empty() ? 0 : rows.front().size(); }
};

inline std::vector<std::size_t> class_rows(const Instance& data, std::size_t c) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    if (data.labels[r] == c) out.push_back(r);
  }
  return out;
}

inline long double log_prior(const Instance& data, std::size_t c) {
  return std::log(static_cast<long double>(class_rows(data, c).size()) /
                  static_cast<long double>(data.rows.size()));
}

/// Gaussian scores: population variance plus eps * max whole-data variance.
inline std::vector<long double> gaussian_scores(const Instance& data, const std::vector<double>& x,
                                                long double eps = 1e-9L) {
  const std::size_t d = data.features();
  long double max_var = 0.0L;
  for (std::size_t i = 0; i < d; ++i) {
    long double m = 0.0L;
    for (const auto& row : data.rows) m += row[i];
    m /= static_cast<long double>(data.rows.size());
    long double v = 0.0L;
    for (const auto& row : data.rows) v += (row[i] - m) * (row[i] - m);
    max_var = std::max(max_var, v / static_cast<long double>(data.rows.size()));
  }
  const long double floor = eps * (max_var > 0.0L ? max_var : 1.0L);

  std::vector<long double> scores;
  for (std::size_t c = 0; c < data.classes; ++c) {
    const auto members = class_rows(data, c);
    long double score = log_prior(data, c);
    for (std::size_t i = 0; i < d; ++i) {
      long double m = 0.0L;
      for (std::size_t r : members) m += data.rows[r][i];
      m /= static_cast<long double>(members.size());
      long double v = 0.0L;
      for (std::size_t r : members) v += (data.rows[r][i] - m) * (data.rows[r][i] - m);
      v = v / static_cast<long double>(members.size()) + floor;
      const long double density =
          1.0L / std::sqrt(2.0L * std::numbers::pi_v<long double> * v) *
          std::exp(-((x[i] - m) * (x[i] - m)) / (2.0L * v));
      score += std::log(density);
    }
    scores.push_back(score);
  }
  return scores;
}

/// Multinomial scores with add-alpha smoothing over summed feature values.
inline std::vector<long double> multinomial_scores(const Instance& data, const std::vector<double>& x,
                                                   long double alpha = 1.0L) {
  const std::size_t d = data.features();
  std::vector<long double> scores;
  for (std::size_t c = 0; c < data.classes; ++c) {
    const auto members = class_rows(data, c);
    std::vector<long double> sums(d, 0.0L);
    long double total = 0.0L;
    for (std::size_t r : members) {
      for (std::size_t i = 0; i < d; ++i) {
        sums[i] += data.rows[r][i];
        total += data.rows[r][i];
      }
    }
    long double score = log_prior(data, c);
    for (std::size_t i = 0; i < d; ++i) {
      const long double p = (sums[i] + alpha) / (total + alpha * static_cast<long double>(d));
      score += std::log(std::pow(p, static_cast<long double>(x[i])));
    }
    scores.push_back(score);
  }
  return scores;
}

/// Bernoulli scores: log(p^x (1-p)^(1-x)) per feature.
inline std::vector<long double> bernoulli_scores(const Instance& data, const std::vector<double>& x) {
  const std::size_t d = data.features();
  std::vector<long double> scores;
  for (std::size_t c = 0; c < data.classes; ++c) {
    const auto members = class_rows(data, c);
    long double score = log_prior(data, c);
    for (std::size_t i = 0; i < d; ++i) {
      long double present = 0.0L;
      for (std::size_t r : members) present += data.rows[r][i] == 1.0 ? 1.0L : 0.0L;
      const long double p = (present + 1.0L) / (static_cast<long double>(members.size()) + 2.0L);
      const long double xi = x[i];
      score += std::log(std::pow(p, xi) * std::pow(1.0L - p, 1.0L - xi));
    }
    scores.push_back(score);
  }
  return scores;
}

/// Training documents as term sets; the vocabulary is the full column set.
struct TermCorpus {
  std::vector<std::set<std::size_t>> docs;
  std::vector<std::size_t> doc_class;
  std::size_t vocabulary = 0;
  std::size_t classes = 0;
};

struct TraceModel {
  std::vector<long double> prior;
  std::vector<std::vector<long double>> condprob;  // [t][c]
};

/// TRAINBERNOULLINB, one line at a time.
inline TraceModel train_bernoulli_trace(const TermCorpus& id) {
  TraceModel m;
  const long double n = static_cast<long double>(id.docs.size());  // COUNTDOCS
  m.prior.resize(id.classes);
  m.condprob.assign(id.vocabulary, std::vector<long double>(id.classes));
  for (std::size_t c = 0; c < id.classes; ++c) {
    long double n_c = 0.0L;  // COUNTDOCSINCLASS
    for (std::size_t doc = 0; doc < id.docs.size(); ++doc) n_c += id.doc_class[doc] == c;
    m.prior[c] = n_c / n;
    for (std::size_t t = 0; t < id.vocabulary; ++t) {
      long double n_ct = 0.0L;  // COUNTDOCSINCLASSCONTAININGTERM
      for (std::size_t doc = 0; doc < id.docs.size(); ++doc) {
        n_ct += id.doc_class[doc] == c && id.docs[doc].contains(t);
      }
      m.condprob[t][c] = (n_ct + 1.0L) / (n_c + 2.0L);
    }
  }
  return m;
}

/// APPLYBERNOULLINB scores.
inline std::vector<long double> apply_bernoulli_trace(const TraceModel& m,
                                                      const std::set<std::size_t>& doc) {
  std::vector<long double> score(m.prior.size());
  for (std::size_t c = 0; c < m.prior.size(); ++c) {
    score[c] = std::log(m.prior[c]);
    for (std::size_t t = 0; t < m.condprob.size(); ++t) {
      if (doc.contains(t)) {
        score[c] += std::log(m.condprob[t][c]);
      } else {
        score[c] += std::log(1.0L - m.condprob[t][c]);
      }
    }
  }
  return score;
}

inline std::size_t argmax_lowest(const std::vector<long double>& s) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < s.size(); ++c) {
    if (s[c] > s[best]) best = c;
  }
  return best;
}

/// Composite Simpson's rule with an even number of intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  if (n % 2 == 1) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) sum += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Extended-precision normalization of exponentiated scores (small magnitudes only).
inline std::vector<long double> direct_posterior(const std::vector<double>& scores) {
  std::vector<long double> out;
  long double total = 0.0L;
  for (double s : scores) {
    out.push_back(std::exp(static_cast<long double>(s)));
    total += out.back();
  }
  for (auto& p : out) p /= total;
  return out;
}

/// Pearson chi-square by definition, no empty-row handling (callers pass dense tables).
inline double chi_square_by_definition(const std::vector<std::vector<double>>& o) {
  long double n = 0.0L;
  std::vector<long double> rows(o.size(), 0.0L), cols(o.front().size(), 0.0L);
  for (std::size_t i = 0; i < o.size(); ++i) {
    for (std::size_t j = 0; j < o[i].size(); ++j) {
      rows[i] += o[i][j];
      cols[j] += o[i][j];
      n += o[i][j];
    }
  }
  long double chi = 0.0L;
  for (std::size_t i = 0; i < o.size(); ++i) {
    for (std::size_t j = 0; j < o[i].size(); ++j) {
      const long double e = rows[i] * cols[j] / n;
      chi += (o[i][j] - e) * (o[i][j] - e) / e;
    }
  }
  return static_cast<double>(chi);
}

}  // namespace oracle
