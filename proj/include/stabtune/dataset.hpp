#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "stabtune/error.hpp"
#include "stabtune/rng.hpp"

namespace stabtune {

// A regression sample: response y and n-by-p design matrix X with column
// labels. Centering/standardization state is carried explicitly, together
// with the affine map back to the units the data had when first loaded, so
// coefficients fit on the transformed data can always be reported on the
// original scale.
struct Dataset {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::string> column_names;
  bool centered = false;
  bool standardized = false;
  Eigen::VectorXd column_means;   // mean removed per column (zeros when raw)
  Eigen::VectorXd column_scales;  // divisor applied per column (ones when raw)
  double y_mean = 0.0;

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return X.cols(); }

  static Dataset from_raw(Eigen::VectorXd y_in, Eigen::MatrixXd x_in,
                          std::vector<std::string> names = {}) {
    Dataset ds;
    ds.y = std::move(y_in);
    ds.X = std::move(x_in);
    if (names.empty()) {
      names.reserve(static_cast<std::size_t>(ds.X.cols()));
      for (Eigen::Index j = 0; j < ds.X.cols(); ++j)
        names.push_back("x" + std::to_string(j + 1));
    }
    ds.column_names = std::move(names);
    ds.column_means = Eigen::VectorXd::Zero(ds.X.cols());
    ds.column_scales = Eigen::VectorXd::Ones(ds.X.cols());
    ds.validate();
    return ds;
  }

  // Shape, finiteness, and declared-state checks. Centered data must have
  // column and response means within 1e-10 of zero; standardized columns
  // must satisfy x_j'x_j = n to relative 1e-8.
  void validate() const {
    if (n() < 2) throw DataError("dataset must have at least 2 rows");
    if (p() < 1) throw DataError("dataset must have at least 1 predictor");
    if (X.rows() != n()) throw DataError("X and y row counts differ");
    if (static_cast<Eigen::Index>(column_names.size()) != p())
      throw DataError("column name count does not match p");
    if (!y.allFinite() || !X.allFinite())
      throw DataError("dataset contains non-finite entries");
    if (column_means.size() != p() || column_scales.size() != p())
      throw DataError("transform metadata has wrong length");
    if (centered) {
      const double nd = static_cast<double>(n());
      if (std::abs(y.sum() / nd) > 1e-10)
        throw DataError("dataset flagged centered but response mean is not 0");
      for (Eigen::Index j = 0; j < p(); ++j)
        if (std::abs(X.col(j).sum() / nd) > 1e-10)
          throw DataError("dataset flagged centered but column '" +
                          column_names[static_cast<std::size_t>(j)] +
                          "' mean is not 0");
    }
    if (standardized) {
      const double nd = static_cast<double>(n());
      for (Eigen::Index j = 0; j < p(); ++j) {
        const double ss = X.col(j).squaredNorm();
        if (std::abs(ss - nd) > 1e-8 * nd)
          throw DataError("dataset flagged standardized but column '" +
                          column_names[static_cast<std::size_t>(j)] +
                          "' does not satisfy x'x = n");
      }
    }
  }

  // Row subset in the given order. The result is a raw dataset: any
  // transform state of the source is dropped, since subset means and scales
  // must be recomputed before the invariants hold again.
  Dataset rows(const std::vector<int>& idx) const {
    const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
    Dataset out;
    out.y.resize(m);
    out.X.resize(m, p());
    for (Eigen::Index i = 0; i < m; ++i) {
      const int r = idx[static_cast<std::size_t>(i)];
      if (r < 0 || r >= n()) throw ArgumentError("row index out of range");
      out.y(i) = y(r);
      out.X.row(i) = X.row(r);
    }
    out.column_names = column_names;
    out.column_means = Eigen::VectorXd::Zero(p());
    out.column_scales = Eigen::VectorXd::Ones(p());
    return out;
  }
};

// Two disjoint halves of size m = floor(n/2) each; for odd n one row is
// left out. The index sets (into the source dataset) are kept alongside
// the materialized halves.
struct SplitPair {
  Dataset first;
  Dataset second;
  int m = 0;
  std::vector<int> first_indices;
  std::vector<int> second_indices;
};

// Centers y and every column of ds; when scale is set, also rescales each
// column so that x_j'x_j = n. The recorded means/scales compose with any
// transform already applied, so they always map back to the units of the
// originally loaded data.
inline Dataset center_and_scale(const Dataset& ds, bool scale) {
  ds.validate();
  const double nd = static_cast<double>(ds.n());
  Dataset out = ds;

  const double ym = out.y.sum() / nd;
  out.y.array() -= ym;
  out.y_mean = ds.y_mean + ym;

  for (Eigen::Index j = 0; j < out.p(); ++j) {
    const double mean = out.X.col(j).sum() / nd;
    out.X.col(j).array() -= mean;
    out.column_means(j) = ds.column_means(j) + mean * ds.column_scales(j);
    if (scale) {
      const double ss = out.X.col(j).squaredNorm();
      const double s = std::sqrt(ss / nd);
      if (s <= 1e-12 * std::max(1.0, std::abs(mean)))
        throw DataError("column '" +
                        out.column_names[static_cast<std::size_t>(j)] +
                        "' has zero variance and cannot be standardized");
      out.X.col(j) /= s;
      out.column_scales(j) = ds.column_scales(j) * s;
    }
  }
  out.centered = true;
  out.standardized = scale ? true : ds.standardized;
  out.validate();
  return out;
}

// Uniformly random partition into two disjoint halves of size floor(n/2).
// Row order within each half preserves draw order. Deterministic given the
// stream state.
inline SplitPair random_half_split(const Dataset& ds, RngStream& rng) {
  ds.validate();
  const int n = static_cast<int>(ds.n());
  if (n < 4) throw DataError("half split requires at least 4 rows");
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  rng.shuffle(perm);
  const int m = n / 2;
  SplitPair split;
  split.m = m;
  split.first_indices.assign(perm.begin(), perm.begin() + m);
  split.second_indices.assign(perm.begin() + m, perm.begin() + 2 * m);
  split.first = ds.rows(split.first_indices);
  split.second = ds.rows(split.second_indices);
  return split;
}

// Uniformly random split into (n_train, n - n_train) rows.
inline std::pair<Dataset, Dataset> train_test_split(const Dataset& ds,
                                                    int n_train,
                                                    RngStream& rng) {
  ds.validate();
  const int n = static_cast<int>(ds.n());
  if (n_train < 1 || n_train >= n)
    throw ArgumentError("train size must satisfy 1 <= n_train < n, got " +
                        std::to_string(n_train));
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  rng.shuffle(perm);
  const std::vector<int> train_idx(perm.begin(), perm.begin() + n_train);
  const std::vector<int> test_idx(perm.begin() + n_train, perm.end());
  return {ds.rows(train_idx), ds.rows(test_idx)};
}

// Coefficients of a fit on a transformed dataset, expressed in the units of
// the originally loaded data, with the intercept restored.
struct OriginalScaleModel {
  double intercept = 0.0;
  Eigen::VectorXd coefficients;

  double predict_row(const Eigen::RowVectorXd& x) const {
    return intercept + x.dot(coefficients);
  }

  Eigen::VectorXd predict(const Eigen::MatrixXd& x_raw) const {
    return (x_raw * coefficients).array() + intercept;
  }
};

inline OriginalScaleModel to_original_scale(const Dataset& ds,
                                            const Eigen::VectorXd& beta) {
  if (beta.size() != ds.p())
    throw ArgumentError("coefficient vector length does not match p");
  OriginalScaleModel model;
  model.coefficients = beta.array() / ds.column_scales.array();
  model.intercept = ds.y_mean - model.coefficients.dot(ds.column_means);
  return model;
}

}  // namespace stabtune
