// Copyright 2026 the gpsamp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GPSAMP_DATASET_HPP
#define GPSAMP_DATASET_HPP

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gpsamp/errors.hpp"

namespace gpsamp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Immutable training snapshot. Inputs are stored normalized to [0,1]^d via the
// box bounds; outputs are stored z-scored. All modeling happens in this
// normalized space; raw values re-enter only at the reporting boundary.
class Dataset {
 public:
  Dataset() = default;

  static Dataset from_raw(const MatrixXd& X_raw, const VectorXd& y_raw,
                          const MatrixXd& bounds) {
    require(X_raw.rows() >= 1, "Dataset: need at least one row");
    require_dims(X_raw.rows() == y_raw.size(), "Dataset: X/y row mismatch");
    require_dims(bounds.rows() == X_raw.cols() && bounds.cols() == 2,
                 "Dataset: bounds must be d x 2");
    for (Eigen::Index i = 0; i < bounds.rows(); ++i)
      require(std::isfinite(bounds(i, 0)) && std::isfinite(bounds(i, 1)) &&
                  bounds(i, 0) < bounds(i, 1),
              "Dataset: bounds must be finite with lower < upper");
    Dataset d;
    d.bounds_ = bounds;
    d.out_mean_ = y_raw.mean();
    const Eigen::Index n = y_raw.size();
    double var = (y_raw.array() - d.out_mean_).square().sum() /
                 std::max<Eigen::Index>(n - 1, 1);
    d.out_std_ = std::sqrt(var);
    if (!(d.out_std_ > 1e-300)) d.out_std_ = 1.0;  // constant outputs
    d.X_.resize(X_raw.rows(), X_raw.cols());
    for (Eigen::Index j = 0; j < X_raw.cols(); ++j)
      d.X_.col(j) = (X_raw.col(j).array() - bounds(j, 0)) /
                    (bounds(j, 1) - bounds(j, 0));
    d.y_ = (y_raw.array() - d.out_mean_) / d.out_std_;
    return d;
  }

  // identity maps; inputs assumed already in [0,1]^d, outputs on model scale
  static Dataset from_normalized(MatrixXd X, VectorXd y) {
    require(X.rows() >= 1, "Dataset: need at least one row");
    require_dims(X.rows() == y.size(), "Dataset: X/y row mismatch");
    Dataset d;
    d.X_ = std::move(X);
    d.y_ = std::move(y);
    d.bounds_.resize(d.X_.cols(), 2);
    d.bounds_.col(0).setZero();
    d.bounds_.col(1).setOnes();
    d.out_mean_ = 0.0;
    d.out_std_ = 1.0;
    return d;
  }

  // CSV with header x1,...,xd,y
  static Dataset from_csv(const std::string& path, const MatrixXd& bounds) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty dataset: " + path);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::vector<double> row;
      std::string cell;
      while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
      rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("dataset has no data rows: " + path);
    const Eigen::Index d = static_cast<Eigen::Index>(rows[0].size()) - 1;
    if (d < 1) throw IoError("dataset needs at least one input column");
    MatrixXd X(rows.size(), d);
    VectorXd y(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<Eigen::Index>(rows[r].size()) != d + 1)
        throw IoError("ragged dataset row in " + path);
      for (Eigen::Index j = 0; j < d; ++j) X(r, j) = rows[r][j];
      y(r) = rows[r][d];
    }
    return from_raw(X, y, bounds);
  }

  Eigen::Index size() const { return y_.size(); }
  Eigen::Index dim() const { return X_.cols(); }
  const MatrixXd& X() const { return X_; }
  const VectorXd& y() const { return y_; }
  const MatrixXd& bounds() const { return bounds_; }
  double out_mean() const { return out_mean_; }
  double out_std() const { return out_std_; }

  VectorXd to_normalized(const VectorXd& x_raw) const {
    return ((x_raw - bounds_.col(0)).array() /
            (bounds_.col(1) - bounds_.col(0)).array())
        .matrix();
  }
  MatrixXd to_normalized_rows(const MatrixXd& X_raw) const {
    MatrixXd out(X_raw.rows(), X_raw.cols());
    for (Eigen::Index j = 0; j < X_raw.cols(); ++j)
      out.col(j) = (X_raw.col(j).array() - bounds_(j, 0)) /
                   (bounds_(j, 1) - bounds_(j, 0));
    return out;
  }
  VectorXd to_raw(const VectorXd& x_norm) const {
    return (bounds_.col(0).array() +
            x_norm.array() * (bounds_.col(1) - bounds_.col(0)).array())
        .matrix();
  }
  double denorm_y(double y_norm) const { return y_norm * out_std_ + out_mean_; }
  double norm_y(double y_raw) const { return (y_raw - out_mean_) / out_std_; }

 private:
  MatrixXd X_;       // normalized inputs
  VectorXd y_;       // z-scored outputs
  MatrixXd bounds_;  // raw box, d x 2
  double out_mean_ = 0.0;
  double out_std_ = 1.0;
};

}  // namespace gpsamp

#endif
