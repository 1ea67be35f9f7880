#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "twinfuse/gabor.hpp"

namespace twinfuse {

/// Training data: per class, a d x n_i matrix of feature columns.
struct LabeledSamples {
    std::vector<std::string> labels;
    std::vector<Eigen::MatrixXd> samples;
};

/// Discriminative common vectors model. projection maps a length-d feature
/// onto C-1 discriminative coordinates; every training sample of class k
/// lands exactly on common_vectors.col(k).
struct DcvaModel {
    std::vector<std::string> class_labels;
    Eigen::MatrixXd null_basis;       // d x q, orthonormal; within-class null
                                      // space restricted to the training span
    Eigen::MatrixXd projection;       // d x (C-1), orthonormal columns
    Eigen::MatrixXd common_vectors;   // (C-1) x C, one column per class

    Eigen::Index input_dim() const { return projection.rows(); }
    Eigen::Index reduced_dim() const { return projection.cols(); }
};

/// Fits the model in the small-sample regime (d > total samples). Scatter
/// matrices are never materialized; everything runs on thin factorizations
/// of d x n matrices. Throws DimensionMismatch on inconsistent or
/// insufficient data, DegenerateClasses when the common vectors do not span
/// C-1 directions.
DcvaModel fit_dcva(const LabeledSamples& data);

/// W_opt^T v. Throws DimensionMismatch.
Eigen::VectorXd project(const DcvaModel& model, const Eigen::Ref<const Eigen::VectorXd>& v);

/// Per-class Euclidean distance between the projected probe and each class's
/// common vector, in class_labels order.
std::vector<std::pair<std::string, double>>
match_ear(const EarFeatureVector& probe, const DcvaModel& model);

} // namespace twinfuse
