#include "twinfuse/dcva.hpp"

#include <limits>

#include <Eigen/SVD>

#include "twinfuse/errors.hpp"

namespace twinfuse {

namespace {

// Orthonormal basis of the column span, rank cut at max(dims) * eps * sigma_max.
Eigen::MatrixXd span_basis(const Eigen::MatrixXd& m) {
    if (m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= 0.0) return Eigen::MatrixXd(m.rows(), 0);
    const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                       std::numeric_limits<double>::epsilon() * sv[0];
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > tol) ++rank;
    return svd.matrixU().leftCols(rank);
}

// v minus its projection onto the (orthonormal) basis.
Eigen::MatrixXd reject(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& v) {
    if (basis.cols() == 0) return v;
    return v - basis * (basis.transpose() * v);
}

} // namespace

DcvaModel fit_dcva(const LabeledSamples& data) {
    const auto c = static_cast<Eigen::Index>(data.labels.size());
    if (c < 2) throw InvalidArgument("dcva needs at least 2 classes");
    if (data.samples.size() != data.labels.size())
        throw DimensionMismatch("labels and sample groups differ in count");

    const Eigen::Index d = data.samples[0].rows();
    Eigen::Index n_total = 0;
    for (const auto& cls : data.samples) {
        if (cls.cols() < 1) throw InvalidArgument("every class needs at least one sample");
        if (cls.rows() != d)
            throw DimensionMismatch("feature dimension differs across classes");
        n_total += cls.cols();
    }
    if (d <= n_total)
        throw DimensionMismatch("small-sample regime requires feature dimension (" +
                                std::to_string(d) + ") > total sample count (" +
                                std::to_string(n_total) + ")");

    // Within-class scatter enters only through the centered data columns.
    Eigen::MatrixXd within(d, n_total);
    Eigen::MatrixXd all(d, n_total);
    Eigen::Index col = 0;
    for (const auto& cls : data.samples) {
        const Eigen::VectorXd mean = cls.rowwise().mean();
        for (Eigen::Index j = 0; j < cls.cols(); ++j, ++col) {
            within.col(col) = cls.col(j) - mean;
            all.col(col) = cls.col(j);
        }
    }
    const Eigen::MatrixXd scatter_basis = span_basis(within);

    // Common vector: any sample of the class, with the scatter range removed.
    Eigen::MatrixXd common_full(d, c);
    for (Eigen::Index i = 0; i < c; ++i)
        common_full.col(i) = reject(scatter_basis, data.samples[static_cast<std::size_t>(i)].col(0));

    DcvaModel model;
    model.class_labels = data.labels;
    model.null_basis = span_basis(reject(scatter_basis, all));

    const Eigen::VectorXd grand_mean = common_full.rowwise().mean();
    const Eigen::MatrixXd between = common_full.colwise() - grand_mean;
    const Eigen::MatrixXd between_basis = span_basis(between);
    if (between_basis.cols() < c - 1)
        throw DegenerateClasses("common vectors span only " +
                                std::to_string(between_basis.cols()) + " of " +
                                std::to_string(c - 1) + " discriminative directions");

    model.projection = between_basis.leftCols(c - 1);
    model.common_vectors = model.projection.transpose() * common_full;
    return model;
}

Eigen::VectorXd project(const DcvaModel& model, const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (v.size() != model.input_dim())
        throw DimensionMismatch("vector of length " + std::to_string(v.size()) +
                                " against a model of dimension " +
                                std::to_string(model.input_dim()));
    return model.projection.transpose() * v;
}

std::vector<std::pair<std::string, double>>
match_ear(const EarFeatureVector& probe, const DcvaModel& model) {
    const Eigen::VectorXd reduced = project(model, probe.values);
    std::vector<std::pair<std::string, double>> result;
    result.reserve(model.class_labels.size());
    for (std::size_t i = 0; i < model.class_labels.size(); ++i) {
        const double dist =
            (reduced - model.common_vectors.col(static_cast<Eigen::Index>(i))).norm();
        result.emplace_back(model.class_labels[i], dist);
    }
    return result;
}

} // namespace twinfuse
