#include <doctest.h>

#include <random>

#include "twinfuse/dcva.hpp"
#include "twinfuse/errors.hpp"
#include "test_helpers.hpp"

using namespace twinfuse;

namespace {

LabeledSamples random_data(std::mt19937_64& rng, int n_classes, int per_class, Eigen::Index d) {
    LabeledSamples data;
    for (int c = 0; c < n_classes; ++c) {
        data.labels.push_back("class" + std::to_string(c));
        data.samples.push_back(testutil::random_matrix(rng, d, per_class));
    }
    return data;
}

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& columns) {
    const auto n = columns.cols();
    Eigen::MatrixXd dist(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            dist(i, j) = (columns.col(i) - columns.col(j)).norm();
    return dist;
}

} // namespace

TEST_SUITE("dcva") {

TEST_CASE("two singleton classes reduce to one distinctive scalar") {
    LabeledSamples data;
    data.labels = {"a", "b"};
    Eigen::VectorXd va(3), vb(3);
    va << 1, 0, 0;
    vb << 0, 1, 0;
    data.samples = {va, vb};

    const auto model = fit_dcva(data);
    CHECK(model.reduced_dim() == 1);
    CHECK(model.common_vectors.cols() == 2);
    // with no within-class scatter the common vector is the sample itself
    CHECK((project(model, va) - model.common_vectors.col(0)).norm() <= 1e-12);
    CHECK((project(model, vb) - model.common_vectors.col(1)).norm() <= 1e-12);
    CHECK(std::abs(model.common_vectors(0, 0) - model.common_vectors(0, 1)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    SUBCASE("matching distances are hand-computable") {
        EarFeatureVector probe;
        probe.subject_id = "a";
        probe.values = va;
        const auto result = match_ear(probe, model);
        REQUIRE(result.size() == 2);
        CHECK(result[0].second == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(result[1].second == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("within-class samples collapse onto one common vector") {
    std::mt19937_64 rng(41);
    const auto data = random_data(rng, 3, 2, 50);
    const auto model = fit_dcva(data);
    CHECK(model.reduced_dim() == 2);

    for (std::size_t c = 0; c < 3; ++c) {
        const auto& cls = data.samples[c];
        const auto p0 = project(model, cls.col(0));
        const auto p1 = project(model, cls.col(1));
        CHECK((p0 - p1).norm() <= 1e-8 * cls.col(0).norm());
        CHECK((p0 - model.common_vectors.col(static_cast<Eigen::Index>(c))).norm() <=
              1e-8 * cls.col(0).norm());
    }

    SUBCASE("projection columns are orthonormal") {
        const Eigen::MatrixXd gram =
            model.projection.transpose() * model.projection -
            Eigen::MatrixXd::Identity(model.reduced_dim(), model.reduced_dim());
        CHECK(gram.cwiseAbs().maxCoeff() <= 1e-10);
    }

    SUBCASE("projection is blind to within-class differences") {
        const Eigen::VectorXd diff = data.samples[1].col(0) - data.samples[1].col(1);
        const Eigen::VectorXd v = data.samples[0].col(0);
        CHECK((project(model, v + diff) - project(model, v)).norm() <= 1e-8 * v.norm());
    }

    SUBCASE("zero maps to zero") {
        CHECK(project(model, Eigen::VectorXd::Zero(50)).isZero(1e-14));
    }
}

TEST_CASE("class permutation permutes common vectors and keeps rankings") {
    std::mt19937_64 rng(42);
    const auto data = random_data(rng, 4, 1, 30);
    const auto model = fit_dcva(data);

    LabeledSamples shuffled;
    const std::vector<std::size_t> perm{2, 0, 3, 1};
    for (auto i : perm) {
        shuffled.labels.push_back(data.labels[i]);
        shuffled.samples.push_back(data.samples[i]);
    }
    const auto model2 = fit_dcva(shuffled);

    // reduced coordinates only match up to an orthogonal change of basis, so
    // compare the permutation-aligned distance geometry instead
    const auto dist1 = pairwise_distances(model.common_vectors);
    const auto dist2 = pairwise_distances(model2.common_vectors);
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = 0; j < perm.size(); ++j)
            CHECK(dist2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
                  doctest::Approx(dist1(static_cast<Eigen::Index>(perm[i]),
                                        static_cast<Eigen::Index>(perm[j])))
                      .epsilon(1e-8));

    EarFeatureVector probe;
    probe.subject_id = "probe";
    probe.values = testutil::random_vector(rng, 30);
    auto r1 = match_ear(probe, model);
    auto r2 = match_ear(probe, model2);
    auto by_distance = [](auto a, auto b) { return a.second < b.second; };
    std::sort(r1.begin(), r1.end(), by_distance);
    std::sort(r2.begin(), r2.end(), by_distance);
    for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r1[i].first == r2[i].first);
}

TEST_CASE("training probes score zero distance to their class") {
    std::mt19937_64 rng(43);
    const auto data = random_data(rng, 3, 2, 40);
    const auto model = fit_dcva(data);
    EarFeatureVector probe;
    probe.subject_id = "class1";
    probe.values = data.samples[1].col(1);
    const auto result = match_ear(probe, model);
    CHECK(result[1].second <= 1e-8 * probe.values.norm());
    for (const auto& [id, dist] : result) CHECK(dist >= 0.0);
}

TEST_CASE("identical classes are degenerate") {
    Eigen::VectorXd v(10);
    v.setOnes();
    LabeledSamples data;
    data.labels = {"a", "b", "c"};
    data.samples = {v, v, v};
    CHECK_THROWS_AS(fit_dcva(data), DegenerateClasses);
}

TEST_CASE("dimension errors") {
    std::mt19937_64 rng(44);
    LabeledSamples data;
    data.labels = {"a", "b"};
    data.samples = {testutil::random_matrix(rng, 10, 1), testutil::random_matrix(rng, 9, 1)};
    CHECK_THROWS_AS(fit_dcva(data), DimensionMismatch);

    // not a small-sample setup: d <= n
    LabeledSamples wide;
    wide.labels = {"a", "b"};
    wide.samples = {testutil::random_matrix(rng, 3, 2), testutil::random_matrix(rng, 3, 2)};
    CHECK_THROWS_AS(fit_dcva(wide), DimensionMismatch);

    const auto model = fit_dcva(random_data(rng, 2, 1, 20));
    CHECK_THROWS_AS(project(model, Eigen::VectorXd::Zero(19)), DimensionMismatch);
    EarFeatureVector probe;
    probe.values = Eigen::VectorXd::Zero(21);
    CHECK_THROWS_AS(match_ear(probe, model), DimensionMismatch);
}

TEST_CASE("medium-dimensional smoke stays in thin factorizations") {
    std::mt19937_64 rng(45);
    const auto data = random_data(rng, 4, 2, 5000);
    const auto model = fit_dcva(data);
    CHECK(model.reduced_dim() == 3);
    CHECK(model.projection.rows() == 5000);
    for (std::size_t c = 0; c < 4; ++c) {
        const auto& cls = data.samples[c];
        CHECK((project(model, cls.col(0)) - project(model, cls.col(1))).norm() <=
              1e-8 * cls.col(0).norm());
    }
}

}
