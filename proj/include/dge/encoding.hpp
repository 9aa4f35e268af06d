#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "dge/dataset.hpp"
#include "dge/error.hpp"
#include "dge/schema.hpp"

namespace dge {

// Feature map shared by LogReg / MLP / kNN: numeric columns standardized
// with training-set statistics, categorical columns one-hot over schema
// levels. Constant columns standardize with std 1.
class FeatureEncoder {
public:
    FeatureEncoder() = default;

    explicit FeatureEncoder(const TabularDataset& train) : schema_(train.schema()) {
        const std::size_t d = schema_.n_features();
        mean_.assign(d, 0.0);
        std_.assign(d, 1.0);
        encoded_dim_ = 0;
        for (std::size_t c = 0; c < d; ++c) {
            if (schema_.feature(c).kind == ColumnKind::Numeric) {
                double m = 0.0;
                for (std::size_t r = 0; r < train.n_rows(); ++r) m += train.cell(r, c);
                m /= static_cast<double>(train.n_rows());
                double v = 0.0;
                for (std::size_t r = 0; r < train.n_rows(); ++r) {
                    const double dlt = train.cell(r, c) - m;
                    v += dlt * dlt;
                }
                v /= static_cast<double>(train.n_rows());
                mean_[c] = m;
                std_[c] = v > 0.0 ? std::sqrt(v) : 1.0;
                encoded_dim_ += 1;
            } else {
                encoded_dim_ += schema_.feature(c).levels.size();
            }
        }
    }

    const Schema& schema() const { return schema_; }
    std::size_t encoded_dim() const { return encoded_dim_; }

    void check(const TabularDataset& data) const {
        if (!(data.schema() == schema_))
            throw SchemaMismatch("dataset does not match the training schema");
    }

    Eigen::MatrixXd encode(const TabularDataset& data) const {
        check(data);
        Eigen::MatrixXd x(static_cast<Eigen::Index>(data.n_rows()),
                          static_cast<Eigen::Index>(encoded_dim_));
        for (std::size_t r = 0; r < data.n_rows(); ++r) encode_row(data.row(r), x, r);
        return x;
    }

private:
    void encode_row(const double* row, Eigen::MatrixXd& out, std::size_t r) const {
        Eigen::Index j = 0;
        for (std::size_t c = 0; c < schema_.n_features(); ++c) {
            if (schema_.feature(c).kind == ColumnKind::Numeric) {
                out(static_cast<Eigen::Index>(r), j++) = (row[c] - mean_[c]) / std_[c];
            } else {
                const auto levels = schema_.feature(c).levels.size();
                for (std::size_t l = 0; l < levels; ++l)
                    out(static_cast<Eigen::Index>(r), j++) =
                        static_cast<std::size_t>(row[c]) == l ? 1.0 : 0.0;
            }
        }
    }

    Schema schema_;
    std::vector<double> mean_;
    std::vector<double> std_;
    std::size_t encoded_dim_ = 0;
};

inline Eigen::VectorXd labels_to_vector(const TabularDataset& data) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(data.n_rows()));
    for (std::size_t r = 0; r < data.n_rows(); ++r) y(static_cast<Eigen::Index>(r)) = data.label(r);
    return y;
}

}  // namespace dge
