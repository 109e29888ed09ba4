#pragma once

#include <gtest/gtest.h>

#include <vector>

#include <Eigen/Dense>

#include "codeclag/errors.hpp"

namespace testing_helpers {

template <typename F>
codeclag::ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const codeclag::Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no codeclag::Error thrown";
    return codeclag::ErrorKind::InvalidInput;
}

inline Eigen::MatrixXd column(const std::vector<double>& v) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(v.size()), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = v[i];
    return m;
}

inline Eigen::MatrixXd matrix(const std::vector<std::vector<double>>& rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.at(0).size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows[i].size(); ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    return m;
}

}  // namespace testing_helpers
