#include "core/matrix.hpp"

#include <cmath>
#include <numbers>

#include "core/linalg.hpp"

namespace codedlab {

Matrix Matrix::from_real(std::initializer_list<std::initializer_list<double>> rows) {
    const size_t r = rows.size();
    const size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c, Field::Real);
    size_t i = 0;
    for (const auto& row : rows) {
        require(row.size() == c, ErrorKind::InvalidInput, "ragged initializer");
        size_t j = 0;
        for (double v : row) m.at(i, j++) = v;
        ++i;
    }
    m.validate_finite();
    return m;
}

Matrix Matrix::from_complex(std::initializer_list<std::initializer_list<Complex>> rows) {
    const size_t r = rows.size();
    const size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c, Field::Complex);
    size_t i = 0;
    for (const auto& row : rows) {
        require(row.size() == c, ErrorKind::InvalidInput, "ragged initializer");
        size_t j = 0;
        for (Complex v : row) m.at(i, j++) = v;
        ++i;
    }
    m.validate_finite();
    return m;
}

Matrix Matrix::identity(size_t n) {
    Matrix m(n, n, Field::Real);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix Matrix::ones(size_t rows, size_t cols) {
    Matrix m(rows, cols, Field::Real);
    for (auto& v : m.mutable_data()) v = 1.0;
    return m;
}

Matrix Matrix::random_gaussian(size_t rows, size_t cols, Rng& rng) {
    Matrix m(rows, cols, Field::Real);
    for (auto& v : m.mutable_data()) v = rng.next_normal();
    return m;
}

Matrix Matrix::column(const std::vector<double>& values) {
    Matrix m(values.size(), 1, Field::Real);
    for (size_t i = 0; i < values.size(); ++i) m.at(i, 0) = values[i];
    return m;
}

Matrix Matrix::row(const std::vector<double>& values) {
    Matrix m(1, values.size(), Field::Real);
    for (size_t i = 0; i < values.size(); ++i) m.at(0, i) = values[i];
    return m;
}

void Matrix::validate_finite() const {
    for (const Complex& v : data_) {
        require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::InvalidInput,
                "matrix entries must be finite");
    }
}

Matrix Matrix::block(size_t r0, size_t c0, size_t nrows, size_t ncols) const {
    require(r0 + nrows <= rows_ && c0 + ncols <= cols_, ErrorKind::InvalidParameter,
            "block exceeds matrix bounds");
    Matrix out(nrows, ncols, field_);
    for (size_t i = 0; i < nrows; ++i)
        for (size_t j = 0; j < ncols; ++j) out.at(i, j) = at(r0 + i, c0 + j);
    return out;
}

Matrix Matrix::row_block(size_t index, size_t count, size_t block_rows) const {
    require(index < count && count * block_rows == rows_, ErrorKind::InvalidParameter,
            "row block out of range");
    return block(index * block_rows, 0, block_rows, cols_);
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_, field_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

Matrix Matrix::adjoint() const {
    Matrix out(cols_, rows_, field_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) out.at(j, i) = std::conj(at(i, j));
    return out;
}

Matrix Matrix::conjugate() const {
    Matrix out = *this;
    for (auto& v : out.data_) v = std::conj(v);
    return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
    require(same_shape(other), ErrorKind::InvalidInput, "shape mismatch in addition");
    Matrix out = *this;
    out += other;
    return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
    require(same_shape(other), ErrorKind::InvalidInput, "shape mismatch in subtraction");
    Matrix out = *this;
    out -= other;
    return out;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require(same_shape(other), ErrorKind::InvalidInput, "shape mismatch in addition");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    if (other.field_ == Field::Complex) field_ = Field::Complex;
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require(same_shape(other), ErrorKind::InvalidInput, "shape mismatch in subtraction");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    if (other.field_ == Field::Complex) field_ = Field::Complex;
    return *this;
}

Matrix Matrix::operator*(const Matrix& other) const {
    require(cols_ == other.rows_, ErrorKind::InvalidInput, "inner dimensions disagree");
    Matrix out(rows_, other.cols_,
               (field_ == Field::Complex || other.field_ == Field::Complex) ? Field::Complex
                                                                           : Field::Real);
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t l = 0; l < cols_; ++l) {
            const Complex a = at(i, l);
            if (a == Complex(0.0, 0.0)) continue;
            for (size_t j = 0; j < other.cols_; ++j) out.at(i, j) += a * other.at(l, j);
        }
    }
    return out;
}

Matrix Matrix::operator*(Complex scalar) const {
    Matrix out = *this;
    out *= scalar;
    return out;
}

Matrix Matrix::operator*(double scalar) const { return *this * Complex(scalar, 0.0); }

Matrix& Matrix::operator*=(Complex scalar) {
    for (auto& v : data_) v *= scalar;
    if (scalar.imag() != 0.0) field_ = Field::Complex;
    return *this;
}

Matrix operator*(double scalar, const Matrix& m) { return m * Complex(scalar, 0.0); }

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double s = 0.0;
    for (const Complex& v : data_) s = std::max(s, std::abs(v));
    return s;
}

double Matrix::col_norm(size_t c) const {
    double s = 0.0;
    for (size_t i = 0; i < rows_; ++i) s += std::norm(at(i, c));
    return std::sqrt(s);
}

double Matrix::row_norm(size_t r) const {
    double s = 0.0;
    for (size_t j = 0; j < cols_; ++j) s += std::norm(at(r, j));
    return std::sqrt(s);
}

Complex Matrix::trace() const {
    Complex s(0.0, 0.0);
    for (size_t i = 0; i < std::min(rows_, cols_); ++i) s += at(i, i);
    return s;
}

double Matrix::imag_norm() const {
    double s = 0.0;
    for (const Complex& v : data_) s += v.imag() * v.imag();
    return std::sqrt(s);
}

Matrix Matrix::real_part() const {
    Matrix out(rows_, cols_, Field::Real);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i].real();
    return out;
}

Matrix Matrix::to_real_checked(double rel_tol) const {
    const double scale = std::max(frobenius_norm(), 1.0);
    require(imag_norm() <= rel_tol * scale, ErrorKind::InvalidInput,
            "imaginary residue exceeds tolerance in real extraction");
    return real_part();
}

Matrix hcat(const std::vector<Matrix>& blocks) {
    require(!blocks.empty(), ErrorKind::InvalidInput, "hcat of nothing");
    size_t cols = 0;
    Field f = Field::Real;
    for (const Matrix& b : blocks) {
        require(b.rows() == blocks.front().rows(), ErrorKind::InvalidInput,
                "hcat row mismatch");
        cols += b.cols();
        if (b.field() == Field::Complex) f = Field::Complex;
    }
    Matrix out(blocks.front().rows(), cols, f);
    size_t c0 = 0;
    for (const Matrix& b : blocks) {
        for (size_t i = 0; i < b.rows(); ++i)
            for (size_t j = 0; j < b.cols(); ++j) out.at(i, c0 + j) = b.at(i, j);
        c0 += b.cols();
    }
    return out;
}

Matrix vcat(const std::vector<Matrix>& blocks) {
    require(!blocks.empty(), ErrorKind::InvalidInput, "vcat of nothing");
    size_t rows = 0;
    Field f = Field::Real;
    for (const Matrix& b : blocks) {
        require(b.cols() == blocks.front().cols(), ErrorKind::InvalidInput,
                "vcat column mismatch");
        rows += b.rows();
        if (b.field() == Field::Complex) f = Field::Complex;
    }
    Matrix out(rows, blocks.front().cols(), f);
    size_t r0 = 0;
    for (const Matrix& b : blocks) {
        for (size_t i = 0; i < b.rows(); ++i)
            for (size_t j = 0; j < b.cols(); ++j) out.at(r0 + i, j) = b.at(i, j);
        r0 += b.rows();
    }
    return out;
}

std::vector<Matrix> split_cols(const Matrix& m, size_t k) {
    require(k >= 1, ErrorKind::InvalidParameter, "block count must be positive");
    require(m.cols() % k == 0, ErrorKind::InvalidParameter,
            "column count not divisible by block count");
    const size_t w = m.cols() / k;
    std::vector<Matrix> out;
    out.reserve(k);
    for (size_t j = 0; j < k; ++j) out.push_back(m.block(0, j * w, m.rows(), w));
    return out;
}

std::vector<Matrix> split_rows(const Matrix& m, size_t k) {
    require(k >= 1, ErrorKind::InvalidParameter, "block count must be positive");
    require(m.rows() % k == 0, ErrorKind::InvalidParameter,
            "row count not divisible by block count");
    const size_t h = m.rows() / k;
    std::vector<Matrix> out;
    out.reserve(k);
    for (size_t i = 0; i < k; ++i) out.push_back(m.block(i * h, 0, h, m.cols()));
    return out;
}

std::vector<Matrix> partition(const Matrix& m, size_t k, SplitScheme scheme, Operand operand) {
    const bool by_cols = (scheme == SplitScheme::InnerDim) == (operand == Operand::Left);
    return by_cols ? split_cols(m, k) : split_rows(m, k);
}

std::vector<Matrix> BlockPartition::apply(const Matrix& m, Operand operand) const {
    return partition(m, k, scheme, operand);
}

Matrix BlockPartition::reassemble(const std::vector<Matrix>& blocks, SplitScheme scheme,
                                  Operand operand) {
    const bool by_cols = (scheme == SplitScheme::InnerDim) == (operand == Operand::Left);
    return by_cols ? hcat(blocks) : vcat(blocks);
}

EvalPoints::EvalPoints(std::vector<Complex> pts) : points(std::move(pts)) {
    for (size_t i = 0; i < points.size(); ++i) {
        require(std::abs(points[i]) > 1e-12, ErrorKind::InvalidParameter,
                "evaluation points must be nonzero");
        for (size_t j = i + 1; j < points.size(); ++j) {
            require(std::abs(points[i] - points[j]) > 1e-12, ErrorKind::InvalidParameter,
                    "evaluation points must be distinct");
        }
    }
}

EvalPoints EvalPoints::subset(const std::vector<size_t>& indices) const {
    std::vector<Complex> pts;
    pts.reserve(indices.size());
    for (size_t i : indices) {
        require(i < points.size(), ErrorKind::InvalidParameter, "point index out of range");
        pts.push_back(points[i]);
    }
    return EvalPoints(std::move(pts));
}

EvalPoints roots_of_unity(size_t n) {
    require(n >= 1, ErrorKind::InvalidParameter, "roots_of_unity needs n >= 1");
    std::vector<Complex> pts;
    pts.reserve(n);
    for (size_t j = 1; j <= n; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        pts.emplace_back(std::cos(theta), std::sin(theta));
    }
    return EvalPoints(std::move(pts));
}

Matrix vandermonde(const EvalPoints& points, size_t k) {
    require(k >= 1, ErrorKind::InvalidParameter, "vandermonde needs k >= 1");
    Matrix out(points.size(), k, Field::Complex);
    for (size_t i = 0; i < points.size(); ++i) {
        Complex p(1.0, 0.0);
        for (size_t j = 0; j < k; ++j) {
            out.at(i, j) = p;
            p *= points[i];
        }
    }
    return out;
}

std::vector<Complex> decoding_row(const EvalPoints& points) {
    const size_t k = points.size();
    require(k >= 1, ErrorKind::InvalidParameter, "decoding_row needs at least one point");
    // a^T V = e_1^T  <=>  V^T a = e_1
    const Matrix vt = vandermonde(points, k).transpose();
    Matrix e1(k, 1, Field::Complex);
    e1.at(0, 0) = 1.0;
    const Matrix a = solve_lu(vt, e1);
    std::vector<Complex> out(k);
    for (size_t i = 0; i < k; ++i) out[i] = a.at(i, 0);
    return out;
}

std::vector<Matrix> lagrange_interpolate(const EvalPoints& points,
                                         const std::vector<Matrix>& values) {
    const size_t m = points.size();
    require(m >= 1 && values.size() == m, ErrorKind::InvalidInput,
            "need one sample per interpolation point");
    for (const Matrix& v : values) {
        require(v.same_shape(values.front()), ErrorKind::InvalidInput,
                "interpolation samples must share a shape");
    }
    const size_t r = values.front().rows();
    const size_t c = values.front().cols();
    const Matrix v = vandermonde(points, m);
    Matrix rhs(m, r * c, Field::Complex);
    for (size_t i = 0; i < m; ++i)
        for (size_t e = 0; e < r * c; ++e) rhs.at(i, e) = values[i].data()[e];
    const Matrix sol = solve_lu(v, rhs);
    std::vector<Matrix> coeffs;
    coeffs.reserve(m);
    for (size_t t = 0; t < m; ++t) {
        Matrix coeff(r, c, Field::Complex);
        for (size_t e = 0; e < r * c; ++e) coeff.mutable_data()[e] = sol.at(t, e);
        coeffs.push_back(std::move(coeff));
    }
    return coeffs;
}

std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> coeffs{Complex(1.0, 0.0)};
    for (const Complex& root : roots) {
        std::vector<Complex> next(coeffs.size() + 1, Complex(0.0, 0.0));
        for (size_t i = 0; i < coeffs.size(); ++i) {
            next[i] -= root * coeffs[i];
            next[i + 1] += coeffs[i];
        }
        coeffs = std::move(next);
    }
    return coeffs;
}

Complex poly_eval(const std::vector<Complex>& coeffs, Complex x) {
    Complex acc(0.0, 0.0);
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

}  // namespace codedlab
