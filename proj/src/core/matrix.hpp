#ifndef CODEDLAB_CORE_MATRIX_HPP
#define CODEDLAB_CORE_MATRIX_HPP

#include <complex>
#include <initializer_list>
#include <vector>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace codedlab {

using Complex = std::complex<double>;

enum class Field { Real, Complex };

// Dense rectangular matrix over R or C. Storage is always complex; the field
// tag records whether the value is semantically real. Entries are checked
// finite on construction.
class Matrix {
  public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols, Field field = Field::Real)
        : rows_(rows), cols_(cols), field_(field), data_(rows * cols, Complex(0.0, 0.0)) {}

    static Matrix from_real(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix from_complex(std::initializer_list<std::initializer_list<Complex>> rows);
    static Matrix identity(size_t n);
    static Matrix ones(size_t rows, size_t cols);
    static Matrix random_gaussian(size_t rows, size_t cols, Rng& rng);
    static Matrix column(const std::vector<double>& values);
    static Matrix row(const std::vector<double>& values);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t size() const { return data_.size(); }
    Field field() const { return field_; }
    bool is_real() const { return field_ == Field::Real; }

    Complex& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const Complex& at(size_t r, size_t c) const { return data_[r * cols_ + c]; }
    Complex operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& mutable_data() { return data_; }

    // Marks the matrix complex-valued; used by builders that write complex
    // entries through at().
    void set_field(Field f) { field_ = f; }

    void validate_finite() const;

    Matrix block(size_t r0, size_t c0, size_t nrows, size_t ncols) const;
    Matrix row_block(size_t index, size_t count, size_t block_rows) const;
    Matrix transpose() const;
    Matrix adjoint() const;
    Matrix conjugate() const;

    Matrix operator+(const Matrix& other) const;
    Matrix operator-(const Matrix& other) const;
    Matrix operator*(const Matrix& other) const;
    Matrix operator*(Complex scalar) const;
    Matrix operator*(double scalar) const;
    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(Complex scalar);

    double frobenius_norm() const;
    double max_abs() const;
    double col_norm(size_t c) const;
    double row_norm(size_t r) const;
    Complex trace() const;

    // Drops imaginary parts when they are below `rel_tol` relative to the
    // Frobenius norm; errors otherwise. Used to pull real results back out of
    // complex decoding arithmetic.
    Matrix to_real_checked(double rel_tol = 1e-8) const;
    Matrix real_part() const;
    double imag_norm() const;

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

  private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    Field field_ = Field::Real;
    std::vector<Complex> data_;
};

Matrix operator*(double scalar, const Matrix& m);

Matrix hcat(const std::vector<Matrix>& blocks);
Matrix vcat(const std::vector<Matrix>& blocks);
std::vector<Matrix> split_cols(const Matrix& m, size_t k);
std::vector<Matrix> split_rows(const Matrix& m, size_t k);

// The two block layouts used throughout: InnerDim splits the contracted
// dimension of a product (A by columns, B by rows); OuterDim splits the
// output dimensions (A by rows, B by columns).
enum class SplitScheme { InnerDim, OuterDim };
enum class Operand { Left, Right };

struct BlockPartition {
    size_t k;
    SplitScheme scheme;

    std::vector<Matrix> apply(const Matrix& m, Operand operand) const;
    static Matrix reassemble(const std::vector<Matrix>& blocks, SplitScheme scheme,
                             Operand operand);
};

std::vector<Matrix> partition(const Matrix& m, size_t k, SplitScheme scheme, Operand operand);

// Ordered distinct nonzero complex evaluation points.
struct EvalPoints {
    std::vector<Complex> points;

    EvalPoints() = default;
    explicit EvalPoints(std::vector<Complex> pts);
    size_t size() const { return points.size(); }
    Complex operator[](size_t i) const { return points[i]; }
    EvalPoints subset(const std::vector<size_t>& indices) const;
};

// gamma_j = exp(2*pi*i*j/n) for j = 1..n (so the list ends at 1).
EvalPoints roots_of_unity(size_t n);

// n x k matrix with entry (i,j) = gamma_i^j (0-based j).
Matrix vandermonde(const EvalPoints& points, size_t k);

// Vector a with a^T V = e_1^T for V the square Vandermonde on `points`.
std::vector<Complex> decoding_row(const EvalPoints& points);

// Coefficients (ascending) of the unique degree <= m-1 matrix polynomial
// through the m samples.
std::vector<Matrix> lagrange_interpolate(const EvalPoints& points,
                                         const std::vector<Matrix>& values);

// Scalar-polynomial helpers (coefficients ascending).
std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots);
Complex poly_eval(const std::vector<Complex>& coeffs, Complex x);

}  // namespace codedlab

#endif
