//! Dense matrices of arbitrary-precision signed integers.
//!
//! All arithmetic is exact. Matrices in this crate are small (typically at
//! most 10x10) so the representation is a plain row-major `Vec<BigInt>`.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Entry type used throughout the crate.
pub type Int = BigInt;

/// Sign of an exactly computed determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(value: &Int) -> Sign {
        match value.sign() {
            num_bigint::Sign::Minus => Sign::Negative,
            num_bigint::Sign::NoSign => Sign::Zero,
            num_bigint::Sign::Plus => Sign::Positive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Negative => "-1",
            Sign::Zero => "0",
            Sign::Positive => "+1",
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        match s.as_str() {
            "-1" => Ok(Sign::Negative),
            "0" => Ok(Sign::Zero),
            "+1" | "1" => Ok(Sign::Positive),
            other => Err(D::Error::custom(format!("invalid sign token {other:?}"))),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix is {rows}x{cols} but a square matrix is required")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry buffer has length {got}, expected {rows} x {cols} = {expected}")]
    BadShape {
        rows: usize,
        cols: usize,
        got: usize,
        expected: usize,
    },
    #[error("matrices must have at least one row and one column")]
    Empty,
}

/// Parse failure for the plain-text matrix format, with 1-based position.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct MatrixParseError {
    pub line: usize,
    pub column: usize,
    pub kind: MatrixParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixParseErrorKind {
    #[error("malformed header, expected `rows cols`")]
    MalformedHeader,
    #[error("header dimensions must be at least 1")]
    ZeroDimension,
    #[error("non-integer token {token:?}")]
    BadToken { token: String },
    #[error("wrong entry count: row has {got} entries, expected {expected}")]
    WrongEntryCount { got: usize, expected: usize },
    #[error("missing data: expected {expected} rows, found {got}")]
    MissingRows { expected: usize, got: usize },
    #[error("trailing data after the last row")]
    TrailingData,
}

/// Dense row-major matrix over `BigInt` with explicit shape.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Int>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::BadShape {
                rows,
                cols,
                got: entries.len(),
                expected: rows * cols,
            });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Convenience constructor from machine integers; panics on a ragged or
    /// empty row set. Intended for literals in code and tests.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        assert!(!rows.is_empty(), "matrix needs at least one row");
        let cols = rows[0].len();
        assert!(cols > 0, "matrix needs at least one column");
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row in matrix literal");
            entries.extend(row.iter().map(|&v| Int::from(v)));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix::from_fn(rows, cols, |_, _| Int::zero())
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::from_fn(n, n, |i, j| if i == j { Int::one() } else { Int::zero() })
    }

    /// The all-ones column vector of length `n` (the order unit `[1,...,1]^t`).
    pub fn ones_column(n: usize) -> Self {
        IntMatrix::from_fn(n, 1, |_, _| Int::one())
    }

    pub fn scalar(value: i64) -> Self {
        IntMatrix::from_rows(&[&[value]])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Size |A| of a square matrix.
    pub fn size(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Int) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[Int] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }

    pub fn is_zero_one(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero() || e.is_one())
    }

    pub fn has_zero_row(&self) -> bool {
        (0..self.rows).any(|i| self.row(i).iter().all(Zero::is_zero))
    }

    pub fn has_zero_col(&self) -> bool {
        (0..self.cols).any(|j| (0..self.rows).all(|i| self.get(i, j).is_zero()))
    }

    pub fn checked_add(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other));
        }
        Ok(IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) + other.get(i, j)
        }))
    }

    pub fn checked_sub(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other));
        }
        Ok(IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) - other.get(i, j)
        }))
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn scale(&self, by: &Int) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * by)
    }

    fn mismatch(&self, other: &IntMatrix) -> MatrixError {
        MatrixError::DimensionMismatch {
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    /// Exact matrix product; errors when the inner dimensions disagree.
    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(self.mismatch(other));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Exact power by repeated squaring; `A^0 = I`. Errors on non-square input.
    pub fn checked_pow(&self, n: usize) -> Result<IntMatrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut result = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Int, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m: Vec<Vec<Int>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = 1i64;
        let mut prev = Int::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    // Bareiss update: the division by the previous pivot is exact.
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
                m[i][k] = Int::zero();
            }
            prev = m[k][k].clone();
        }
        Ok(m[n - 1][n - 1].clone() * sign)
    }

    /// Sign of the determinant, computed exactly.
    pub fn det_sign(&self) -> Result<Sign, MatrixError> {
        Ok(Sign::of(&self.det()?))
    }

    /// Sum of all entries.
    pub fn entry_sum(&self) -> Int {
        self.entries.iter().sum()
    }

    /// Submatrix on the given row and column index sets (in the given order).
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(row_idx.len(), col_idx.len(), |i, j| {
            self.get(row_idx[i], col_idx[j]).clone()
        })
    }

    /// Assemble a 2x2 block matrix `[[a, b], [c, d]]`.
    pub fn block2x2(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> IntMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        IntMatrix::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| {
            match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j).clone(),
                (true, false) => b.get(i, j - a.cols).clone(),
                (false, true) => c.get(i - a.rows, j).clone(),
                (false, false) => d.get(i - a.rows, j - a.cols).clone(),
            }
        })
    }

    /// `P^t M P` for the permutation `perm`, where `perm[i]` is the image of
    /// index `i`; entry `(perm[i], perm[j])` of the result is `M(i, j)`.
    pub fn conjugate_by_perm(&self, perm: &[usize]) -> IntMatrix {
        debug_assert!(self.is_square());
        debug_assert_eq!(perm.len(), self.rows);
        let mut out = IntMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(perm[i], perm[j], self.get(i, j).clone());
            }
        }
        out
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        self.get(i, j)
    }
}

impl std::ops::Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({}x{}) ", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i).iter().map(|e| e.to_string()).collect::<Vec<_>>()))
            .finish()
    }
}

/// Plain-text format: optional `#` comment lines, a `rows cols` header line,
/// then one line of base-10 integers per row.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Parse the plain-text matrix format. Errors carry 1-based line/column.
pub fn parse_matrix(text: &str) -> Result<IntMatrix, MatrixParseError> {
    let mut data_lines = text
        .lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line))
        .filter(|(_, line)| {
            let t = line.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });

    let (header_no, header) = data_lines.next().ok_or(MatrixParseError {
        line: 1,
        column: 1,
        kind: MatrixParseErrorKind::MalformedHeader,
    })?;
    let head_tokens: Vec<&str> = header.split_whitespace().collect();
    if head_tokens.len() != 2 {
        return Err(MatrixParseError {
            line: header_no,
            column: 1,
            kind: MatrixParseErrorKind::MalformedHeader,
        });
    }
    let rows: usize = head_tokens[0].parse().map_err(|_| MatrixParseError {
        line: header_no,
        column: column_of(header, 0),
        kind: MatrixParseErrorKind::MalformedHeader,
    })?;
    let cols: usize = head_tokens[1].parse().map_err(|_| MatrixParseError {
        line: header_no,
        column: column_of(header, 1),
        kind: MatrixParseErrorKind::MalformedHeader,
    })?;
    if rows == 0 || cols == 0 {
        return Err(MatrixParseError {
            line: header_no,
            column: 1,
            kind: MatrixParseErrorKind::ZeroDimension,
        });
    }

    let mut entries = Vec::with_capacity(rows * cols);
    let mut rows_read = 0usize;
    let mut last_line = header_no;
    for (line_no, line) in data_lines {
        if rows_read == rows {
            return Err(MatrixParseError {
                line: line_no,
                column: 1,
                kind: MatrixParseErrorKind::TrailingData,
            });
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != cols {
            return Err(MatrixParseError {
                line: line_no,
                column: 1,
                kind: MatrixParseErrorKind::WrongEntryCount {
                    got: tokens.len(),
                    expected: cols,
                },
            });
        }
        for (tok_idx, token) in tokens.iter().enumerate() {
            let value = Int::from_str(token).map_err(|_| MatrixParseError {
                line: line_no,
                column: column_of(line, tok_idx),
                kind: MatrixParseErrorKind::BadToken {
                    token: (*token).to_string(),
                },
            })?;
            entries.push(value);
        }
        rows_read += 1;
        last_line = line_no;
    }
    if rows_read != rows {
        return Err(MatrixParseError {
            line: last_line,
            column: 1,
            kind: MatrixParseErrorKind::MissingRows {
                expected: rows,
                got: rows_read,
            },
        });
    }
    Ok(IntMatrix { rows, cols, entries })
}

fn column_of(line: &str, token_index: usize) -> usize {
    let mut count = 0usize;
    let bytes = line.as_bytes();
    let mut i = 0usize;
    while i < bytes.len() {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            break;
        }
        if count == token_index {
            return i + 1;
        }
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        count += 1;
    }
    1
}

// JSON: a matrix is an array of rows of integers. Entries round-trip exactly
// at any magnitude via serde_json's arbitrary-precision numbers.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<serde_json::Number> = self
                .row(i)
                .iter()
                .map(|e| {
                    serde_json::Number::from_str(&e.to_string())
                        .expect("integer is a valid JSON number")
                })
                .collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<Vec<serde_json::Number>> = Vec::deserialize(deserializer)?;
        if raw.is_empty() || raw[0].is_empty() {
            return Err(D::Error::custom("matrix must be a nonempty array of rows"));
        }
        let cols = raw[0].len();
        let mut entries = Vec::with_capacity(raw.len() * cols);
        for row in &raw {
            if row.len() != cols {
                return Err(D::Error::custom("ragged matrix rows"));
            }
            for num in row {
                entries.push(json_number_to_int::<D>(num)?);
            }
        }
        Ok(IntMatrix {
            rows: raw.len(),
            cols,
            entries,
        })
    }
}

pub(crate) fn json_number_to_int<'de, D: Deserializer<'de>>(
    num: &serde_json::Number,
) -> Result<Int, D::Error> {
    let text = num.to_string();
    Int::from_str(&text)
        .map_err(|_| D::Error::custom(format!("entry {text} is not an integer")))
}

pub(crate) fn int_to_json_number(value: &Int) -> serde_json::Number {
    serde_json::Number::from_str(&value.to_string()).expect("integer is a valid JSON number")
}

/// Serde adapter for a single `Int` field.
pub mod int_serde {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Int, serializer: S) -> Result<S::Ok, S::Error> {
        int_to_json_number(value).serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Int, D::Error> {
        let raw = serde_json::Number::deserialize(deserializer)?;
        json_number_to_int::<D>(&raw)
    }
}

/// Serde adapter for `Vec<Vec<Int>>` fields.
pub mod int_vec_vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(
        values: &[Vec<Int>],
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for row in values {
            let row: Vec<serde_json::Number> = row.iter().map(int_to_json_number).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// Serde adapter for `Vec<Int>` fields.
pub mod int_vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Int], serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&int_to_json_number(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Int>, D::Error> {
        let raw: Vec<serde_json::Number> = Vec::deserialize(deserializer)?;
        raw.iter().map(|n| json_number_to_int::<D>(n)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_from_outsplit_factors() {
        let d = IntMatrix::from_rows(&[&[1, 1]]);
        let e = IntMatrix::from_rows(&[&[1], &[1]]);
        assert_eq!(d.checked_mul(&e).unwrap(), IntMatrix::scalar(2));
    }

    #[test]
    fn identity_is_neutral() {
        let m = IntMatrix::from_rows(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let i = IntMatrix::identity(3);
        assert_eq!(i.checked_mul(&m).unwrap(), m);
        assert_eq!(m.checked_mul(&i).unwrap(), m);
    }

    #[test]
    fn schoolbook_product() {
        let m = IntMatrix::from_rows(&[&[1, 2], &[1, 1]]);
        let expected = IntMatrix::from_rows(&[&[3, 4], &[2, 3]]);
        assert_eq!(m.checked_mul(&m).unwrap(), expected);
    }

    #[test]
    fn mul_dimension_mismatch() {
        let a = IntMatrix::from_rows(&[&[1, 2]]);
        let b = IntMatrix::from_rows(&[&[1, 2]]);
        assert!(matches!(
            a.checked_mul(&b),
            Err(MatrixError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn power_examples() {
        assert_eq!(
            IntMatrix::scalar(2).checked_pow(5).unwrap(),
            IntMatrix::scalar(32)
        );
        let a1 = IntMatrix::from_rows(&[&[2, 0, 4], &[1, 2, 0], &[1, 2, 0]]);
        let sq = IntMatrix::from_rows(&[&[8, 8, 8], &[4, 4, 4], &[4, 4, 4]]);
        assert_eq!(a1.checked_pow(2).unwrap(), sq);
        let b3 = IntMatrix::from_rows(&[&[1, 6], &[1, 1]]);
        let b3sq = IntMatrix::from_rows(&[&[7, 12], &[2, 7]]);
        assert_eq!(b3.checked_pow(2).unwrap(), b3sq);
        assert_eq!(b3.checked_pow(0).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn pow_rejects_rectangular() {
        let m = IntMatrix::from_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        assert!(matches!(m.checked_pow(2), Err(MatrixError::NotSquare { .. })));
    }

    #[test]
    fn determinant_signs() {
        // I - (2)^t = (-1)
        let m = IntMatrix::scalar(-1);
        assert_eq!(m.det_sign().unwrap(), Sign::Negative);
        // I - [[1,1],[1,1]]^t
        let m = IntMatrix::from_rows(&[&[0, -1], &[-1, 0]]);
        assert_eq!(m.det().unwrap(), Int::from(-1));
        assert_eq!(m.det_sign().unwrap(), Sign::Negative);
        assert_eq!(IntMatrix::scalar(0).det_sign().unwrap(), Sign::Zero);
    }

    #[test]
    fn bareiss_matches_known_determinants() {
        let m = IntMatrix::from_rows(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        assert_eq!(m.det().unwrap(), Int::from(4));
        let m = IntMatrix::from_rows(&[&[0, 2, 2], &[1, 0, 0], &[1, 0, 0]]);
        assert_eq!(m.det().unwrap(), Int::from(0));
    }

    #[test]
    fn parse_round_trip_smoke() {
        let m = parse_matrix("1 1\n2\n").unwrap();
        assert_eq!(m, IntMatrix::scalar(2));
        let m = parse_matrix("2 2\n1 1\n1 1\n").unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[&[1, 1], &[1, 1]]));
        let m = parse_matrix("# comment\n2 2\n1 -3\n0 7\n").unwrap();
        let again = parse_matrix(&m.to_string()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn parse_wrong_entry_count() {
        let err = parse_matrix("2 2\n1\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(
            err.kind,
            MatrixParseErrorKind::WrongEntryCount { got: 1, expected: 2 }
        ));
    }

    #[test]
    fn parse_bad_token_position() {
        let err = parse_matrix("1 3\n4 x7 9\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.column, 3);
        assert!(matches!(err.kind, MatrixParseErrorKind::BadToken { .. }));
    }

    #[test]
    fn parse_missing_rows() {
        let err = parse_matrix("3 1\n1\n2\n").unwrap_err();
        assert!(matches!(
            err.kind,
            MatrixParseErrorKind::MissingRows { expected: 3, got: 2 }
        ));
    }

    #[test]
    fn json_round_trip_preserves_big_entries() {
        let huge = Int::from_str("123456789012345678901234567890123456789").unwrap();
        let m = IntMatrix::new(1, 2, vec![huge.clone(), -huge]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        let back: IntMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn json_rejects_fractions() {
        let r: Result<IntMatrix, _> = serde_json::from_str("[[1.5]]");
        assert!(r.is_err());
    }

    #[test]
    fn conjugation_by_transposition() {
        let a = IntMatrix::from_rows(&[&[0, 1], &[2, 0]]);
        let b = IntMatrix::from_rows(&[&[0, 2], &[1, 0]]);
        assert_eq!(a.conjugate_by_perm(&[1, 0]), b);
    }
}
