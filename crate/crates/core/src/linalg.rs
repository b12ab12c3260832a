//! Exact rational linear algebra: dense matrices over Q with reduced row
//! echelon form, kernel bases and linear solving. Every operation is exact;
//! no floating point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator. `Display` prints `p/q`, or just `p` when `q = 1`,
/// which is the serialization format used throughout.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `p/q`. Panics if `q = 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses the `p/q` (or `p`) string format.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| Error::Parse(format!("bad rational `{s}`: {e}")))
}

pub fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Outcome of solving a linear system with matching dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solve {
    /// A particular solution (free variables set to zero).
    Solution(Vec<Rational>),
    /// The system has no solution.
    Inconsistent,
}

/// Dense row-major matrix over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(QMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
        }
        Ok(QMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&n| rat(n)).collect()).collect())
            .expect("ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.get_mut(j, i) = self.get(i, j).clone();
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.cols });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        QMatrix::new(self.rows + other.rows, self.cols, entries)
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: other.rows });
        }
        let mut m = QMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *m.get_mut(i, j) = self.get(i, j).clone();
            }
            for j in 0..other.cols {
                *m.get_mut(i, self.cols + j) = other.get(i, j).clone();
            }
        }
        Ok(m)
    }

    pub fn matmul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut m = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.get(k, j);
                    *m.get_mut(i, j) += prod;
                }
            }
        }
        Ok(m)
    }

    pub fn matvec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// The integer a row entry becomes after the whole row is scaled by the
    /// lcm of its denominators. Used for pivot selection only; rref output
    /// is unique regardless of the pivot strategy.
    fn cleared_magnitude(&self, i: usize, j: usize) -> BigInt {
        let mut l = BigInt::one();
        for e in self.row(i) {
            l = l.lcm(e.denom());
        }
        let e = self.get(i, j);
        (e.numer() * (&l / e.denom())).abs()
    }

    /// Reduced row echelon form together with the rank. Pivots are chosen as
    /// the candidate with the largest cleared-denominator integer magnitude.
    pub fn rref(&self) -> (QMatrix, usize) {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let pivot = (pivot_row..m.rows)
                .filter(|&r| !m.get(r, col).is_zero())
                .max_by(|&r, &s| {
                    m.cleared_magnitude(r, col)
                        .cmp(&m.cleared_magnitude(s, col))
                        // prefer the earlier row on ties
                        .then(s.cmp(&r))
                });
            let Some(p) = pivot else { continue };
            m.swap_rows(pivot_row, p);
            let inv = m.get(pivot_row, col).recip();
            m.scale_row(pivot_row, &inv);
            for r in 0..m.rows {
                if r != pivot_row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    m.sub_scaled_row(r, pivot_row, &factor);
                }
            }
            pivot_row += 1;
        }
        (m, pivot_row)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, factor: &Rational) {
        for j in 0..self.cols {
            let v = self.get(i, j) * factor;
            *self.get_mut(i, j) = v;
        }
    }

    /// row_r -= factor * row_p
    fn sub_scaled_row(&mut self, r: usize, p: usize, factor: &Rational) {
        for j in 0..self.cols {
            let v = self.get(r, j) - factor * self.get(p, j);
            *self.get_mut(r, j) = v;
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Pivot column indices of an rref matrix (leading 1 per nonzero row).
    fn pivot_columns(rref: &QMatrix, rank: usize) -> Vec<usize> {
        let mut pivots = Vec::with_capacity(rank);
        for i in 0..rank {
            let j = (0..rref.cols)
                .find(|&j| !rref.get(i, j).is_zero())
                .expect("nonzero row in rref up to rank");
            pivots.push(j);
        }
        pivots
    }

    /// Basis of the right null space in RREF-derived canonical form: one
    /// vector per free column in ascending index, with 1 in the free slot and
    /// the negated rref coefficients in the pivot slots.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, rank) = self.rref();
        let pivots = Self::pivot_columns(&r, rank);
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::with_capacity(self.cols - rank);
        for free in (0..self.cols).filter(|j| !pivot_set.contains(j)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(i, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * x = b` exactly. `Solve::Inconsistent` is a result, not
    /// an error; a length mismatch of `b` is an error.
    pub fn solve(&self, b: &[Rational]) -> Result<Solve> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let rhs = QMatrix::new(self.rows, 1, b.to_vec())?;
        let aug = self.hstack(&rhs)?;
        let (r, rank) = aug.rref();
        let pivots = Self::pivot_columns(&r, rank);
        if pivots.iter().any(|&j| j == self.cols) {
            return Ok(Solve::Inconsistent);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols).clone();
        }
        Ok(Solve::Solution(x))
    }

    /// Determinant of a square matrix by exact Gaussian elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..m.cols {
            let Some(p) = (col..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                m.swap_rows(col, p);
                det = -det;
            }
            det *= m.get(col, col);
            let inv = m.get(col, col).recip();
            m.scale_row(col, &inv);
            for r in col + 1..m.rows {
                if !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    m.sub_scaled_row(r, col, &factor);
                }
            }
        }
        Ok(det)
    }

    /// JSON value: array of row arrays of `p/q` strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| {
                    serde_json::Value::Array(
                        self.row(i)
                            .iter()
                            .map(|e| serde_json::Value::String(e.to_string()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<QMatrix> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("matrix JSON must be an array of rows".into()))?;
        let mut rows = Vec::with_capacity(arr.len());
        for row in arr {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            let mut out = Vec::with_capacity(row.len());
            for e in row {
                let s = e
                    .as_str()
                    .ok_or_else(|| Error::Parse("matrix entry must be a string".into()))?;
                out.push(parse_rational(s)?);
            }
            rows.push(out);
        }
        QMatrix::from_rows(rows)
    }
}

impl std::fmt::Display for QMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rref_identity() {
        let m = QMatrix::identity(3);
        let (r, rank) = m.rref();
        assert_eq!(r, QMatrix::identity(3));
        assert_eq!(rank, 3);
    }

    #[test]
    fn rref_zero() {
        let m = QMatrix::zeros(2, 2);
        let (r, rank) = m.rref();
        assert_eq!(r, QMatrix::zeros(2, 2));
        assert_eq!(rank, 0);
    }

    #[test]
    fn rref_rank_one() {
        let m = QMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        let (r, rank) = m.rref();
        assert_eq!(r, QMatrix::from_i64_rows(&[&[1, 2], &[0, 0]]));
        assert_eq!(rank, 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(QMatrix::identity(4).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_zero_is_full() {
        let basis = QMatrix::zeros(2, 2).kernel_basis();
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn kernel_of_row_sums() {
        let m = QMatrix::from_i64_rows(&[&[1, 1]]);
        let basis = m.kernel_basis();
        assert_eq!(basis, vec![vec![rat(-1), rat(1)]]);
    }

    #[test]
    fn solve_identity() {
        let b = vec![rat(3), ratio(1, 2)];
        match QMatrix::identity(2).solve(&b).unwrap() {
            Solve::Solution(x) => assert_eq!(x, b),
            Solve::Inconsistent => panic!("identity is consistent"),
        }
    }

    #[test]
    fn solve_underdetermined() {
        let m = QMatrix::from_i64_rows(&[&[1, 1]]);
        match m.solve(&[rat(2)]).unwrap() {
            Solve::Solution(x) => {
                assert_eq!(&x[0] + &x[1], rat(2));
            }
            Solve::Inconsistent => panic!("underdetermined system is consistent"),
        }
    }

    #[test]
    fn solve_inconsistent() {
        let m = QMatrix::from_i64_rows(&[&[1], &[1]]);
        assert_eq!(m.solve(&[rat(0), rat(1)]).unwrap(), Solve::Inconsistent);
    }

    #[test]
    fn solve_dimension_mismatch_is_an_error() {
        let m = QMatrix::from_i64_rows(&[&[1], &[1]]);
        assert!(m.solve(&[rat(0)]).is_err());
    }

    #[test]
    fn determinant_small() {
        let m = QMatrix::from_i64_rows(&[&[2, -1], &[1, 0]]);
        assert_eq!(m.determinant().unwrap(), rat(1));
        let s = QMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]);
        assert_eq!(s.determinant().unwrap(), rat(1));
        let z = QMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(z.determinant().unwrap(), rat(0));
    }

    #[test]
    fn rational_format_round_trip() {
        assert_eq!(ratio(-4, 6).to_string(), "-2/3");
        assert_eq!(rat(5).to_string(), "5");
        assert_eq!(parse_rational("-2/3").unwrap(), ratio(2, -3));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
    }

    fn small_matrix() -> impl Strategy<Value = QMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-6i64..7, 1i64..5), r * c)
                .prop_map(move |vals| {
                    QMatrix::new(r, c, vals.into_iter().map(|(p, q)| ratio(p, q)).collect())
                        .unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn rank_equals_rank_of_transpose(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn kernel_vectors_are_exact_and_independent(m in small_matrix()) {
            let basis = m.kernel_basis();
            prop_assert_eq!(basis.len(), m.cols() - m.rank());
            for v in &basis {
                prop_assert!(is_zero_vec(&m.matvec(v).unwrap()));
            }
            if !basis.is_empty() {
                let stacked = QMatrix::from_rows(basis.clone()).unwrap();
                prop_assert_eq!(stacked.rank(), basis.len());
            }
        }

        #[test]
        fn rref_is_idempotent(m in small_matrix()) {
            let (r, _) = m.rref();
            let (rr, _) = r.rref();
            prop_assert_eq!(r, rr);
        }

        #[test]
        fn exact_inverse_multiplication(p in -30i64..30, q in 1i64..30) {
            prop_assume!(p != 0);
            let x = ratio(p, q);
            prop_assert_eq!(&x * x.recip(), rat(1));
        }

        #[test]
        fn solve_result_satisfies_system(m in small_matrix(), seed in proptest::collection::vec(-5i64..6, 1..5)) {
            // build a consistent rhs from a known vector when sizes allow
            let x0: Vec<Rational> = (0..m.cols()).map(|i| rat(*seed.get(i % seed.len()).unwrap())).collect();
            let b = m.matvec(&x0).unwrap();
            match m.solve(&b).unwrap() {
                Solve::Solution(x) => prop_assert_eq!(m.matvec(&x).unwrap(), b),
                Solve::Inconsistent => prop_assert!(false, "constructed system must be consistent"),
            }
        }
    }
}
