//! Dense exact rational matrices with the direct sum and Kronecker product,
//! plus the 4x4 orthogonal embedding of quaternions and the composite word
//! encoding built on it.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::exactnum::Rational;
use crate::quaternion::{gamma2, QuatRat};
use crate::words::{gamma1, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixError {
    /// Operand shapes are incompatible for `op`.
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// A matrix needs at least one row and one column.
    Empty,
    /// Entry count does not match `rows * cols`, or rows have unequal length.
    Ragged,
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::DimensionMismatch { op, left, right } => write!(
                f,
                "{op}: incompatible shapes {}x{} and {}x{}",
                left.0, left.1, right.0, right.1
            ),
            MatrixError::Empty => f.write_str("matrix with zero rows or columns"),
            MatrixError::Ragged => f.write_str("entry count does not match the shape"),
        }
    }
}

impl core::error::Error for MatrixError {}

/// Row-major dense matrix over the rationals. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::Ragged);
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Ragged);
        }
        RatMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Panics if either dimension is zero.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        RatMatrix::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn scalar(c: Rational) -> Self {
        RatMatrix { rows: 1, cols: 1, entries: vec![c] }
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let n = diag.len();
        RatMatrix::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else { Rational::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// `self * v` for a column vector `v`. Zero entries are skipped, which
    /// matters for the sparse block matrices built from Kronecker powers.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::DimensionMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    /// `M M^T = I` exactly.
    pub fn is_orthogonal(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        for i in 0..n {
            for j in i..n {
                let dot: Rational = self
                    .row(i)
                    .iter()
                    .zip(self.row(j))
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum();
                let want = i == j;
                if (want && !dot.is_one()) || (!want && !dot.is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_idempotent(&self) -> bool {
        matmul(self, self).is_ok_and(|sq| &sq == self)
    }
}

pub fn matmul(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix, MatrixError> {
    if a.cols != b.rows {
        return Err(MatrixError::DimensionMismatch { op: "matmul", left: a.shape(), right: b.shape() });
    }
    let mut out = RatMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let y = b.get(k, j);
                if !y.is_zero() {
                    out.entries[i * b.cols + j] += &(x * y);
                }
            }
        }
    }
    Ok(out)
}

/// Direct sum: `a` in the top-left block, `b` in the bottom-right, zeros
/// elsewhere.
pub fn dsum(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    block_diagonal(&[a, b])
}

/// Block-diagonal matrix of all `blocks`, built in one pass. Panics on an
/// empty slice.
pub fn block_diagonal(blocks: &[&RatMatrix]) -> RatMatrix {
    assert!(!blocks.is_empty(), "block_diagonal needs at least one block");
    let rows = blocks.iter().map(|m| m.rows).sum();
    let cols = blocks.iter().map(|m| m.cols).sum();
    let mut out = RatMatrix::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for m in blocks {
        for i in 0..m.rows {
            for j in 0..m.cols {
                out.entries[(r0 + i) * cols + c0 + j] = m.get(i, j).clone();
            }
        }
        r0 += m.rows;
        c0 += m.cols;
    }
    out
}

/// Kronecker product: the block matrix whose `(i, j)` block is `a[i][j] * b`.
pub fn kron(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let (rows, cols) = (a.rows * b.rows, a.cols * b.cols);
    let mut out = RatMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    let y = b.get(k, l);
                    if !y.is_zero() {
                        out.entries[(i * b.rows + k) * cols + j * b.cols + l] = x * y;
                    }
                }
            }
        }
    }
    out
}

/// `m ⊗ m ⊗ ... ⊗ m` with `power` factors; the zeroth power is `[1]`.
pub fn kron_power(m: &RatMatrix, power: u32) -> RatMatrix {
    (0..power).fold(RatMatrix::scalar(Rational::one()), |acc, _| kron(&acc, m))
}

/// The 4x4 real form of `r + x i + y j + z k`:
///
/// ```text
///  r  x  y  z
/// -x  r  z -y
/// -y -z  r  x
/// -z  y -x  r
/// ```
pub fn gamma3(q: &QuatRat) -> RatMatrix {
    let (r, x, y, z) = (&q.a, &q.b, &q.c, &q.d);
    let rows = vec![
        vec![r.clone(), x.clone(), y.clone(), z.clone()],
        vec![-x, r.clone(), z.clone(), -y],
        vec![-y, -z, r.clone(), x.clone()],
        vec![-z, y.clone(), -x, r.clone()],
    ];
    RatMatrix::from_rows(rows).expect("4x4 literal")
}

/// The orthogonal matrix encoding a word over `x1..xn`.
pub fn gamma(w: &Word) -> RatMatrix {
    gamma3(&gamma2(&gamma1(w)))
}

/// Quaternion image of a word, i.e. the top row of [`gamma`].
pub fn gamma_quat(w: &Word) -> QuatRat {
    gamma2(&gamma1(w))
}

pub fn generator_a() -> RatMatrix {
    gamma3(&QuatRat::generator(crate::words::Gen::A))
}

pub fn generator_b() -> RatMatrix {
    gamma3(&QuatRat::generator(crate::words::Gen::B))
}

/// Absolute values of the first three top-row entries of a 4x4 word image.
/// Together with the unit norm they determine the image uniquely.
pub fn abs_key(m: &RatMatrix) -> [Rational; 3] {
    [m.get(0, 0).abs(), m.get(0, 1).abs(), m.get(0, 2).abs()]
}
