use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::AbelianError;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, AbelianError> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(AbelianError::DimensionMismatch {
                    expected: ncols,
                    found: r.len(),
                    context: format!("row {i}"),
                });
            }
            data.extend(r.iter().cloned().map(Into::into));
        }
        Ok(Self { rows: rows.len(), cols: ncols, data })
    }

    /// Builds a `rank x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rank: usize, columns: &[Vec<BigInt>]) -> Result<Self, AbelianError> {
        let mut m = Self::zeros(rank, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rank {
                return Err(AbelianError::DimensionMismatch {
                    expected: rank,
                    found: c.len(),
                    context: format!("relation {j}"),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Parses the `rows cols` header followed by row-major entries.
    pub fn parse(text: &str) -> Result<Self, AbelianError> {
        let mut tokens = text.split_whitespace();
        let mut next_usize = |what: &str| -> Result<usize, AbelianError> {
            let tok = tokens.next().ok_or_else(|| AbelianError::Parse(format!("missing {what}")))?;
            tok.parse().map_err(|_| AbelianError::Parse(format!("bad {what}: {tok:?}")))
        };
        let rows = next_usize("row count")?;
        let cols = next_usize("column count")?;
        let mut data = Vec::with_capacity(rows * cols);
        for tok in tokens {
            let x: BigInt = tok.parse().map_err(|_| AbelianError::Parse(format!("bad entry: {tok:?}")))?;
            data.push(x);
        }
        if data.len() != rows * cols {
            return Err(AbelianError::Parse(format!(
                "expected {} entries for a {rows}x{cols} matrix, found {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let m = IntMatrix::parse("2 3\n1 2 3\n-4 5 6\n").unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.get(1, 0), &BigInt::from(-4));
        assert_eq!(m.to_string(), "2 3\n1 2 3\n-4 5 6\n");
        assert!(IntMatrix::parse("2 2\n1 2 3").is_err());
        assert!(IntMatrix::parse("x 2").is_err());
    }

    #[test]
    fn product_with_identity() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        assert_eq!(&m * &IntMatrix::identity(2), m);
        assert_eq!(&IntMatrix::identity(3) * &m, m);
        assert_eq!(m.transpose().transpose(), m);
    }
}
