//! Dense matrices over the polynomial ring, with exact determinants.
//!
//! Determinants use the Berkowitz algorithm: division-free, O(n^4) ring
//! operations, so it works verbatim over polynomials where Gaussian
//! elimination would need rational functions. A naive cofactor expansion
//! is kept alongside as an independent cross-check for small matrices.

use crate::ring::Poly;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("cannot multiply {left_rows}x{left_cols} by {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        got: usize,
        expected: usize,
    },
}

/// A row-major matrix of polynomials, optionally carrying row and column
/// labels (vertex names, when the matrix comes from a graph).
#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl RingMatrix {
    /// The `rows` x `cols` zero matrix.
    pub fn zero(rows: usize, cols: usize) -> RingMatrix {
        RingMatrix {
            rows,
            cols,
            data: vec![Poly::zero(); rows * cols],
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn identity(n: usize) -> RingMatrix {
        let mut m = RingMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<RingMatrix, MatrixError> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(MatrixError::RaggedRows {
                    row: i,
                    got: r.len(),
                    expected: cols,
                });
            }
        }
        Ok(RingMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
            row_labels: None,
            col_labels: None,
        })
    }

    /// Attaches labels; lengths must match the respective dimensions.
    pub fn with_labels(mut self, row_labels: Vec<String>, col_labels: Vec<String>) -> RingMatrix {
        assert_eq!(row_labels.len(), self.rows, "row label count");
        assert_eq!(col_labels.len(), self.cols, "column label count");
        self.row_labels = Some(row_labels);
        self.col_labels = Some(col_labels);
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn get(&self, row: usize, col: usize) -> &Poly {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Poly) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col] = value;
    }

    /// Adds `value` to the entry at `(row, col)`.
    pub fn add_to(&mut self, row: usize, col: usize, value: &Poly) {
        let current = self.get(row, col).add(value);
        self.set(row, col, current);
    }

    /// The matrix with row `row` and column `col` removed; labels, when
    /// present, lose the corresponding entries.
    pub fn delete_row_col(&self, row: usize, col: usize) -> RingMatrix {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            for j in 0..self.cols {
                if j != col {
                    data.push(self.get(i, j).clone());
                }
            }
        }
        let drop_at = |labels: &Option<Vec<String>>, k: usize| {
            labels.as_ref().map(|ls| {
                ls.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != k)
                    .map(|(_, l)| l.clone())
                    .collect()
            })
        };
        RingMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
            row_labels: drop_at(&self.row_labels, row),
            col_labels: drop_at(&self.col_labels, col),
        }
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = RingMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.add_to(i, j, &a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RingMatrix) -> Result<RingMatrix, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).add(other.get(i, j)));
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &RingMatrix) -> Result<RingMatrix, MatrixError> {
        let mut negated = other.clone();
        for entry in &mut negated.data {
            *entry = entry.neg();
        }
        self.add(&negated)
    }

    /// Determinant by the Berkowitz algorithm. The 0x0 determinant is 1.
    ///
    /// Computes the characteristic polynomial coefficients c_0..c_n of
    /// det(xI - A) by expanding one principal submatrix at a time; each
    /// step multiplies the running coefficient vector by a Toeplitz
    /// vector t = [1, -a_rr, -R S, -R M S, -R M^2 S, ...] built from the
    /// new row R, column S, and corner a_rr. Then det A = (-1)^n c_n.
    pub fn determinant(&self) -> Result<Poly, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut coeffs = vec![Poly::one()];
        for r in 0..n {
            let mut t = Vec::with_capacity(r + 2);
            t.push(Poly::one());
            t.push(self.get(r, r).neg());
            // v starts as the new column S and is repeatedly hit by M.
            let mut v: Vec<Poly> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for _ in 0..r {
                let mut dot = Poly::zero();
                for (j, vj) in v.iter().enumerate() {
                    if !vj.is_zero() {
                        dot = dot.add(&self.get(r, j).mul(vj));
                    }
                }
                t.push(dot.neg());
                let mut next = vec![Poly::zero(); r];
                for (i, slot) in next.iter_mut().enumerate() {
                    for (j, vj) in v.iter().enumerate() {
                        if !vj.is_zero() {
                            *slot = slot.add(&self.get(i, j).mul(vj));
                        }
                    }
                }
                v = next;
            }
            let mut next_coeffs = vec![Poly::zero(); r + 2];
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (j, tj) in t.iter().enumerate() {
                    if i + j < next_coeffs.len() && !tj.is_zero() {
                        next_coeffs[i + j] = next_coeffs[i + j].add(&c.mul(tj));
                    }
                }
            }
            coeffs = next_coeffs;
        }
        let cn = coeffs.pop().expect("length n+1");
        Ok(if n % 2 == 0 { cn } else { cn.neg() })
    }

    /// Determinant by cofactor expansion along the first row. Factorial
    /// time; only suitable as an independent check on small matrices.
    pub fn determinant_cofactor(&self) -> Result<Poly, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(Poly::one());
        }
        if self.rows == 1 {
            return Ok(self.get(0, 0).clone());
        }
        let mut total = Poly::zero();
        for j in 0..self.cols {
            let a = self.get(0, j);
            if a.is_zero() {
                continue;
            }
            let minor = self.delete_row_col(0, j).determinant_cofactor()?;
            let signed = if j % 2 == 0 { minor } else { minor.neg() };
            total = total.add(&a.mul(&signed));
        }
        Ok(total)
    }
}

impl fmt::Display for RingMatrix {
    /// Space-aligned grid; labels, when present, appear as a header row
    /// and a leading column.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        let labeled = self.row_labels.is_some() || self.col_labels.is_some();
        let empty = String::new();
        let row_label = |i: usize| -> &String {
            self.row_labels
                .as_ref()
                .map(|ls| &ls[i])
                .unwrap_or(&empty)
        };
        let mut widths = vec![0usize; self.cols];
        for (j, w) in widths.iter_mut().enumerate() {
            *w = cells.iter().map(|row| row[j].len()).max().unwrap_or(0);
            if let Some(ls) = &self.col_labels {
                *w = (*w).max(ls[j].len());
            }
        }
        let label_width = (0..self.rows).map(|i| row_label(i).len()).max().unwrap_or(0);
        if let Some(ls) = &self.col_labels {
            write!(f, "{:label_width$}", "")?;
            for (j, l) in ls.iter().enumerate() {
                write!(f, "  {:>width$}", l, width = widths[j])?;
            }
            writeln!(f)?;
        }
        for (i, row) in cells.iter().enumerate() {
            if labeled {
                write!(f, "{:label_width$}", row_label(i))?;
            }
            for (j, cell) in row.iter().enumerate() {
                if j == 0 && !labeled {
                    write!(f, "{:>width$}", cell, width = widths[j])?;
                } else {
                    write!(f, "  {:>width$}", cell, width = widths[j])?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingMatrix({}x{})", self.rows, self.cols)?;
        writeln!(f)?;
        fmt::Display::fmt(self, f)
    }
}
