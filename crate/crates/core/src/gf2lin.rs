//! Dense bit-packed matrices over GF(2).
//!
//! Operator matrices are square with side `2^n`, rows and columns indexed
//! by [`SubsetMask`] value. The same type holds rectangular matrices for the
//! rank computations that flatten operators into long row vectors.

use std::fmt::Write as _;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::subset::SubsetMask;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(side: usize) -> Self {
        let mut m = Self::zeros(side, side);
        for i in 0..side {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        Gf2Matrix {
            cols,
            rows: (0..rows).map(|r| BitVec::from_fn(cols, |c| f(r, c))).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Shape(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(Gf2Matrix { cols, rows })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v)
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.rows[r].flip(c)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    pub fn add(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    pub(crate) fn add_assign(&mut self, other: &Gf2Matrix) {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.xor_assign(b);
        }
    }

    /// `(AB)_{a,c} = XOR_b A_{a,b} B_{b,c}`.
    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows.len() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows.len(),
                self.cols,
                other.rows.len(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for b in row.iter_ones() {
                    acc.xor_assign(&other.rows[b]);
                }
                acc
            })
            .collect();
        Ok(Gf2Matrix {
            cols: other.cols,
            rows,
        })
    }

    /// `out(a) = XOR_b A_{a,b} v(b)`.
    pub fn apply(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(BitVec::from_fn(self.rows.len(), |r| self.rows[r].dot(v)))
    }

    /// Row rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        Echelon::new(self.rows.clone(), self.cols).pivots.len()
    }

    /// Whether some `R` satisfies `S = T R`, i.e. every column of `S` lies in
    /// the column space of `T` (`self`).
    pub fn colspace_contains(&self, s: &Gf2Matrix) -> Result<bool> {
        Ok(self.solve_right(s)?.is_some())
    }

    /// A witness `R` with `S = T R`, if one exists.
    ///
    /// Row-reduces `T` once and carries `S` along as extra columns; the system
    /// is consistent iff every zero row of the reduced `T` is also zero in
    /// the carried `S`.
    pub fn solve_right(&self, s: &Gf2Matrix) -> Result<Option<Gf2Matrix>> {
        if self.rows.len() != s.rows.len() {
            return Err(Error::Shape(format!(
                "T has {} rows but S has {}",
                self.rows.len(),
                s.rows.len()
            )));
        }
        let mut t_rows = self.rows.clone();
        let mut s_rows = s.rows.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..t_rows.len()).find(|&r| t_rows[r].get(col)) else {
                continue;
            };
            t_rows.swap(rank, p);
            s_rows.swap(rank, p);
            let (pivot_t, pivot_s) = (t_rows[rank].clone(), s_rows[rank].clone());
            for r in 0..t_rows.len() {
                if r != rank && t_rows[r].get(col) {
                    t_rows[r].xor_assign(&pivot_t);
                    s_rows[r].xor_assign(&pivot_s);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if s_rows[rank..].iter().any(|r| !r.is_zero()) {
            return Ok(None);
        }
        let mut witness = Gf2Matrix::zeros(self.cols, s.cols);
        for (i, &col) in pivots.iter().enumerate() {
            witness.rows[col] = s_rows[i].clone();
        }
        Ok(Some(witness))
    }

    /// All entries in row-major order as one long vector.
    pub fn flatten(&self) -> BitVec {
        let mut out = BitVec::zeros(self.rows.len() * self.cols);
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                out.set(r * self.cols + c, true);
            }
        }
        out
    }

    /// 0/1 grid, one line per row.
    pub fn to_grid(&self) -> String {
        let mut s = String::new();
        for (r, row) in self.rows.iter().enumerate() {
            if r > 0 {
                s.push('\n');
            }
            for c in 0..self.cols {
                s.push(if row.get(c) { '1' } else { '0' });
            }
        }
        s
    }

    pub fn from_grid(text: &str) -> Result<Gf2Matrix> {
        let rows: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|line| {
                if line.len() != cols {
                    return Err(Error::Shape("ragged grid".into()));
                }
                line.chars()
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::Format(format!("bad grid character `{other}`"))),
                    })
                    .collect::<Result<Vec<bool>>>()
                    .map(|b| BitVec::from_bools(&b))
            })
            .collect::<Result<Vec<_>>>()?;
        Gf2Matrix::from_rows(cols, rows)
    }

    /// Graph view: an edge `b -> a` for every entry `M_{a,b} = 1`; nodes are
    /// labelled with set literals.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{name}\" {{");
        let side = self.rows.len().max(self.cols);
        for v in 0..side {
            let _ = writeln!(s, "  n{v} [label=\"{}\"];", SubsetMask(v as u32));
        }
        for (a, row) in self.rows.iter().enumerate() {
            for b in row.iter_ones() {
                let _ = writeln!(s, "  n{b} -> n{a};");
            }
        }
        s.push('}');
        s.push('\n');
        s
    }

    fn same_shape(&self, other: &Gf2Matrix) -> Result<()> {
        if self.rows.len() == other.rows.len() && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows.len(),
                self.cols,
                other.rows.len(),
                other.cols
            )))
        }
    }
}

impl std::fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows.len(), self.cols)?;
        f.write_str(&self.to_grid())
    }
}

/// Reduced row echelon form.
struct Echelon {
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(mut rows: Vec<BitVec>, cols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows.len() {
                break;
            }
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for row in rows.iter_mut().skip(rank + 1) {
                if row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        Echelon { pivots }
    }
}
