use crate::error::{Error, Result};
use crate::symkernel::Scalar;

/// Dense matrix of canonical scalars. Shapes are fixed by the tensor types
/// that own them, so shape mismatches here are programming errors and panic.
#[derive(Clone, Debug, PartialEq)]
pub struct SMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Largest size inverted through the adjugate; bigger matrices use exact
/// Gauss-Jordan elimination.
pub const ADJUGATE_LIMIT: usize = 4;

impl SMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        SMatrix::from_fn(n, n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        SMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        SMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(entries: Vec<Scalar>) -> Self {
        let n = entries.len();
        let mut m = SMatrix::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        SMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Self> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(SMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        SMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, o: &SMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        SMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + o.get(i, j))
    }

    pub fn sub(&self, o: &SMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        SMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - o.get(i, j))
    }

    pub fn neg(&self) -> Self {
        self.map(|s| -s)
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        self.map(|s| s * k)
    }

    pub fn mul(&self, o: &SMatrix) -> Self {
        assert_eq!(self.cols, o.rows);
        SMatrix::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols)
                .filter(|&k| !self.get(i, k).is_zero() && !o.get(k, j).is_zero())
                .map(|k| self.get(i, k) * o.get(k, j))
                .sum()
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).filter(|&k| !v[k].is_zero()).map(|k| self.get(i, k) * &v[k]).sum())
            .collect()
    }

    /// Sub-block starting at (r0, c0).
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        SMatrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Assembles `[[ul, ur], [ll, lr]]`.
    pub fn from_blocks(ul: &SMatrix, ur: &SMatrix, ll: &SMatrix, lr: &SMatrix) -> Self {
        assert_eq!(ul.rows, ur.rows);
        assert_eq!(ll.rows, lr.rows);
        assert_eq!(ul.cols, ll.cols);
        assert_eq!(ur.cols, lr.cols);
        let (r, c) = (ul.rows, ul.cols);
        SMatrix::from_fn(ul.rows + ll.rows, ul.cols + ur.cols, |i, j| match (i < r, j < c) {
            (true, true) => ul.get(i, j).clone(),
            (true, false) => ur.get(i, j - c).clone(),
            (false, true) => ll.get(i - r, j).clone(),
            (false, false) => lr.get(i - r, j - c).clone(),
        })
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let n = self.rows;
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != skip_row) {
            for j in (0..n).filter(|&j| j != skip_col) {
                data.push(self.get(i, j).clone());
            }
        }
        SMatrix { rows: n - 1, cols: n - 1, data }
    }

    fn cofactor(&self, i: usize, j: usize) -> Scalar {
        let m = self.minor(i, j).det();
        if (i + j).is_multiple_of(2) {
            m
        } else {
            -m
        }
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        match n {
            0 => Scalar::one(),
            1 => self.get(0, 0).clone(),
            _ if n <= ADJUGATE_LIMIT => {
                (0..n).filter(|&j| !self.get(0, j).is_zero()).map(|j| self.get(0, j) * &self.cofactor(0, j)).sum()
            }
            _ => self.det_elimination(),
        }
    }

    fn det_elimination(&self) -> Scalar {
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pivot = a.get(col, col).clone();
            det = &det * &pivot;
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).checked_div(&pivot).expect("nonzero pivot");
                for c in col..n {
                    let v = a.get(r, c) - &(&f * a.get(col, c));
                    a.set(r, c, v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Exact inverse; fails with [`Error::DivisionByZero`] when singular.
    pub fn inverse(&self) -> Result<SMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        if n > ADJUGATE_LIMIT {
            return self.inverse_elimination();
        }
        let det = self.det();
        if det.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if n == 1 {
            return Ok(SMatrix::from_fn(1, 1, |_, _| det.recip().expect("nonzero")));
        }
        let inv_det = det.recip()?;
        Ok(SMatrix::from_fn(n, n, |i, j| &self.cofactor(j, i) * &inv_det))
    }

    fn inverse_elimination(&self) -> Result<SMatrix> {
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = SMatrix::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::DivisionByZero)?;
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            let pivot = a.get(col, col).recip()?;
            for c in 0..n {
                a.set(col, c, a.get(col, c) * &pivot);
                inv.set(col, c, inv.get(col, c) * &pivot);
            }
            for r in (0..n).filter(|&r| r != col) {
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    a.set(r, c, a.get(r, c) - &(&f * a.get(col, c)));
                    inv.set(r, c, inv.get(r, c) - &(&f * inv.get(col, c)));
                }
            }
        }
        Ok(inv)
    }
}
