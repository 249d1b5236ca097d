//! Dense linear algebra over a `Field`.

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Fe>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Appends a row; the first row fixes the column count of an empty matrix.
    pub fn push_row(&mut self, row: &[Fe]) {
        if self.rows == 0 && self.cols == 0 {
            self.cols = row.len();
        }
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn mul_vec(&self, x: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(x).fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        rref(&mut work, self.cols).len()
    }

    pub fn nullspace(&self) -> Vec<Vec<Fe>> {
        let zero = vec![Fe::ZERO; self.rows];
        solve_affine(self, &zero).map(|s| s.basis).unwrap_or_default()
    }
}

/// Reduces `m` in place to reduced row echelon form over its first `ncols`
/// columns, pivoting on the lowest row index within the lowest column.
/// Returns the pivot columns.
fn rref(m: &mut Matrix, ncols: usize) -> Vec<usize> {
    let f = m.field.clone();
    let cols = m.cols;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.rows {
            break;
        }
        let Some(piv) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        if piv != row {
            for c in 0..cols {
                m.data.swap(piv * cols + c, row * cols + c);
            }
        }
        let inv = f.inv_nz(m.get(row, col));
        for c in col..cols {
            let v = f.mul(m.get(row, c), inv);
            m.set(row, c, v);
        }
        let pivot_row: Vec<Fe> = m.row(row)[col..].to_vec();
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col);
            if factor.is_zero() {
                continue;
            }
            let base = r * cols;
            for (off, &pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    let idx = base + col + off;
                    m.data[idx] = f.sub(m.data[idx], f.mul(factor, pv));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// The solution set {particular + span(basis)} of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSpace {
    pub field: Field,
    pub ambient_dim: usize,
    pub particular: Option<Vec<Fe>>,
    pub basis: Vec<Vec<Fe>>,
}

impl AffineSpace {
    pub fn empty(field: &Field, ambient_dim: usize) -> AffineSpace {
        AffineSpace { field: field.clone(), ambient_dim, particular: None, basis: Vec::new() }
    }

    pub fn point(field: &Field, v: Vec<Fe>) -> AffineSpace {
        AffineSpace { field: field.clone(), ambient_dim: v.len(), particular: Some(v), basis: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    /// Dimension; `None` for the empty space.
    pub fn dimension(&self) -> Option<usize> {
        self.particular.as_ref().map(|_| self.basis.len())
    }

    /// The member particular + sum lambda_i basis_i.
    pub fn member(&self, lambda: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let mut v = self.particular.clone().expect("member of an empty space");
        for (l, b) in lambda.iter().zip(&self.basis) {
            if l.is_zero() {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(*l, y));
            }
        }
        v
    }

    /// Number of members as a float (it may overflow any integer type).
    pub fn size_f64(&self) -> f64 {
        match self.dimension() {
            None => 0.0,
            Some(d) => (self.field.size() as f64).powi(d as i32),
        }
    }

    /// All members, lexicographic in the basis coefficients.
    pub fn enumerate(&self, cap: usize) -> Result<Vec<Vec<Fe>>> {
        let Some(dim) = self.dimension() else {
            return Ok(Vec::new());
        };
        let size = self.size_f64();
        if size > cap as f64 {
            return Err(Error::TooLarge { size, cap });
        }
        let q = self.field.size();
        let mut out = Vec::with_capacity(size as usize);
        let mut lambda = vec![0u32; dim];
        loop {
            out.push(self.member(&lambda.iter().map(|&x| Fe(x)).collect::<Vec<_>>()));
            let mut i = dim;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                lambda[i] += 1;
                if lambda[i] < q {
                    break;
                }
                lambda[i] = 0;
            }
        }
    }

    /// Coefficients lambda with v = particular + sum lambda_i basis_i, if v is a member.
    pub fn coordinates_of(&self, v: &[Fe]) -> Option<Vec<Fe>> {
        let p = self.particular.as_ref()?;
        if v.len() != self.ambient_dim {
            return None;
        }
        let f = &self.field;
        let diff: Vec<Fe> = v.iter().zip(p).map(|(&a, &b)| f.sub(a, b)).collect();
        let mut m = Matrix::zeros(f, self.ambient_dim, self.basis.len());
        for (j, b) in self.basis.iter().enumerate() {
            for (i, &x) in b.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        let sol = solve_affine(&m, &diff).ok()?;
        sol.particular
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        self.coordinates_of(v).is_some()
    }

    /// Intersection with {x : n x = rhs}.
    pub fn constrain(&self, n: &Matrix, rhs: &[Fe]) -> Result<AffineSpace> {
        if n.cols() != self.ambient_dim || n.rows() != rhs.len() {
            return Err(Error::DimensionMismatch(format!(
                "constraint {}x{} against ambient {}",
                n.rows(),
                n.cols(),
                self.ambient_dim
            )));
        }
        let Some(p) = &self.particular else {
            return Ok(self.clone());
        };
        let f = &self.field;
        let np = n.mul_vec(p);
        let reduced_rhs: Vec<Fe> = rhs.iter().zip(&np).map(|(&a, &b)| f.sub(a, b)).collect();
        let mut nb = Matrix::zeros(f, n.rows(), self.basis.len());
        for (j, b) in self.basis.iter().enumerate() {
            for (i, v) in n.mul_vec(b).into_iter().enumerate() {
                nb.set(i, j, v);
            }
        }
        let lam = solve_affine(&nb, &reduced_rhs)?;
        let Some(lp) = &lam.particular else {
            return Ok(AffineSpace::empty(f, self.ambient_dim));
        };
        let particular = self.member(lp);
        let zero_p = AffineSpace {
            field: f.clone(),
            ambient_dim: self.ambient_dim,
            particular: Some(vec![Fe::ZERO; self.ambient_dim]),
            basis: self.basis.clone(),
        };
        let basis = lam.basis.iter().map(|c| zero_p.member(c)).collect();
        Ok(AffineSpace { field: f.clone(), ambient_dim: self.ambient_dim, particular: Some(particular), basis })
    }
}

/// Solves m x = rhs by Gaussian elimination with a fixed pivot rule.
pub fn solve_affine(m: &Matrix, rhs: &[Fe]) -> Result<AffineSpace> {
    if rhs.len() != m.rows {
        return Err(Error::DimensionMismatch(format!("rhs has {} entries for {} rows", rhs.len(), m.rows)));
    }
    let f = &m.field;
    let n = m.cols;
    let mut aug = Matrix::zeros(f, m.rows, n + 1);
    for (r, &b) in rhs.iter().enumerate().take(m.rows) {
        aug.data[r * (n + 1)..r * (n + 1) + n].copy_from_slice(m.row(r));
        aug.set(r, n, b);
    }
    let pivots = rref(&mut aug, n);
    if (pivots.len()..m.rows).any(|r| !aug.get(r, n).is_zero()) {
        return Ok(AffineSpace::empty(f, n));
    }
    let mut particular = vec![Fe::ZERO; n];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = aug.get(i, n);
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let basis = (0..n)
        .filter(|&j| !is_pivot[j])
        .map(|j| {
            let mut v = vec![Fe::ZERO; n];
            v[j] = Fe::ONE;
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(aug.get(i, j));
            }
            v
        })
        .collect();
    Ok(AffineSpace { field: f.clone(), ambient_dim: n, particular: Some(particular), basis })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[u32]) -> Vec<Fe> {
        xs.iter().map(|&x| Fe(x)).collect()
    }

    #[test]
    fn identity_system() {
        let f = Field::prime(5).unwrap();
        let s = solve_affine(&Matrix::identity(&f, 2), &v(&[1, 2])).unwrap();
        assert_eq!(s.particular, Some(v(&[1, 2])));
        assert!(s.basis.is_empty());
    }

    #[test]
    fn zero_system_is_everything() {
        let f = Field::prime(5).unwrap();
        let s = solve_affine(&Matrix::zeros(&f, 1, 2), &v(&[0])).unwrap();
        assert_eq!(s.dimension(), Some(2));
    }

    #[test]
    fn one_equation_over_f3() {
        let f = Field::prime(3).unwrap();
        let m = Matrix::from_rows(&f, &[v(&[1, 1])]).unwrap();
        let s = solve_affine(&m, &v(&[1])).unwrap();
        assert_eq!(s.particular, Some(v(&[1, 0])));
        assert_eq!(s.basis, vec![v(&[2, 1])]);
        let all = s.enumerate(100).unwrap();
        assert_eq!(all.len(), 3);
        for x in all {
            assert_eq!(m.mul_vec(&x), v(&[1]));
        }
    }

    #[test]
    fn inconsistent_and_caps() {
        let f = Field::prime(5).unwrap();
        let m = Matrix::from_rows(&f, &[v(&[1, 1]), v(&[2, 2])]).unwrap();
        assert!(solve_affine(&m, &v(&[1, 1])).unwrap().is_empty());
        let big = solve_affine(&Matrix::zeros(&f, 1, 2), &v(&[0])).unwrap();
        assert!(matches!(big.enumerate(10), Err(Error::TooLarge { .. })));
        let pt = AffineSpace::point(&f, v(&[3, 4]));
        assert_eq!(pt.enumerate(1).unwrap(), vec![v(&[3, 4])]);
        assert!(matches!(solve_affine(&m, &v(&[1])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn random_systems_are_solved_exactly() {
        use rand::SeedableRng;
        let f = Field::prime(7).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let rows: Vec<Vec<Fe>> = (0..4).map(|_| (0..6).map(|_| f.random(&mut rng)).collect()).collect();
            let m = Matrix::from_rows(&f, &rows).unwrap();
            let x: Vec<Fe> = (0..6).map(|_| f.random(&mut rng)).collect();
            let rhs = m.mul_vec(&x);
            let s = solve_affine(&m, &rhs).unwrap();
            assert_eq!(m.mul_vec(s.particular.as_ref().unwrap()), rhs);
            for b in &s.basis {
                assert!(m.mul_vec(b).iter().all(|c| c.is_zero()));
            }
            assert!(s.contains(&x));
            assert_eq!(s.basis.len() + m.rank(), 6);
            assert_eq!(solve_affine(&m, &rhs).unwrap(), s);
        }
    }

    #[test]
    fn constrain_intersects() {
        let f = Field::prime(5).unwrap();
        let s = solve_affine(&Matrix::zeros(&f, 1, 3), &v(&[0])).unwrap();
        let n = Matrix::from_rows(&f, &[v(&[1, 0, 0]), v(&[0, 1, 4])]).unwrap();
        let t = s.constrain(&n, &v(&[2, 0])).unwrap();
        assert_eq!(t.dimension(), Some(1));
        for x in t.enumerate(10).unwrap() {
            assert_eq!(n.mul_vec(&x), v(&[2, 0]));
        }
    }
}
