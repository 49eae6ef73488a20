//! Dense matrices over an exact field, with deterministic Gaussian
//! elimination (first-nonzero pivoting, no reordering across runs).
//!
//! Everything downstream — homology, resolutions, tangent spaces — reduces to
//! `rref`, `kernel_basis`, `solve` and `quotient_dim` on these matrices.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

pub type Vector = Vec<Scalar>;

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Build from row vectors, checking that every entry lies in `field`.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in &rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "ragged rows: {} vs {}",
                    row.len(),
                    ncols
                )));
            }
            for e in row {
                if e.field() != field {
                    return Err(Error::FieldMismatch(
                        field.to_string(),
                        e.field().to_string(),
                    ));
                }
            }
            entries.extend(row.iter().cloned());
        }
        Ok(Matrix {
            field,
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    /// Convenience constructor from integer literals.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|v| field.from_i64(*v)).collect())
            .collect();
        Matrix::from_rows(field, data).expect("consistent field by construction")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn row(&self, r: usize) -> Vector {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn set_col(&mut self, c: usize, v: &[Scalar]) {
        debug_assert_eq!(v.len(), self.rows);
        for (r, e) in v.iter().enumerate() {
            self.set(r, c, e.clone());
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        Matrix { entries, ..*self }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            entries: self.entries.iter().map(|e| e.neg()).collect(),
            ..*self
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            entries: self.entries.iter().map(|e| e.mul(s)).collect(),
            ..*self
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c).add(&a.mul(b));
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let mut out = vec![self.field.zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = self.field.zero();
            for c in 0..self.cols {
                let a = self.get(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    acc = acc.add(&a.mul(&v[c]));
                }
            }
            out[r] = acc;
        }
        out
    }

    /// Kronecker product with column layout `(a, b) -> a * other.cols + b`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zero(self.field, self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.get(r2, c2);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(r1 * other.rows + r2, c1 * other.cols + c2, a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn hstack(field: FieldSpec, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        assert!(blocks.iter().all(|b| b.rows == rows));
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zero(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            for r in 0..rows {
                for c in 0..b.cols {
                    out.set(r, off + c, b.get(r, c).clone());
                }
            }
            off += b.cols;
        }
        out
    }

    pub fn vstack(field: FieldSpec, blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        assert!(blocks.iter().all(|b| b.cols == cols));
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Matrix::zero(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..cols {
                    out.set(off + r, c, b.get(r, c).clone());
                }
            }
            off += b.rows;
        }
        out
    }

    /// Write `block` into `self` at offset `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    /// Reduced row-echelon form with the pivot columns, deterministic
    /// (first nonzero entry in column order becomes the pivot).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for pc in 0..m.cols {
            if pr >= m.rows {
                break;
            }
            let mut sel = None;
            for r in pr..m.rows {
                if !m.get(r, pc).is_zero() {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            m.swap_rows(pr, sel);
            let inv = m.get(pr, pc).inv().expect("nonzero pivot");
            if !inv.is_one() {
                for c in pc..m.cols {
                    let v = m.get(pr, c).mul(&inv);
                    m.set(pr, c, v);
                }
            }
            for r in 0..m.rows {
                if r == pr || m.get(r, pc).is_zero() {
                    continue;
                }
                let f = m.get(r, pc).clone();
                for c in pc..m.cols {
                    let v = m.get(r, c).sub(&f.mul(m.get(pr, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(pc);
            pr += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{ v : self * v = 0 }`, one vector per free column,
    /// in ascending free-column order. Empty iff the map is injective.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let piv_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = Some(i);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if piv_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![self.field.zero(); self.cols];
            vec[free] = self.field.one();
            for (i, &p) in pivots.iter().enumerate() {
                vec[p] = r.get(i, free).neg();
            }
            basis.push(vec);
        }
        basis
    }

    /// Some particular solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: rhs length {} vs {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut bm = Matrix::zero(self.field, self.rows, 1);
        bm.set_col(0, b);
        let aug = Matrix::hstack(self.field, &[self, &bm]);
        let (r, pivots) = aug.rref();
        if pivots.last().is_some_and(|&p| p == self.cols) {
            return Ok(None); // pivot in the rhs column: inconsistent
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Solve `self * X = B` column by column; `None` if any column fails.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Option<Matrix>> {
        let mut out = Matrix::zero(self.field, self.cols, b.cols);
        for c in 0..b.cols {
            match self.solve(&b.col(c))? {
                Some(x) => out.set_col(c, &x),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let id = Matrix::identity(self.field, self.rows);
        self.solve_matrix(&id).expect("shapes agree").filter(|_| {
            // solve_matrix may return a least-constrained preimage even if
            // self is singular but consistent; rank check settles it.
            self.rank() == self.rows
        })
    }
}

/// `dim span(big) - dim span(small)` for two spanning sets of column
/// vectors, after verifying `span(small) ⊆ span(big)`; the error names a
/// witness vector outside the big span.
pub fn quotient_dim(big: &[Vector], small: &[Vector]) -> Result<usize> {
    let field = big
        .first()
        .or(small.first())
        .map(|v| v.first().map(|s| s.field()))
        .flatten();
    let Some(field) = field else { return Ok(0) };
    let dim = big.first().or(small.first()).unwrap().len();
    let big_mat = cols_to_matrix(field, dim, big);
    for v in small {
        if big_mat.solve(v)?.is_none() {
            return Err(Error::ContainmentViolated {
                context: "small spanning set not inside span(big)".into(),
                witness: format!(
                    "({})",
                    v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
                ),
            });
        }
    }
    let small_mat = cols_to_matrix(field, dim, small);
    Ok(big_mat.rank() - small_mat.rank())
}

/// Pack column vectors into a matrix (dim x n).
pub fn cols_to_matrix(field: FieldSpec, dim: usize, cols: &[Vector]) -> Matrix {
    let mut m = Matrix::zero(field, dim, cols.len());
    for (c, v) in cols.iter().enumerate() {
        assert_eq!(v.len(), dim, "column length mismatch");
        m.set_col(c, v);
    }
    m
}

/// Is `v` in the column span of `basis`?
pub fn in_span(field: FieldSpec, dim: usize, basis: &[Vector], v: &[Scalar]) -> bool {
    cols_to_matrix(field, dim, basis)
        .solve(v)
        .expect("shape ok")
        .is_some()
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_neg(a: &[Scalar]) -> Vector {
    a.iter().map(|x| x.neg()).collect()
}

pub fn vec_scale(a: &[Scalar], s: &Scalar) -> Vector {
    a.iter().map(|x| x.mul(s)).collect()
}

pub fn vec_is_zero(a: &[Scalar]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn zero_vec(field: FieldSpec, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vec(field: FieldSpec, n: usize, i: usize) -> Vector {
    let mut v = zero_vec(field, n);
    v[i] = field.one();
    v
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let q = FieldSpec::rationals();
        let id = Matrix::identity(q, 3);
        let (r, piv) = id.rref();
        assert_eq!(r, id);
        assert_eq!(piv, vec![0, 1, 2]);

        let z = Matrix::zero(q, 2, 3);
        let (r, piv) = z.rref();
        assert_eq!(r, z);
        assert!(piv.is_empty());
    }

    #[test]
    fn rref_over_f5_matches_hand_reduction() {
        // Hand oracle: [[1,2],[2,4]] over F_5 -> second row is 2x first, so
        // R2 := R2 - 2*R1 = 0: rref [[1,2],[0,0]], pivot column 0.
        let m = Matrix::from_i64(f(5), &[&[1, 2], &[2, 4]]);
        let (r, piv) = m.rref();
        assert_eq!(r, Matrix::from_i64(f(5), &[&[1, 2], &[0, 0]]));
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn rref_is_idempotent() {
        let m = Matrix::from_i64(f(7), &[&[2, 3, 1], &[4, 6, 2], &[1, 0, 5]]);
        let (r1, _) = m.rref();
        let (r2, _) = r1.rref();
        assert_eq!(r1, r2);
    }

    #[test]
    fn kernel_identity_and_zero() {
        let q = FieldSpec::rationals();
        assert!(Matrix::identity(q, 4).kernel_basis().is_empty());
        let z = Matrix::zero(q, 3, 3);
        let k = z.kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            assert_eq!(*v, unit_vec(q, 3, i));
        }
    }

    #[test]
    fn kernel_of_multiplication_by_x_on_dual_numbers() {
        // Multiplication by x on F_2[x]/(x^2) in basis {1, x} is
        // [[0,0],[1,0]]. Brute-force oracle over all 4 vectors of F_2^2:
        let m = Matrix::from_i64(f(2), &[&[0, 0], &[1, 0]]);
        let mut expected = Vec::new();
        for a in 0..2i64 {
            for b in 0..2i64 {
                let v = vec![f(2).from_i64(a), f(2).from_i64(b)];
                if vec_is_zero(&m.apply(&v)) && !(a == 0 && b == 0) {
                    expected.push(v);
                }
            }
        }
        assert_eq!(expected, vec![vec![f(2).from_i64(0), f(2).from_i64(1)]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], expected[0]);
    }

    #[test]
    fn solve_cases() {
        let q = FieldSpec::rationals();
        let id = Matrix::identity(q, 2);
        let e1 = unit_vec(q, 2, 0);
        assert_eq!(id.solve(&e1).unwrap().unwrap(), e1);

        let z = Matrix::zero(q, 2, 2);
        assert!(z.solve(&e1).unwrap().is_none());

        // Brute-force oracle over F_3^2 for [[1,1],[0,1]] x = (1,1).
        let f3 = f(3);
        let m = Matrix::from_i64(f3, &[&[1, 1], &[0, 1]]);
        let b = vec![f3.one(), f3.one()];
        let mut solutions = Vec::new();
        for a in 0..3i64 {
            for c in 0..3i64 {
                let v = vec![f3.from_i64(a), f3.from_i64(c)];
                if m.apply(&v) == b {
                    solutions.push(v);
                }
            }
        }
        assert_eq!(solutions, vec![vec![f3.from_i64(0), f3.from_i64(1)]]);
        assert_eq!(m.solve(&b).unwrap().unwrap(), solutions[0]);
    }

    #[test]
    fn solve_result_satisfies_equation_exactly() {
        let q = FieldSpec::rationals();
        let m = Matrix::from_i64(q, &[&[2, 4, 1], &[0, 3, 5]]);
        let b = vec![q.from_i64(7), q.from_i64(9)];
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.apply(&x), b);
    }

    #[test]
    fn quotient_dim_cases() {
        let q = FieldSpec::rationals();
        let e1 = unit_vec(q, 2, 0);
        let e2 = unit_vec(q, 2, 1);
        let e12 = vec_add(&e1, &e2);

        assert_eq!(quotient_dim(&[e1.clone(), e2.clone()], &[e1.clone()]).unwrap(), 1);
        assert_eq!(
            quotient_dim(&[e1.clone(), e2.clone()], &[e1.clone(), e2.clone()]).unwrap(),
            0
        );
        // {e1, e1+e2, e2} has rank 2, {e1+e2} rank 1.
        assert_eq!(
            quotient_dim(&[e1.clone(), e12.clone(), e2.clone()], &[e12.clone()]).unwrap(),
            1
        );
        // containment violation carries a witness
        let err = quotient_dim(&[e1.clone()], &[e2.clone()]).unwrap_err();
        assert!(err.to_string().contains("witness"));
    }

    #[test]
    fn inverse_and_singular() {
        let f3 = f(3);
        let m = Matrix::from_i64(f3, &[&[1, 1], &[0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f3, 2));
        let s = Matrix::from_i64(f3, &[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_none());
    }

    #[test]
    fn rank_nullity_on_randomized_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.gen_range(0..6);
            let cols = rng.gen_range(0..6);
            for field in [FieldSpec::rationals(), f(2), f(5)] {
                let mut m = Matrix::zero(field, rows, cols);
                for r in 0..rows {
                    for c in 0..cols {
                        m.set(r, c, field.from_i64(rng.gen_range(-4..5)));
                    }
                }
                assert_eq!(m.rank() + m.kernel_basis().len(), cols);
            }
        }
    }

    #[test]
    fn kernel_agrees_with_brute_force_over_small_prime_fields() {
        // p * n <= 2^16 regime: enumerate all vectors and compare spans.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in [2u64, 3] {
            let field = f(p);
            for _ in 0..10 {
                let rows = rng.gen_range(1..4);
                let cols = rng.gen_range(1..4);
                let mut m = Matrix::zero(field, rows, cols);
                for r in 0..rows {
                    for c in 0..cols {
                        m.set(r, c, field.from_i64(rng.gen_range(0..p as i64)));
                    }
                }
                let mut brute = Vec::new();
                let total = (p as usize).pow(cols as u32);
                for code in 0..total {
                    let mut v = Vec::with_capacity(cols);
                    let mut x = code;
                    for _ in 0..cols {
                        v.push(field.from_i64((x % p as usize) as i64));
                        x /= p as usize;
                    }
                    if vec_is_zero(&m.apply(&v)) {
                        brute.push(v);
                    }
                }
                let brute_rank = cols_to_matrix(field, cols, &brute).rank();
                let kb = m.kernel_basis();
                assert_eq!(kb.len(), brute_rank);
                for v in &kb {
                    assert!(vec_is_zero(&m.apply(v)));
                }
            }
        }
    }
}
