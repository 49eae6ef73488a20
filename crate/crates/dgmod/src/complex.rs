//! Bounded complexes of finite-dimensional vector spaces, indexed
//! homologically: the differential in degree `i` maps `V_i -> V_{i-1}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::{cols_to_matrix, Matrix, Vector};
use crate::scalar::{FieldSpec, Scalar};

/// A bounded graded vector space: dimensions for degrees
/// `min_degree ..= min_degree + dims.len() - 1`, zero outside.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSpace {
    pub min_degree: i64,
    pub dims: Vec<usize>,
}

impl GradedSpace {
    pub fn new(min_degree: i64, dims: Vec<usize>) -> Self {
        GradedSpace { min_degree, dims }
    }

    pub fn zero() -> Self {
        GradedSpace {
            min_degree: 0,
            dims: Vec::new(),
        }
    }

    pub fn dim(&self, degree: i64) -> usize {
        if degree < self.min_degree {
            return 0;
        }
        let idx = (degree - self.min_degree) as usize;
        self.dims.get(idx).copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.dims.len() as i64 - 1
    }

    /// Degrees of the recorded window (some may have dimension zero).
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_degree..=self.max_degree()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Top degree with nonzero dimension, if any.
    pub fn top_nonzero(&self) -> Option<i64> {
        self.degrees().rev().find(|&d| self.dim(d) > 0)
    }

    pub fn bottom_nonzero(&self) -> Option<i64> {
        self.degrees().find(|&d| self.dim(d) > 0)
    }
}

/// A bounded complex with explicit differential blocks `d_i: V_i -> V_{i-1}`.
#[derive(Clone, PartialEq, Debug)]
pub struct Complex {
    pub field: FieldSpec,
    pub space: GradedSpace,
    /// `diffs[k]` is the differential out of degree `min_degree + k`.
    diffs: Vec<Matrix>,
}

impl Complex {
    /// Build from the space and a map of differentials by degree. Missing
    /// degrees get zero blocks; shapes are checked.
    pub fn new(
        field: FieldSpec,
        space: GradedSpace,
        differentials: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        let mut diffs = Vec::with_capacity(space.dims.len());
        for d in space.degrees() {
            let rows = space.dim(d - 1);
            let cols = space.dim(d);
            let m = match differentials.get(&d) {
                Some(m) => {
                    if m.rows() != rows || m.cols() != cols {
                        return Err(Error::DimensionMismatch(format!(
                            "differential at degree {d}: got {}x{}, expected {}x{}",
                            m.rows(),
                            m.cols(),
                            rows,
                            cols
                        )));
                    }
                    if m.field() != field {
                        return Err(Error::FieldMismatch(
                            field.to_string(),
                            m.field().to_string(),
                        ));
                    }
                    m.clone()
                }
                None => Matrix::zero(field, rows, cols),
            };
            diffs.push(m);
        }
        Ok(Complex {
            field,
            space,
            diffs,
        })
    }

    pub fn zero_complex(field: FieldSpec) -> Self {
        Complex {
            field,
            space: GradedSpace::zero(),
            diffs: Vec::new(),
        }
    }

    /// A single space concentrated in one degree.
    pub fn concentrated(field: FieldSpec, degree: i64, dim: usize) -> Self {
        Complex::new(
            field,
            GradedSpace::new(degree, vec![dim]),
            BTreeMap::new(),
        )
        .expect("shapes trivially consistent")
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.space.dim(degree)
    }

    /// The differential out of `degree` (zero-shaped outside the window).
    pub fn differential(&self, degree: i64) -> Matrix {
        if degree < self.space.min_degree || degree > self.space.max_degree() {
            return Matrix::zero(self.field, self.space.dim(degree - 1), self.space.dim(degree));
        }
        self.diffs[(degree - self.space.min_degree) as usize].clone()
    }

    pub fn set_differential(&mut self, degree: i64, m: Matrix) {
        assert_eq!(m.rows(), self.space.dim(degree - 1));
        assert_eq!(m.cols(), self.space.dim(degree));
        let idx = (degree - self.space.min_degree) as usize;
        self.diffs[idx] = m;
    }

    /// Checks block shapes and `d∘d = 0`, reporting every failing degree.
    pub fn validate(&self) -> ComplexReport {
        let mut failures = Vec::new();
        for d in self.space.degrees() {
            let hi = self.differential(d + 1);
            let lo = self.differential(d);
            if !lo.mul(&hi).is_zero() {
                failures.push(format!("d_{} ∘ d_{} != 0", d, d + 1));
            }
        }
        ComplexReport { failures }
    }

    /// Per-degree homology dimensions over the support window.
    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for d in self.space.degrees() {
            let z = self.dim(d) - self.differential(d).rank();
            let b = self.differential(d + 1).rank();
            out.insert(d, z - b);
        }
        out
    }

    /// Infimum/supremum/amplitude of homology, or the homologically trivial
    /// sentinel.
    pub fn homology_window(&self) -> HomologyWindow {
        let h = self.homology_dims();
        let nonzero: Vec<i64> = h.iter().filter(|(_, &v)| v > 0).map(|(&d, _)| d).collect();
        match (nonzero.first(), nonzero.last()) {
            (Some(&inf), Some(&sup)) => HomologyWindow::Window {
                inf,
                sup,
                amp: sup - inf,
            },
            _ => HomologyWindow::Trivial,
        }
    }

    /// Suspension: `(Σ^i C)_n = C_{n-i}` with differential `(-1)^i d`.
    pub fn shift(&self, i: i64) -> Complex {
        let sign = self.field.sign(i);
        Complex {
            field: self.field,
            space: GradedSpace::new(self.space.min_degree + i, self.space.dims.clone()),
            diffs: self.diffs.iter().map(|m| m.scale(&sign)).collect(),
        }
    }

    /// Soft left truncation at `n`: degree `n` becomes `V_n / Im(d_{n+1})`,
    /// higher degrees vanish. Returns the truncated complex together with
    /// the projection data at degree `n`.
    pub fn soft_truncate(&self, n: i64) -> (Complex, QuotientMap) {
        let img: Vec<Vector> = {
            let d = self.differential(n + 1);
            (0..d.cols()).map(|c| d.col(c)).collect()
        };
        let q = QuotientMap::by_subspace(self.field, self.dim(n), &img);
        let mut dims = Vec::new();
        let min = self.space.min_degree.min(n);
        for deg in min..n {
            dims.push(self.dim(deg));
        }
        dims.push(q.quotient_dim());
        let space = GradedSpace::new(min, dims);
        let mut diffs = BTreeMap::new();
        for deg in min..n {
            diffs.insert(deg, self.differential(deg));
        }
        // induced differential out of the quotient degree
        diffs.insert(n, self.differential(n).mul(&q.section));
        let cx = Complex::new(self.field, space, diffs).expect("truncation shapes");
        (cx, q)
    }

    /// Euler characteristic of the underlying spaces.
    pub fn euler_characteristic(&self) -> i64 {
        self.space
            .degrees()
            .map(|d| {
                let v = self.dim(d) as i64;
                if d.rem_euclid(2) == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum()
    }

    /// Direct sum, degreewise.
    pub fn direct_sum(&self, other: &Complex) -> Complex {
        assert_eq!(self.field, other.field);
        if self.space.is_zero() && self.space.dims.is_empty() {
            return other.clone();
        }
        if other.space.is_zero() && other.space.dims.is_empty() {
            return self.clone();
        }
        let min = self.space.min_degree.min(other.space.min_degree);
        let max = self.space.max_degree().max(other.space.max_degree());
        let mut dims = Vec::new();
        for d in min..=max {
            dims.push(self.dim(d) + other.dim(d));
        }
        let space = GradedSpace::new(min, dims);
        let mut diffs = BTreeMap::new();
        for d in min..=max {
            let a = self.differential(d);
            let b = other.differential(d);
            let mut m = Matrix::zero(self.field, a.rows() + b.rows(), a.cols() + b.cols());
            m.paste(0, 0, &a);
            m.paste(a.rows(), a.cols(), &b);
            diffs.insert(d, m);
        }
        Complex::new(self.field, space, diffs).expect("sum shapes")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HomologyWindow {
    /// All homology vanishes.
    Trivial,
    Window { inf: i64, sup: i64, amp: i64 },
}

impl HomologyWindow {
    pub fn amplitude(&self) -> Option<i64> {
        match self {
            HomologyWindow::Trivial => None,
            HomologyWindow::Window { amp, .. } => Some(*amp),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ComplexReport {
    pub failures: Vec<String>,
}

impl ComplexReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A linear quotient `V -> V/S` with a chosen section. `projection` maps
/// old coordinates to quotient coordinates; `section` picks representative
/// vectors (the non-pivot unit vectors of a row-echelon basis of `S`).
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientMap {
    pub projection: Matrix,
    pub section: Matrix,
}

impl QuotientMap {
    pub fn by_subspace(field: FieldSpec, dim: usize, spanning: &[Vector]) -> QuotientMap {
        let rows: Vec<Vector> = spanning.to_vec();
        let mat = if rows.is_empty() {
            Matrix::zero(field, 0, dim)
        } else {
            cols_to_matrix(field, dim, &rows).transpose()
        };
        let (r, pivots) = mat.rref();
        let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
        // projection: reduce v by the echelon rows, then read free coords
        let mut projection = Matrix::zero(field, free.len(), dim);
        for (qi, &fc) in free.iter().enumerate() {
            projection.set(qi, fc, field.one());
            // unit vector at a pivot column reduces to minus the row's free part
            for (ri, &pc) in pivots.iter().enumerate() {
                let coef = r.get(ri, fc).neg();
                if !coef.is_zero() {
                    projection.set(qi, pc, coef);
                }
            }
        }
        let mut section = Matrix::zero(field, dim, free.len());
        for (qi, &fc) in free.iter().enumerate() {
            section.set(fc, qi, field.one());
        }
        QuotientMap {
            projection,
            section,
        }
    }

    pub fn quotient_dim(&self) -> usize {
        self.projection.rows()
    }
}

/// A degree-`shift` graded map between complexes, stored blockwise.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub shift: i64,
    blocks: BTreeMap<i64, Matrix>,
}

impl GradedMap {
    pub fn new(shift: i64) -> Self {
        GradedMap {
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn from_blocks(shift: i64, blocks: BTreeMap<i64, Matrix>) -> Self {
        GradedMap { shift, blocks }
    }

    pub fn identity(c: &Complex) -> Self {
        let mut blocks = BTreeMap::new();
        for d in c.space.degrees() {
            blocks.insert(d, Matrix::identity(c.field, c.dim(d)));
        }
        GradedMap { shift: 0, blocks }
    }

    pub fn set_block(&mut self, degree: i64, m: Matrix) {
        self.blocks.insert(degree, m);
    }

    /// Block `source_degree -> source_degree + shift`; zero-shaped when
    /// missing.
    pub fn block(&self, field: FieldSpec, src: &Complex, tgt: &Complex, degree: i64) -> Matrix {
        match self.blocks.get(&degree) {
            Some(m) => m.clone(),
            None => Matrix::zero(field, tgt.dim(degree + self.shift), src.dim(degree)),
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.blocks.keys().copied()
    }
}

/// Verifies `f` is a chain map `a -> b` of degree 0 and checks whether the
/// induced maps on homology are isomorphisms in every degree.
pub fn is_quasiiso(f: &GradedMap, a: &Complex, b: &Complex) -> Result<bool> {
    check_chain_map(f, a, b)?;
    let min = a.space.min_degree.min(b.space.min_degree);
    let max = a.space.max_degree().max(b.space.max_degree());
    for d in min..=max {
        let ha = HomologyBasis::new(a, d);
        let hb = HomologyBasis::new(b, d);
        if ha.dim() != hb.dim() {
            return Ok(false);
        }
        let induced = induced_homology_map(f, a, b, d);
        if induced.rank() != ha.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_chain_map(f: &GradedMap, a: &Complex, b: &Complex) -> Result<()> {
    assert_eq!(f.shift, 0, "quasiisomorphism checks expect degree-0 maps");
    let min = a.space.min_degree.min(b.space.min_degree);
    let max = a.space.max_degree().max(b.space.max_degree());
    for d in min..=max {
        let blk = f.block(a.field, a, b, d);
        if (blk.rows(), blk.cols()) != (b.dim(d), a.dim(d)) {
            return Err(Error::NotChainMap {
                degree: d,
                detail: format!(
                    "block shape {}x{}, expected {}x{}",
                    blk.rows(),
                    blk.cols(),
                    b.dim(d),
                    a.dim(d)
                ),
            });
        }
    }
    for d in min..=max {
        let lhs = b.differential(d).mul(&f.block(a.field, a, b, d));
        let rhs = f.block(a.field, a, b, d - 1).mul(&a.differential(d));
        if lhs != rhs {
            return Err(Error::NotChainMap {
                degree: d,
                detail: "f∘d != d∘f".into(),
            });
        }
    }
    Ok(())
}

/// The induced matrix `H_d(a) -> H_d(b)` in the chosen homology bases.
pub fn induced_homology_map(f: &GradedMap, a: &Complex, b: &Complex, d: i64) -> Matrix {
    let ha = HomologyBasis::new(a, d);
    let hb = HomologyBasis::new(b, d + f.shift);
    let fa = f.block(a.field, a, b, d);
    let mut out = Matrix::zero(a.field, hb.dim(), ha.dim());
    for (i, cyc) in ha.representatives().iter().enumerate() {
        let img = fa.apply(cyc);
        let coords = hb
            .reduce(&img)
            .expect("chain map sends cycles to cycles");
        out.set_col(i, &coords);
    }
    out
}

/// A chosen basis of `H_d = ker d_d / im d_{d+1}` with reduction of
/// arbitrary cycles to coordinates.
pub struct HomologyBasis {
    /// columns span the cycles
    cycles: Matrix,
    /// boundaries written in cycle coordinates, row-echelon form
    boundary_rref: Matrix,
    boundary_pivots: Vec<usize>,
    free: Vec<usize>,
}

impl HomologyBasis {
    pub fn new(c: &Complex, d: i64) -> Self {
        Self::from_matrices(&c.differential(d), &c.differential(d + 1))
    }

    /// `ker(out) / im(into)` for a composable pair with `out ∘ into = 0`.
    pub fn from_matrices(out: &Matrix, into: &Matrix) -> Self {
        let field = out.field();
        let z = out.kernel_basis();
        let cycles = cols_to_matrix(field, out.cols(), &z);
        let mut bcols = Vec::new();
        for col in 0..into.cols() {
            let bvec = into.col(col);
            let coords = cycles
                .solve(&bvec)
                .expect("shape ok")
                .expect("boundaries are cycles in a valid complex");
            bcols.push(coords);
        }
        let bmat = cols_to_matrix(field, z.len(), &bcols).transpose();
        let (boundary_rref, boundary_pivots) = bmat.rref();
        let free = (0..z.len())
            .filter(|i| !boundary_pivots.contains(i))
            .collect();
        HomologyBasis {
            cycles,
            boundary_rref,
            boundary_pivots,
            free,
        }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Cycle vectors representing the chosen homology basis.
    pub fn representatives(&self) -> Vec<Vector> {
        self.free.iter().map(|&i| self.cycles.col(i)).collect()
    }

    /// Coordinates of a cycle's class, `None` if `v` is not a cycle.
    pub fn reduce(&self, v: &[Scalar]) -> Option<Vector> {
        let mut coords = self.cycles.solve(v).expect("shape ok")?;
        for (ri, &pc) in self.boundary_pivots.iter().enumerate() {
            let c = coords[pc].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..coords.len() {
                let delta = c.mul(self.boundary_rref.get(ri, j));
                coords[j] = coords[j].sub(&delta);
            }
        }
        Some(self.free.iter().map(|&i| coords[i].clone()).collect())
    }
}

/// `Hom(a, b)` with `∂(f) = d_b ∘ f - (-1)^{|f|} f ∘ d_a`.
///
/// Degree-`n` component: `⊕_i Hom(a_i, b_{i+n})`, laid out by ascending `i`
/// and row-major within each block. The returned layout allows converting
/// between flat coordinates and blocks.
pub fn hom_complex(a: &Complex, b: &Complex) -> (Complex, HomLayout) {
    assert_eq!(a.field, b.field);
    let field = a.field;
    let min = b.space.min_degree - a.space.max_degree();
    let max = b.space.max_degree() - a.space.min_degree;
    let layout = HomLayout::new(a, b, min, max);
    let mut dims = Vec::new();
    for n in min..=max {
        dims.push(layout.dim(n));
    }
    let space = GradedSpace::new(min, dims);
    let mut diffs = BTreeMap::new();
    for n in min..=max {
        let sign = field.sign(n);
        let mut m = Matrix::zero(field, layout.dim(n - 1), layout.dim(n));
        // basis element: block i, target row t, source col s
        for &(i, t, s) in layout.basis(n).iter() {
            let colidx = layout.index(n, i, t, s);
            // d_b ∘ f: component at block i, entries d_b[t', t]
            let db = b.differential(i + n);
            for tp in 0..db.rows() {
                let v = db.get(tp, t);
                if !v.is_zero() {
                    if let Some(row) = layout.try_index(n - 1, i, tp, s) {
                        let cur = m.get(row, colidx).add(v);
                        m.set(row, colidx, cur);
                    }
                }
            }
            // -(-1)^n f ∘ d_a: block i+1... careful: (f∘d_a) has component
            // at source degree j mapping a_j -> a_{j-1} -> b_{j-1+n}; our f
            // lives in block i, so it contributes to block j = i+1.
            let da = a.differential(i + 1);
            for sp in 0..da.cols() {
                let v = da.get(s, sp);
                if !v.is_zero() {
                    if let Some(row) = layout.try_index(n - 1, i + 1, t, sp) {
                        let delta = sign.mul(v);
                        let cur = m.get(row, colidx).sub(&delta);
                        m.set(row, colidx, cur);
                    }
                }
            }
        }
        diffs.insert(n, m);
    }
    let cx = Complex::new(field, space, diffs).expect("hom shapes");
    (cx, layout)
}

/// Layout of `Hom(a, b)` basis elements.
#[derive(Clone, Debug)]
pub struct HomLayout {
    /// for each hom-degree n: list of (source degree i, target row t, source col s)
    basis: BTreeMap<i64, Vec<(i64, usize, usize)>>,
    index: BTreeMap<(i64, i64, usize, usize), usize>,
}

impl HomLayout {
    fn new(a: &Complex, b: &Complex, min: i64, max: i64) -> Self {
        let mut basis = BTreeMap::new();
        let mut index = BTreeMap::new();
        for n in min..=max {
            let mut list = Vec::new();
            for i in a.space.degrees() {
                let sd = a.dim(i);
                let td = b.dim(i + n);
                for t in 0..td {
                    for s in 0..sd {
                        index.insert((n, i, t, s), list.len());
                        list.push((i, t, s));
                    }
                }
            }
            basis.insert(n, list);
        }
        HomLayout { basis, index }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.basis.get(&n).map_or(0, |v| v.len())
    }

    pub fn basis(&self, n: i64) -> &[(i64, usize, usize)] {
        self.basis.get(&n).map_or(&[], |v| v.as_slice())
    }

    pub fn index(&self, n: i64, i: i64, t: usize, s: usize) -> usize {
        self.index[&(n, i, t, s)]
    }

    pub fn try_index(&self, n: i64, i: i64, t: usize, s: usize) -> Option<usize> {
        self.index.get(&(n, i, t, s)).copied()
    }

    /// Flatten per-degree blocks (maps `a_i -> b_{i+n}`) into coordinates.
    pub fn flatten(&self, n: i64, blocks: &BTreeMap<i64, Matrix>, field: FieldSpec) -> Vector {
        let mut v = vec![field.zero(); self.dim(n)];
        for (key, &pos) in self.index.iter() {
            let (nn, deg, t, s) = *key;
            if nn != n {
                continue;
            }
            if let Some(mb) = blocks.get(&deg) {
                if t < mb.rows() && s < mb.cols() {
                    v[pos] = mb.get(t, s).clone();
                }
            }
        }
        v
    }

    /// Unflatten coordinates into per-degree blocks.
    pub fn unflatten(
        &self,
        n: i64,
        v: &[Scalar],
        a: &Complex,
        b: &Complex,
    ) -> BTreeMap<i64, Matrix> {
        let mut out = BTreeMap::new();
        for i in a.space.degrees() {
            out.insert(i, Matrix::zero(a.field, b.dim(i + n), a.dim(i)));
        }
        for (pos, &(i, t, s)) in self.basis(n).iter().enumerate() {
            if !v[pos].is_zero() {
                out.get_mut(&i).unwrap().set(t, s, v[pos].clone());
            }
        }
        out
    }
}

/// `a ⊗ b` with `∂(x⊗y) = ∂x⊗y + (-1)^{|x|} x⊗∂y`.
///
/// Degree-`n` component: `⊕_i a_i ⊗ b_{n-i}` by ascending `i`, index
/// `s * dim(b_{n-i}) + t` within the block.
pub fn tensor_complex(a: &Complex, b: &Complex) -> (Complex, TensorLayout) {
    assert_eq!(a.field, b.field);
    let field = a.field;
    let min = a.space.min_degree + b.space.min_degree;
    let max = a.space.max_degree() + b.space.max_degree();
    let layout = TensorLayout::new(a, b, min, max);
    let mut dims = Vec::new();
    for n in min..=max {
        dims.push(layout.dim(n));
    }
    let space = GradedSpace::new(min, dims);
    let mut diffs = BTreeMap::new();
    for n in min..=max {
        let mut m = Matrix::zero(field, layout.dim(n - 1), layout.dim(n));
        for (pos, &(i, s, t)) in layout.basis(n).iter().enumerate() {
            // ∂x ⊗ y
            let da = a.differential(i);
            for sp in 0..da.rows() {
                let v = da.get(sp, s);
                if !v.is_zero() {
                    if let Some(row) = layout.try_index(n - 1, i - 1, sp, t) {
                        let cur = m.get(row, pos).add(v);
                        m.set(row, pos, cur);
                    }
                }
            }
            // (-1)^{|x|} x ⊗ ∂y
            let sign = field.sign(i);
            let db = b.differential(n - i);
            for tp in 0..db.rows() {
                let v = db.get(tp, t);
                if !v.is_zero() {
                    if let Some(row) = layout.try_index(n - 1, i, s, tp) {
                        let cur = m.get(row, pos).add(&sign.mul(v));
                        m.set(row, pos, cur);
                    }
                }
            }
        }
        diffs.insert(n, m);
    }
    let cx = Complex::new(field, space, diffs).expect("tensor shapes");
    (cx, layout)
}

#[derive(Clone, Debug)]
pub struct TensorLayout {
    basis: BTreeMap<i64, Vec<(i64, usize, usize)>>,
    index: BTreeMap<(i64, i64, usize, usize), usize>,
}

impl TensorLayout {
    fn new(a: &Complex, b: &Complex, min: i64, max: i64) -> Self {
        let mut basis = BTreeMap::new();
        let mut index = BTreeMap::new();
        for n in min..=max {
            let mut list = Vec::new();
            for i in a.space.degrees() {
                let ad = a.dim(i);
                let bd = b.dim(n - i);
                for s in 0..ad {
                    for t in 0..bd {
                        index.insert((n, i, s, t), list.len());
                        list.push((i, s, t));
                    }
                }
            }
            basis.insert(n, list);
        }
        TensorLayout { basis, index }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.basis.get(&n).map_or(0, |v| v.len())
    }

    pub fn basis(&self, n: i64) -> &[(i64, usize, usize)] {
        self.basis.get(&n).map_or(&[], |v| v.as_slice())
    }

    pub fn index(&self, n: i64, i: i64, s: usize, t: usize) -> usize {
        self.index[&(n, i, s, t)]
    }

    pub fn try_index(&self, n: i64, i: i64, s: usize, t: usize) -> Option<usize> {
        self.index.get(&(n, i, s, t)).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    /// `F --1--> F` in degrees 1, 0.
    fn unit_interval(field: FieldSpec) -> Complex {
        let mut d = BTreeMap::new();
        d.insert(1, Matrix::identity(field, 1));
        Complex::new(field, GradedSpace::new(0, vec![1, 1]), d).unwrap()
    }

    /// Koszul complex on x over F_2[x]/(x^2) as a bare complex: two copies
    /// of R (dim 2 each) in degrees 1, 0 with d_1 = multiplication by x.
    fn koszul_x_complex() -> Complex {
        let mut d = BTreeMap::new();
        d.insert(1, Matrix::from_i64(f2(), &[&[0, 0], &[1, 0]]));
        Complex::new(f2(), GradedSpace::new(0, vec![2, 2]), d).unwrap()
    }

    #[test]
    fn validate_cases() {
        let q = FieldSpec::rationals();
        assert!(Complex::zero_complex(q).validate().is_valid());
        assert!(unit_interval(q).validate().is_valid());

        // two composable identity differentials: invalid at the middle degree
        let mut d = BTreeMap::new();
        d.insert(1, Matrix::identity(q, 1));
        d.insert(2, Matrix::identity(q, 1));
        let bad = Complex::new(q, GradedSpace::new(0, vec![1, 1, 1]), d).unwrap();
        let report = bad.validate();
        assert!(!report.is_valid());
        assert!(report.failures.iter().any(|s| s.contains("d_1 ∘ d_2")));
    }

    #[test]
    fn homology_contractible_and_zero_differential() {
        let q = FieldSpec::rationals();
        let h = unit_interval(q).homology_dims();
        assert!(h.values().all(|&v| v == 0));
        assert_eq!(unit_interval(q).homology_window(), HomologyWindow::Trivial);

        let c = Complex::new(q, GradedSpace::new(0, vec![2, 3]), BTreeMap::new()).unwrap();
        let h = c.homology_dims();
        assert_eq!(h[&0], 2);
        assert_eq!(h[&1], 3);
    }

    #[test]
    fn homology_of_koszul_on_dual_numbers() {
        // Oracle: kernel/image of multiplication by x on F_2[x]/(x^2):
        // ker = (x) has dim 1, im = (x) has dim 1, so H_0 = 2-1 = 1,
        // H_1 = 1-0 = 1.
        let k = koszul_x_complex();
        assert!(k.validate().is_valid());
        let mx = Matrix::from_i64(f2(), &[&[0, 0], &[1, 0]]);
        let ker = mx.kernel_basis().len();
        let im = mx.rank();
        assert_eq!((ker, im), (1, 1));
        let h = k.homology_dims();
        assert_eq!(h[&0], 2 - im);
        assert_eq!(h[&1], ker);
        assert_eq!(
            k.homology_window(),
            HomologyWindow::Window {
                inf: 0,
                sup: 1,
                amp: 1
            }
        );
    }

    #[test]
    fn inf_sup_amp_module_in_degree_zero() {
        let q = FieldSpec::rationals();
        let c = Complex::concentrated(q, 0, 3);
        assert_eq!(
            c.homology_window(),
            HomologyWindow::Window {
                inf: 0,
                sup: 0,
                amp: 0
            }
        );
    }

    #[test]
    fn shift_signs_and_involution() {
        let q = FieldSpec::rationals();
        let c = unit_interval(q);
        let s0 = c.shift(0);
        assert_eq!(s0, c);
        let s1 = c.shift(1);
        // degrees 2 -> 1 with differential -1
        assert_eq!(s1.differential(2), Matrix::from_i64(q, &[&[-1]]));
        let back = s1.shift(-1);
        assert_eq!(back, c);
    }

    #[test]
    fn shift_commutes_with_homology() {
        let k = koszul_x_complex();
        let s = k.shift(3);
        let hk = k.homology_dims();
        let hs = s.homology_dims();
        for (d, v) in hk {
            assert_eq!(hs[&(d + 3)], v);
        }
    }

    #[test]
    fn soft_truncate_cases() {
        let q = FieldSpec::rationals();
        // truncation above the top with zero incoming differential: unchanged below
        let c = Complex::new(q, GradedSpace::new(0, vec![2, 3]), BTreeMap::new()).unwrap();
        let (t, _) = c.soft_truncate(5);
        for d in 0..=1 {
            assert_eq!(t.dim(d), c.dim(d));
        }
        assert_eq!(t.dim(5), 0);

        // truncating the Koszul complex at 0: cokernel of d_1 (oracle: R/(x) has dim 1)
        let k = koszul_x_complex();
        let (t, _) = k.soft_truncate(0);
        assert_eq!(t.dim(0), 1);
        assert_eq!(t.dim(1), 0);

        // truncation at n >= sup preserves homology in degrees <= n
        let (t, _) = k.soft_truncate(1);
        assert_eq!(t.homology_dims()[&0], k.homology_dims()[&0]);
        assert_eq!(t.homology_dims()[&1], k.homology_dims()[&1]);
    }

    #[test]
    fn hom_and_tensor_small_cases() {
        let q = FieldSpec::rationals();
        let pt = Complex::concentrated(q, 0, 1);
        let (h, _) = hom_complex(&pt, &pt);
        assert_eq!(h.dim(0), 1);
        assert_eq!(h.space.total_dim(), 1);

        let k = koszul_x_complex();
        let unit = Complex::concentrated(f2(), 0, 1);
        let (t, _) = tensor_complex(&k, &unit);
        assert_eq!(t.dim(0), k.dim(0));
        assert_eq!(t.dim(1), k.dim(1));
        assert_eq!(t.differential(1), k.differential(1));
    }

    #[test]
    fn tensor_dimension_count() {
        let q = FieldSpec::rationals();
        let a = Complex::new(q, GradedSpace::new(0, vec![2, 1]), BTreeMap::new()).unwrap();
        let b = Complex::new(q, GradedSpace::new(-1, vec![1, 3]), BTreeMap::new()).unwrap();
        let (t, _) = tensor_complex(&a, &b);
        for n in t.space.degrees() {
            let expected: usize = a
                .space
                .degrees()
                .map(|i| a.dim(i) * b.dim(n - i))
                .sum();
            assert_eq!(t.dim(n), expected);
        }
    }

    #[test]
    fn hom_tensor_differentials_square_to_zero_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let field = if rng.gen_bool(0.5) {
                FieldSpec::rationals()
            } else {
                f2()
            };
            let c1 = random_complex(&mut rng, field);
            let c2 = random_complex(&mut rng, field);
            let (h, _) = hom_complex(&c1, &c2);
            assert!(h.validate().is_valid(), "hom d^2 != 0");
            let (t, _) = tensor_complex(&c1, &c2);
            assert!(t.validate().is_valid(), "tensor d^2 != 0");
        }
    }

    fn random_complex(rng: &mut impl rand::Rng, field: FieldSpec) -> Complex {
        // two adjacent degrees with a random map, then a compatible kernel map below
        let a = rng.gen_range(1..3usize);
        let b = rng.gen_range(1..3usize);
        let c = rng.gen_range(1..3usize);
        let mut d2 = Matrix::zero(field, b, a);
        for r in 0..b {
            for cc in 0..a {
                d2.set(r, cc, field.from_i64(rng.gen_range(-2..3)));
            }
        }
        // choose d1 with d1*d2 = 0: rows of d1 from kernel of d2^T... simpler:
        // d1 := random map composed with projection onto a complement of im(d2).
        // Here we just solve: pick random rows in the left kernel of d2.
        let left_kernel = d2.transpose().kernel_basis();
        let mut d1 = Matrix::zero(field, c, b);
        for r in 0..c {
            if let Some(v) = left_kernel.first() {
                let coef = field.from_i64(rng.gen_range(-2..3));
                for (j, e) in v.iter().enumerate() {
                    d1.set(r, j, e.mul(&coef));
                }
            }
        }
        let mut diffs = BTreeMap::new();
        diffs.insert(2, d2);
        diffs.insert(1, d1);
        Complex::new(field, GradedSpace::new(0, vec![c, b, a]), diffs).unwrap()
    }

    #[test]
    fn euler_characteristic_matches_homology() {
        let k = koszul_x_complex();
        let eu: i64 = k.euler_characteristic();
        let h = k.homology_dims();
        let eh: i64 = h
            .iter()
            .map(|(&d, &v)| if d.rem_euclid(2) == 0 { v as i64 } else { -(v as i64) })
            .sum();
        assert_eq!(eu, eh);
    }

    #[test]
    fn quasiiso_cases() {
        let q = FieldSpec::rationals();
        let k = koszul_x_complex();
        let id = GradedMap::identity(&k);
        assert!(is_quasiiso(&id, &k, &k).unwrap());

        // zero map between contractible complexes
        let u = unit_interval(q);
        let z = GradedMap::new(0);
        assert!(is_quasiiso(&z, &u, &u).unwrap());

        // augmentation K -> F is not a quasiiso (H_1(K) != 0)
        let pt = Complex::concentrated(f2(), 0, 1);
        let mut aug = GradedMap::new(0);
        aug.set_block(0, Matrix::from_i64(f2(), &[&[1, 0]]));
        assert!(!is_quasiiso(&aug, &k, &pt).unwrap());

        // non-chain-map errors out with the failing degree
        let mut bad = GradedMap::new(0);
        bad.set_block(0, Matrix::from_i64(f2(), &[&[1, 1]]));
        let err = is_quasiiso(&bad, &k, &pt).unwrap_err();
        assert!(matches!(err, Error::NotChainMap { degree: 1, .. }));
    }

    #[test]
    fn quotient_map_projects_and_sections() {
        let q = FieldSpec::rationals();
        let sub = vec![vec![q.one(), q.one(), q.zero()]];
        let qm = QuotientMap::by_subspace(q, 3, &sub);
        assert_eq!(qm.quotient_dim(), 2);
        // proj ∘ section = identity on the quotient
        assert_eq!(
            qm.projection.mul(&qm.section),
            Matrix::identity(q, 2)
        );
        // the subspace dies
        let img = qm.projection.apply(&sub[0]);
        assert!(img.iter().all(|s| s.is_zero()));
    }
}
