//! DG modules over a fixed DG algebra: a graded space `W`, a differential,
//! and action tensors `U_i ⊗ W_j -> W_{i+j}` satisfying the Leibniz rule,
//! associativity, and unitality. Modules may live in negative degrees.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{AlgebraMorphism, DGAlgebra};
use crate::complex::{
    hom_complex, tensor_complex, Complex, GradedMap, GradedSpace, HomLayout, QuotientMap,
    TensorLayout,
};
use crate::error::{Error, Result};
use crate::matrix::{cols_to_matrix, unit_vec, zero_vec, Matrix, Vector};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Clone, Debug)]
pub struct DGModule {
    pub algebra: Arc<DGAlgebra>,
    pub complex: Complex,
    /// `action[(i,j)]`: U_i ⊗ W_j -> W_{i+j}, column index `a * r_j + w`.
    action: BTreeMap<(i64, i64), Matrix>,
}

impl DGModule {
    pub fn new(
        algebra: Arc<DGAlgebra>,
        complex: Complex,
        action: BTreeMap<(i64, i64), Matrix>,
    ) -> Result<Self> {
        if complex.field != algebra.field() {
            return Err(Error::FieldMismatch(
                algebra.field().to_string(),
                complex.field.to_string(),
            ));
        }
        let m = DGModule {
            algebra,
            complex,
            action,
        };
        for ((i, j), mv) in &m.action {
            let expect = (m.dim(i + j), m.algebra.dim(*i) * m.dim(*j));
            if (mv.rows(), mv.cols()) != expect {
                return Err(Error::DimensionMismatch(format!(
                    "action tensor ({i},{j}) has shape {}x{}, expected {}x{}",
                    mv.rows(),
                    mv.cols(),
                    expect.0,
                    expect.1
                )));
            }
        }
        Ok(m)
    }

    pub fn zero_module(algebra: Arc<DGAlgebra>) -> DGModule {
        let field = algebra.field();
        DGModule {
            algebra,
            complex: Complex::zero_complex(field),
            action: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.complex.field
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.complex.dim(degree)
    }

    pub fn total_dim(&self) -> usize {
        self.complex.space.total_dim()
    }

    pub fn action(&self, i: i64, j: i64) -> Matrix {
        match self.action.get(&(i, j)) {
            Some(m) => m.clone(),
            None => Matrix::zero(
                self.field(),
                self.dim(i + j),
                self.algebra.dim(i) * self.dim(j),
            ),
        }
    }

    pub fn set_action(&mut self, i: i64, j: i64, m: Matrix) {
        assert_eq!(
            (m.rows(), m.cols()),
            (self.dim(i + j), self.algebra.dim(i) * self.dim(j))
        );
        self.action.insert((i, j), m);
    }

    /// Multiplication by the algebra basis element `(i, a)`: W_j -> W_{i+j}.
    pub fn act_by_basis(&self, i: i64, a: usize, j: i64) -> Matrix {
        let m = self.action(i, j);
        let rj = self.dim(j);
        let mut out = Matrix::zero(self.field(), self.dim(i + j), rj);
        for w in 0..rj {
            out.set_col(w, &m.col(a * rj + w));
        }
        out
    }

    /// Multiplication by an arbitrary element `x` in U_i.
    pub fn act_by(&self, i: i64, x: &[Scalar], j: i64) -> Matrix {
        let mut out = Matrix::zero(self.field(), self.dim(i + j), self.dim(j));
        for (a, coef) in x.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            out = out.add(&self.act_by_basis(i, a, j).scale(coef));
        }
        out
    }

    /// Axioms on every basis pair/triple, reported with their location.
    pub fn validate(&self) -> ModuleReport {
        let mut failures = Vec::new();
        let cx = self.complex.validate();
        failures.extend(cx.failures.iter().map(|f| format!("complex: {f}")));

        let field = self.field();
        let q = self.algebra.top_degree();
        let degrees: Vec<i64> = self.complex.space.degrees().collect();

        // Leibniz: d ∘ μ_{i,j} = μ_{i-1,j} ∘ (dU_i ⊗ 1) + (-1)^i μ_{i,j-1} ∘ (1 ⊗ dW_j)
        for i in 0..=q {
            for &j in &degrees {
                if self.algebra.dim(i) == 0 || self.dim(j) == 0 {
                    continue;
                }
                let lhs = self.complex.differential(i + j).mul(&self.action(i, j));
                let t1 = self.action(i - 1, j).mul(
                    &self
                        .algebra
                        .complex
                        .differential(i)
                        .kron(&Matrix::identity(field, self.dim(j))),
                );
                let t2 = self
                    .action(i, j - 1)
                    .mul(
                        &Matrix::identity(field, self.algebra.dim(i))
                            .kron(&self.complex.differential(j)),
                    )
                    .scale(&field.sign(i));
                if lhs != t1.add(&t2) {
                    failures.push(format!("Leibniz fails on U_{i} ⊗ W_{j}"));
                }
            }
        }

        // associativity: (ab)w = a(bw)
        for i in 0..=q {
            for p in 0..=q {
                if i + p > q {
                    continue;
                }
                for &j in &degrees {
                    if self.algebra.dim(i) * self.algebra.dim(p) * self.dim(j) == 0 {
                        continue;
                    }
                    let lhs = self.action(i + p, j).mul(
                        &self
                            .algebra
                            .mult(i, p)
                            .kron(&Matrix::identity(field, self.dim(j))),
                    );
                    let rhs = self.action(i, p + j).mul(
                        &Matrix::identity(field, self.algebra.dim(i)).kron(&self.action(p, j)),
                    );
                    if lhs != rhs {
                        failures.push(format!("associativity fails on U_{i} ⊗ U_{p} ⊗ W_{j}"));
                    }
                }
            }
        }

        // unitality: 1 · w = w
        for &j in &degrees {
            let rj = self.dim(j);
            if rj == 0 {
                continue;
            }
            for w in 0..rj {
                let mut acc = zero_vec(field, rj);
                for (a, coef) in self.algebra.unit.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let col = self.action(0, j).col(a * rj + w);
                    for (k, v) in col.iter().enumerate() {
                        acc[k] = acc[k].add(&v.mul(coef));
                    }
                }
                if acc != unit_vec(field, rj, w) {
                    failures.push(format!("unitality fails at W_{j} basis {w}"));
                }
            }
        }

        ModuleReport { failures }
    }

    /// Suspension `Σ^s M`: degrees shift by `s`, differential picks up
    /// `(-1)^s`, and the action of U_i picks up `(-1)^{s·i}`.
    pub fn shift(&self, s: i64) -> DGModule {
        let field = self.field();
        let complex = self.complex.shift(s);
        let mut action = BTreeMap::new();
        for ((i, j), m) in &self.action {
            action.insert((*i, j + s), m.scale(&field.sign(s * i)));
        }
        DGModule {
            algebra: Arc::clone(&self.algebra),
            complex,
            action,
        }
    }

    pub fn direct_sum(&self, other: &DGModule) -> DGModule {
        assert!(Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra);
        let field = self.field();
        let complex = self.complex.direct_sum(&other.complex);
        let q = self.algebra.top_degree();
        let mut action = BTreeMap::new();
        for j in complex.space.degrees() {
            for i in 0..=q {
                let (ra, rb) = (self.dim(j), other.dim(j));
                let (ta, tb) = (self.dim(i + j), other.dim(i + j));
                let ni = self.algebra.dim(i);
                if ni * (ra + rb) == 0 {
                    continue;
                }
                let ma = self.action(i, j);
                let mb = other.action(i, j);
                let mut m = Matrix::zero(field, ta + tb, ni * (ra + rb));
                for a in 0..ni {
                    for w in 0..ra {
                        let col = ma.col(a * ra + w);
                        for (k, v) in col.iter().enumerate() {
                            if !v.is_zero() {
                                m.set(k, a * (ra + rb) + w, v.clone());
                            }
                        }
                    }
                    for w in 0..rb {
                        let col = mb.col(a * rb + w);
                        for (k, v) in col.iter().enumerate() {
                            if !v.is_zero() {
                                m.set(ta + k, a * (ra + rb) + ra + w, v.clone());
                            }
                        }
                    }
                }
                action.insert((i, j), m);
            }
        }
        DGModule {
            algebra: Arc::clone(&self.algebra),
            complex,
            action,
        }
    }

    /// Soft truncation `τ(M)_{(≤ n)}` with the induced action, together with
    /// the canonical morphism `M -> τ(M)_{(≤ n)}`.
    pub fn truncate(&self, n: i64) -> (DGModule, DGModuleMorphism) {
        let field = self.field();
        let (tcx, qmap) = self.complex.soft_truncate(n);
        let q = self.algebra.top_degree();
        let mut action = BTreeMap::new();
        for j in tcx.space.degrees() {
            for i in 0..=q {
                if i + j > n || self.algebra.dim(i) * tcx.dim(j) == 0 {
                    continue;
                }
                let orig = self.action(i, j);
                let m = if j == n {
                    // sources are quotient classes: lift by the section
                    let lifted = orig.mul(
                        &Matrix::identity(field, self.algebra.dim(i)).kron(&qmap.section),
                    );
                    if i + j == n {
                        qmap.projection.mul(&lifted)
                    } else {
                        lifted
                    }
                } else if i + j == n {
                    qmap.projection.mul(&orig)
                } else {
                    orig
                };
                action.insert((i, j), m);
            }
        }
        let truncated = DGModule {
            algebra: Arc::clone(&self.algebra),
            complex: tcx,
            action,
        };
        debug_assert!(truncated.validate().is_valid(), "truncation broke axioms");
        let mut blocks = BTreeMap::new();
        for d in self.complex.space.degrees() {
            if d < n {
                blocks.insert(d, Matrix::identity(field, self.dim(d)));
            } else if d == n {
                blocks.insert(d, qmap.projection.clone());
            }
            // degrees above n map to zero
        }
        let morphism = DGModuleMorphism { blocks };
        (truncated, morphism)
    }
}

#[derive(Clone, Debug)]
pub struct ModuleReport {
    pub failures: Vec<String>,
}

impl ModuleReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A degree-0 morphism of DG modules: chain map + A-linearity.
#[derive(Clone, Debug)]
pub struct DGModuleMorphism {
    pub blocks: BTreeMap<i64, Matrix>,
}

impl DGModuleMorphism {
    pub fn identity(m: &DGModule) -> Self {
        let mut blocks = BTreeMap::new();
        for d in m.complex.space.degrees() {
            blocks.insert(d, Matrix::identity(m.field(), m.dim(d)));
        }
        DGModuleMorphism { blocks }
    }

    pub fn zero() -> Self {
        DGModuleMorphism {
            blocks: BTreeMap::new(),
        }
    }

    pub fn block(&self, source: &DGModule, target: &DGModule, d: i64) -> Matrix {
        self.blocks
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(source.field(), target.dim(d), source.dim(d)))
    }

    pub fn as_graded_map(&self) -> GradedMap {
        GradedMap::from_blocks(0, self.blocks.clone())
    }

    pub fn validate(&self, source: &DGModule, target: &DGModule) -> Result<()> {
        let field = source.field();
        let min = source.complex.space.min_degree.min(target.complex.space.min_degree);
        let max = source
            .complex
            .space
            .max_degree()
            .max(target.complex.space.max_degree());
        for d in min..=max {
            let lhs = target.complex.differential(d).mul(&self.block(source, target, d));
            let rhs = self
                .block(source, target, d - 1)
                .mul(&source.complex.differential(d));
            if lhs != rhs {
                return Err(Error::NotChainMap {
                    degree: d,
                    detail: "module morphism fails to commute with differentials".into(),
                });
            }
        }
        for i in 0..=source.algebra.top_degree() {
            for j in min..=max {
                let ni = source.algebra.dim(i);
                if ni * source.dim(j) == 0 {
                    continue;
                }
                let lhs = self
                    .block(source, target, i + j)
                    .mul(&source.action(i, j));
                let rhs = target.action(i, j).mul(
                    &Matrix::identity(field, ni).kron(&self.block(source, target, j)),
                );
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!(
                        "morphism not A-linear on U_{i} ⊗ W_{j}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Chain-map check plus homology isomorphism in every degree.
    pub fn is_quasiiso(&self, source: &DGModule, target: &DGModule) -> Result<bool> {
        self.validate(source, target)?;
        crate::complex::is_quasiiso(&self.as_graded_map(), &source.complex, &target.complex)
    }
}

/// `⊕_j Σ^{s_j} U` as a DG module, with suspension signs.
pub fn free_module(u: &Arc<DGAlgebra>, shifts: &[i64]) -> DGModule {
    let mut out = DGModule::zero_module(Arc::clone(u));
    for &s in shifts {
        let summand = crate::instances::regular_module(u).shift(s);
        out = if out.total_dim() == 0 && out.complex.space.dims.is_empty() {
            summand
        } else {
            out.direct_sum(&summand)
        };
    }
    out
}

/// A module that is free on an explicit semibasis: slot `t` carries a copy
/// of `U` shifted so its generator sits in degree `gen_degrees[t]`, the
/// action is the untwisted block action, and the differential is determined
/// by the generator boundaries via the Leibniz rule.
///
/// `W_n = ⊕_t U_{n - s_t}`, flat coordinates in slot order.
#[derive(Clone, Debug)]
pub struct SemifreeModule {
    pub algebra: Arc<DGAlgebra>,
    pub gen_degrees: Vec<i64>,
    /// boundary of generator `t`: coordinates in `W_{s_t - 1}` (final layout;
    /// zero vector for honest free modules).
    pub boundaries: Vec<Vector>,
    pub module: DGModule,
}

impl SemifreeModule {
    pub fn free(u: &Arc<DGAlgebra>, gen_degrees: &[i64]) -> SemifreeModule {
        let mut sf = SemifreeModule {
            algebra: Arc::clone(u),
            gen_degrees: Vec::new(),
            boundaries: Vec::new(),
            module: DGModule::zero_module(Arc::clone(u)),
        };
        for &d in gen_degrees {
            let bdim = sf.space_dim(d - 1);
            sf.gen_degrees.push(d);
            sf.boundaries.push(zero_vec(u.field(), bdim));
        }
        sf.rebuild();
        sf
    }

    /// Number of generators.
    pub fn gen_count(&self) -> usize {
        self.gen_degrees.len()
    }

    /// Dimension of `W_n` implied by the current generators.
    pub fn space_dim(&self, n: i64) -> usize {
        self.gen_degrees
            .iter()
            .map(|&s| self.algebra.dim(n - s))
            .sum()
    }

    /// Slots `(t, algebra degree, offset)` contributing to `W_n`.
    pub fn slots(&self, n: i64) -> Vec<(usize, i64, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for (t, &s) in self.gen_degrees.iter().enumerate() {
            let d = self.algebra.dim(n - s);
            if d > 0 {
                out.push((t, n - s, off));
            }
            off += d;
        }
        out
    }

    /// Flat coordinate of `u_b @ slot t` in `W_n`; `None` if out of range.
    pub fn index_of(&self, n: i64, t: usize, b: usize) -> Option<usize> {
        let mut off = 0;
        for (tt, &s) in self.gen_degrees.iter().enumerate() {
            let d = self.algebra.dim(n - s);
            if tt == t {
                return if b < d { Some(off + b) } else { None };
            }
            off += d;
        }
        None
    }

    /// Coordinate vector of generator `t` inside `W_{s_t}`.
    pub fn gen_vector(&self, t: usize) -> Vector {
        let field = self.algebra.field();
        let n = self.gen_degrees[t];
        let mut v = zero_vec(field, self.space_dim(n));
        // the generator is `1 @ t`; expand the unit in the U_0 basis
        for (b, coef) in self.algebra.unit.iter().enumerate() {
            if !coef.is_zero() {
                let idx = self.index_of(n, t, b).expect("unit slot");
                v[idx] = coef.clone();
            }
        }
        v
    }

    /// Adjoin a generator in `degree` whose boundary is the given cycle in
    /// the current `W_{degree-1}` coordinates. Earlier coordinates remain
    /// valid (slots are enumerated in insertion order).
    pub fn adjoin(&mut self, degree: i64, boundary: Vector) {
        assert_eq!(boundary.len(), self.space_dim(degree - 1));
        self.gen_degrees.push(degree);
        self.boundaries.push(boundary);
        self.rebuild();
    }

    /// Adjoin a batch, then rebuild once.
    pub fn adjoin_batch(&mut self, degree: i64, boundaries: Vec<Vector>) {
        let bdim = self.space_dim(degree - 1);
        for b in &boundaries {
            assert_eq!(b.len(), bdim);
        }
        for b in boundaries {
            self.gen_degrees.push(degree);
            self.boundaries.push(b);
        }
        self.rebuild();
    }

    fn rebuild(&mut self) {
        let field = self.algebra.field();
        let q = self.algebra.top_degree();
        if self.gen_degrees.is_empty() {
            self.module = DGModule::zero_module(Arc::clone(&self.algebra));
            return;
        }
        let min = *self.gen_degrees.iter().min().unwrap();
        let max = *self.gen_degrees.iter().max().unwrap() + q;
        let dims: Vec<usize> = (min..=max).map(|n| self.space_dim(n)).collect();
        let space = GradedSpace::new(min, dims);

        // action first: block per slot, untwisted copies of U's products
        let mut action = BTreeMap::new();
        for i in 0..=q {
            for j in min..=max {
                let ni = self.algebra.dim(i);
                let (rj, rt) = (self.space_dim(j), self.space_dim(i + j));
                if ni * rj == 0 || rt == 0 {
                    continue;
                }
                let mut m = Matrix::zero(field, rt, ni * rj);
                for (t, udeg, off) in self.slots(j) {
                    let nu = self.algebra.dim(udeg);
                    if self.algebra.dim(i + udeg) == 0 {
                        continue;
                    }
                    let target_off = self
                        .index_of(i + j, t, 0)
                        .expect("slot exists in target degree");
                    let mu = self.algebra.mult(i, udeg);
                    for a in 0..ni {
                        for b in 0..nu {
                            let prod = mu.col(a * nu + b);
                            let col = a * rj + off + b;
                            for (k, v) in prod.iter().enumerate() {
                                if !v.is_zero() {
                                    m.set(target_off + k, col, v.clone());
                                }
                            }
                        }
                    }
                }
                action.insert((i, j), m);
            }
        }

        // differential: ∂(u @ t) = (∂u) @ t + (-1)^{|u|} u · ∂(g_t)
        let mut tmp = DGModule {
            algebra: Arc::clone(&self.algebra),
            complex: Complex::new(field, space.clone(), BTreeMap::new()).expect("shape"),
            action,
        };
        let mut diffs = BTreeMap::new();
        for n in min..=max {
            let (rows, cols) = (self.space_dim(n - 1), self.space_dim(n));
            let mut m = Matrix::zero(field, rows, cols);
            for (t, udeg, off) in self.slots(n) {
                let nu = self.algebra.dim(udeg);
                let du = self.algebra.complex.differential(udeg);
                let sign = field.sign(udeg);
                // pad the recorded boundary to current coordinates
                let bd = {
                    let mut v = zero_vec(field, self.space_dim(self.gen_degrees[t] - 1));
                    for (k, s) in self.boundaries[t].iter().enumerate() {
                        v[k] = s.clone();
                    }
                    v
                };
                for b in 0..nu {
                    let col = off + b;
                    // (∂u) @ t
                    if self.algebra.dim(udeg - 1) > 0 {
                        if let Some(toff) = self.index_of(n - 1, t, 0) {
                            for k in 0..du.rows() {
                                let v = du.get(k, b);
                                if !v.is_zero() {
                                    let cur = m.get(toff + k, col).add(v);
                                    m.set(toff + k, col, cur);
                                }
                            }
                        }
                    }
                    // (-1)^{|u|} u · ∂(g_t): action of basis (udeg, b) on the
                    // boundary, landing in degree udeg + s_t - 1 = n - 1
                    if !bd.is_empty() {
                        let actm = tmp.act_by_basis(udeg, b, self.gen_degrees[t] - 1);
                        let img = actm.apply(&bd);
                        for (k, v) in img.iter().enumerate() {
                            if !v.is_zero() {
                                let cur = m.get(k, col).add(&sign.mul(v));
                                m.set(k, col, cur);
                            }
                        }
                    }
                }
            }
            diffs.insert(n, m);
        }
        tmp.complex = Complex::new(field, space, diffs).expect("semifree shapes");
        self.module = tmp;
    }

    /// Is the coordinate vector `v` in `m_U · W_n`? For a free layout this
    /// holds iff every degree-0 slot component lies in `m_0`.
    pub fn in_augmentation_times(&self, local: &crate::algebra::LocalStructure, n: i64, v: &[Scalar]) -> bool {
        for (_, udeg, off) in self.slots(n) {
            if udeg == 0 {
                let comp: Vector = (0..self.algebra.dim(0)).map(|b| v[off + b].clone()).collect();
                if !local.m0_contains(self.algebra.field(), &comp) {
                    return false;
                }
            }
        }
        true
    }

    /// Assemble the A-linear degree-`d` map `F -> N` determined by values on
    /// the semibasis: `f(u @ t) = (-1)^{d|u|} u · f(g_t)`.
    pub fn assemble_hom(&self, n: &DGModule, d: i64, gen_values: &[Vector]) -> GradedMap {
        assert_eq!(gen_values.len(), self.gen_count());
        let field = self.algebra.field();
        let mut map = GradedMap::new(d);
        let min = self.module.complex.space.min_degree;
        let max = self.module.complex.space.max_degree();
        for m in min..=max {
            let rows = n.dim(m + d);
            let cols = self.space_dim(m);
            let mut blk = Matrix::zero(field, rows, cols);
            if rows * cols > 0 {
                for (t, udeg, off) in self.slots(m) {
                    let sgn = field.sign(d * udeg);
                    let val_deg = self.gen_degrees[t] + d;
                    if n.dim(val_deg) == 0 {
                        continue;
                    }
                    for b in 0..self.algebra.dim(udeg) {
                        let img = n.act_by_basis(udeg, b, val_deg).apply(&gen_values[t]);
                        for (k, v) in img.iter().enumerate() {
                            if !v.is_zero() {
                                blk.set(k, off + b, sgn.mul(v));
                            }
                        }
                    }
                }
            }
            map.set_block(m, blk);
        }
        map
    }
}

/// Layout of `Hom_A(F, N)` for a semifree `F`: a degree-`d` element is
/// determined by its generator values, so the basis at degree `d` is
/// `(generator t, basis vector of N_{s_t + d})`.
#[derive(Clone, Debug)]
pub struct SemifreeHomLayout {
    pub basis: BTreeMap<i64, Vec<(usize, usize)>>,
    index: BTreeMap<(i64, usize, usize), usize>,
}

impl SemifreeHomLayout {
    pub fn dim(&self, d: i64) -> usize {
        self.basis.get(&d).map_or(0, |v| v.len())
    }

    pub fn index(&self, d: i64, t: usize, b: usize) -> Option<usize> {
        self.index.get(&(d, t, b)).copied()
    }

    /// Generator values encoded by a coordinate vector at degree `d`.
    pub fn gen_values(&self, f: &SemifreeModule, n: &DGModule, d: i64, v: &[Scalar]) -> Vec<Vector> {
        let field = f.algebra.field();
        let mut out: Vec<Vector> = (0..f.gen_count())
            .map(|t| zero_vec(field, n.dim(f.gen_degrees[t] + d)))
            .collect();
        for (pos, &(t, b)) in self.basis.get(&d).map_or([].as_slice(), |x| x.as_slice()).iter().enumerate() {
            if !v[pos].is_zero() {
                out[t][b] = v[pos].clone();
            }
        }
        out
    }
}

/// The complex `Hom_A(F, N)` for semifree `F`, in generator-value
/// coordinates, with `∂(f) = d_N ∘ f - (-1)^{|f|} f ∘ d_F`.
pub fn hom_from_semifree(f: &SemifreeModule, n: &DGModule) -> (Complex, SemifreeHomLayout) {
    let field = f.algebra.field();
    let (nmin, nmax) = (
        n.complex.space.min_degree,
        n.complex.space.max_degree(),
    );
    let (smin, smax) = if f.gen_count() == 0 {
        (0, -1)
    } else {
        (
            *f.gen_degrees.iter().min().unwrap(),
            *f.gen_degrees.iter().max().unwrap(),
        )
    };
    // degree range of generator-value data
    let dmin = nmin - smax;
    let dmax = nmax - smin;
    let mut basis = BTreeMap::new();
    let mut index = BTreeMap::new();
    for d in dmin..=dmax {
        let mut list = Vec::new();
        for (t, &s) in f.gen_degrees.iter().enumerate() {
            for b in 0..n.dim(s + d) {
                index.insert((d, t, b), list.len());
                list.push((t, b));
            }
        }
        basis.insert(d, list);
    }
    let layout = SemifreeHomLayout { basis, index };

    let dims: Vec<usize> = (dmin..=dmax).map(|d| layout.dim(d)).collect();
    let space = GradedSpace::new(dmin, dims);
    let mut diffs = BTreeMap::new();
    for d in dmin..=dmax {
        let mut m = Matrix::zero(field, layout.dim(d - 1), layout.dim(d));
        let sign = field.sign(d);
        for (pos, &(t, b)) in layout.basis[&d].iter().enumerate() {
            let s_t = f.gen_degrees[t];
            // d_N ∘ f at generator t
            let dn = n.complex.differential(s_t + d);
            for k in 0..dn.rows() {
                let v = dn.get(k, b);
                if !v.is_zero() {
                    if let Some(row) = layout.index(d - 1, t, k) {
                        let cur = m.get(row, pos).add(v);
                        m.set(row, pos, cur);
                    }
                }
            }
            // -(-1)^d f(∂ g_u) for every generator u whose boundary meets slot t
            for u in 0..f.gen_count() {
                let bd = &f.boundaries[u];
                if bd.is_empty() {
                    continue;
                }
                let bdeg = f.gen_degrees[u] - 1;
                // value of f on the boundary: pick out slot-t components
                for (tt, udeg, off) in f.slots(bdeg) {
                    if tt != t {
                        continue;
                    }
                    let nu = f.algebra.dim(udeg);
                    for ub in 0..nu {
                        let coef = match bd.get(off + ub) {
                            Some(c) if !c.is_zero() => c.clone(),
                            _ => continue,
                        };
                        // f(u_b @ t) = (-1)^{d·|u|} u_b · f(g_t)
                        let tw = field.sign(d * udeg);
                        let img = n
                            .act_by_basis(udeg, ub, s_t + d)
                            .col(b);
                        for (k, v) in img.iter().enumerate() {
                            if v.is_zero() {
                                continue;
                            }
                            if let Some(row) = layout.index(d - 1, u, k) {
                                let delta = sign.mul(&tw).mul(&coef).mul(v);
                                let cur = m.get(row, pos).sub(&delta);
                                m.set(row, pos, cur);
                            }
                        }
                    }
                }
            }
        }
        diffs.insert(d, m);
    }
    let cx = Complex::new(field, space, diffs).expect("hom shapes");
    (cx, layout)
}

/// The complex `F ⊗_A N` for semifree `F`: degree-`m` basis
/// `(generator t, basis vector of N_{m - s_t})`;
/// `∂(g⊗y) = ∂g ⊗ y + (-1)^{|g|} g ⊗ ∂y` with
/// `(u·g') ⊗ y = (-1)^{|u||g'|} g' ⊗ (u·y)`.
pub fn tensor_with_semifree(f: &SemifreeModule, n: &DGModule) -> (Complex, SemifreeHomLayout) {
    let field = f.algebra.field();
    let (nmin, nmax) = (n.complex.space.min_degree, n.complex.space.max_degree());
    let (smin, smax) = if f.gen_count() == 0 {
        (0, -1)
    } else {
        (
            *f.gen_degrees.iter().min().unwrap(),
            *f.gen_degrees.iter().max().unwrap(),
        )
    };
    let dmin = smin + nmin;
    let dmax = smax + nmax;
    let mut basis = BTreeMap::new();
    let mut index = BTreeMap::new();
    for m in dmin..=dmax {
        let mut list = Vec::new();
        for (t, &s) in f.gen_degrees.iter().enumerate() {
            for b in 0..n.dim(m - s) {
                index.insert((m, t, b), list.len());
                list.push((t, b));
            }
        }
        basis.insert(m, list);
    }
    let layout = SemifreeHomLayout { basis, index };
    let dims: Vec<usize> = (dmin..=dmax).map(|d| layout.dim(d)).collect();
    let space = GradedSpace::new(dmin, dims);
    let mut diffs = BTreeMap::new();
    for m in dmin..=dmax {
        let mut mat = Matrix::zero(field, layout.dim(m - 1), layout.dim(m));
        for (pos, &(t, b)) in layout.basis[&m].iter().enumerate() {
            let s_t = f.gen_degrees[t];
            // (-1)^{|g_t|} g_t ⊗ ∂y
            let sgn = field.sign(s_t);
            let dn = n.complex.differential(m - s_t);
            for k in 0..dn.rows() {
                let v = dn.get(k, b);
                if !v.is_zero() {
                    if let Some(row) = layout.index(m - 1, t, k) {
                        let cur = mat.get(row, pos).add(&sgn.mul(v));
                        mat.set(row, pos, cur);
                    }
                }
            }
            // ∂g_t ⊗ y = Σ coef (u @ t') ⊗ y = Σ coef (-1)^{|u| s_{t'}} g_{t'} ⊗ u·y
            let bd = &f.boundaries[t];
            if !bd.is_empty() {
                let bdeg = s_t - 1;
                for (tp, udeg, off) in f.slots(bdeg) {
                    let stp = f.gen_degrees[tp];
                    let tw = field.sign(udeg * stp);
                    for ub in 0..f.algebra.dim(udeg) {
                        let coef = match bd.get(off + ub) {
                            Some(c) if !c.is_zero() => c.clone(),
                            _ => continue,
                        };
                        let img = n.act_by_basis(udeg, ub, m - s_t).col(b);
                        for (k, v) in img.iter().enumerate() {
                            if v.is_zero() {
                                continue;
                            }
                            if let Some(row) = layout.index(m - 1, tp, k) {
                                let delta = tw.mul(&coef).mul(v);
                                let cur = mat.get(row, pos).add(&delta);
                                mat.set(row, pos, cur);
                            }
                        }
                    }
                }
            }
        }
        diffs.insert(m, mat);
    }
    let cx = Complex::new(field, space, diffs).expect("tensor shapes");
    (cx, layout)
}

/// `Hom_A(M, N)` computed as an explicit subcomplex of `Hom_F(M, N)`:
/// the A-linearity equations are a linear system whose kernel gives a basis
/// at each degree; the differential is the restriction.
pub struct HomDg {
    pub complex: Complex,
    /// columns: the chosen basis of each degree, in Hom_F coordinates
    pub basis: BTreeMap<i64, Matrix>,
    pub hom_f: Complex,
    pub layout: HomLayout,
}

impl HomDg {
    fn basis_at(&self, field: FieldSpec, d: i64) -> Matrix {
        self.basis
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(field, self.layout.dim(d), 0))
    }

    /// Materialize a coordinate vector at degree `d` as per-degree blocks.
    pub fn as_blocks(&self, m: &DGModule, n: &DGModule, d: i64, coords: &[Scalar]) -> BTreeMap<i64, Matrix> {
        let basis = self.basis_at(m.field(), d);
        let flat = basis.apply(coords);
        self.layout.unflatten(d, &flat, &m.complex, &n.complex)
    }

    /// Express a Hom_F coordinate vector in the subcomplex basis; `None`
    /// when the map is not A-linear.
    pub fn coords_of(&self, d: i64, flat: &[Scalar]) -> Option<Vector> {
        let field = self.complex.field;
        self.basis_at(field, d).solve(flat).expect("shape ok")
    }
}

pub fn hom_dg(m: &DGModule, n: &DGModule) -> HomDg {
    let field = m.field();
    let (hom_f, layout) = hom_complex(&m.complex, &n.complex);
    let q = m.algebra.top_degree();

    let mut basis = BTreeMap::new();
    let mut dims = Vec::new();
    let mut degree_list: Vec<i64> = hom_f.space.degrees().collect();
    if degree_list.is_empty() {
        degree_list = vec![0];
    }
    for &d in &degree_list {
        let hd = layout.dim(d);
        // constraint rows: for each (i, j), U_i ⊗ M_j -> N_{i+j+d}
        let mut rows = 0usize;
        let mut row_offsets: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for i in 0..=q {
            for j in m.complex.space.degrees() {
                let cnt = m.algebra.dim(i) * m.dim(j) * n.dim(i + j + d);
                if cnt > 0 {
                    row_offsets.insert((i, j), rows);
                    rows += cnt;
                }
            }
        }
        let mut sys = Matrix::zero(field, rows, hd);
        for (pos, &(jblk, t, s)) in layout.basis(d).iter().enumerate() {
            // LHS: f_{i+j} ∘ act^M_{i,j} with i + j = jblk
            for i in 0..=q {
                let j = jblk - i;
                let Some(&base) = row_offsets.get(&(i, j)) else { continue };
                let actm = m.action(i, j);
                let ncols = actm.cols();
                let tgt = n.dim(jblk + d);
                for colin in 0..ncols {
                    let v = actm.get(s, colin);
                    if !v.is_zero() {
                        let row = base + colin * tgt + t;
                        let cur = sys.get(row, pos).add(v);
                        sys.set(row, pos, cur);
                    }
                }
            }
            // RHS: (-1)^{d i} act^N_{i, j+d} ∘ (1 ⊗ f_j) with j = jblk
            for i in 0..=q {
                let j = jblk;
                let Some(&base) = row_offsets.get(&(i, j)) else { continue };
                let actn = n.action(i, j + d);
                let sgn = field.sign(d * i);
                let tgt = n.dim(i + j + d);
                let rj = m.dim(j);
                let nj = n.dim(j + d);
                for a in 0..m.algebra.dim(i) {
                    for out in 0..tgt {
                        let v = actn.get(out, a * nj + t);
                        if !v.is_zero() {
                            let row = base + (a * rj + s) * tgt + out;
                            let cur = sys.get(row, pos).sub(&sgn.mul(v));
                            sys.set(row, pos, cur);
                        }
                    }
                }
            }
        }
        let kernel = sys.kernel_basis();
        dims.push(kernel.len());
        basis.insert(d, cols_to_matrix(field, hd, &kernel));
    }

    let min = *degree_list.first().unwrap();
    let space = GradedSpace::new(min, dims);
    let mut diffs = BTreeMap::new();
    for &d in &degree_list {
        let bd = &basis[&d];
        let blo = basis
            .get(&(d - 1))
            .cloned()
            .unwrap_or_else(|| Matrix::zero(field, layout.dim(d - 1), 0));
        let big = hom_f.differential(d);
        let mut m2 = Matrix::zero(field, blo.cols(), bd.cols());
        for c in 0..bd.cols() {
            let img = big.apply(&bd.col(c));
            let coords = blo
                .solve(&img)
                .expect("shape ok")
                .expect("A-linear maps are closed under the differential");
            m2.set_col(c, &coords);
        }
        diffs.insert(d, m2);
    }
    let complex = Complex::new(field, space, diffs).expect("hom_dg shapes");
    HomDg {
        complex,
        basis,
        hom_f,
        layout,
    }
}

/// `M ⊗_A N`: the quotient of `M ⊗_F N` by the span of
/// `(am)⊗n - (-1)^{|a||m|} m⊗(an)`, with the induced differential and the
/// per-degree projections retained for composability.
pub struct TensorOverA {
    pub complex: Complex,
    pub quotients: BTreeMap<i64, QuotientMap>,
    pub tensor_f: Complex,
    pub layout: TensorLayout,
}

pub fn tensor_over_a(m: &DGModule, n: &DGModule) -> TensorOverA {
    let field = m.field();
    let (tensor_f, layout) = tensor_complex(&m.complex, &n.complex);
    let q = m.algebra.top_degree();

    // relation vectors per total degree
    let mut rels: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
    for i in 0..=q {
        for jm in m.complex.space.degrees() {
            for jn in n.complex.space.degrees() {
                let (ni, rm, rn) = (m.algebra.dim(i), m.dim(jm), n.dim(jn));
                if ni * rm * rn == 0 {
                    continue;
                }
                let total = i + jm + jn;
                if layout.dim(total) == 0 {
                    continue;
                }
                let sgn = field.sign(i * jm);
                let am = m.action(i, jm);
                let an = n.action(i, jn);
                for a in 0..ni {
                    for s in 0..rm {
                        for t in 0..rn {
                            let mut v = zero_vec(field, layout.dim(total));
                            // (a m) ⊗ n in block jm + i
                            for k in 0..m.dim(i + jm) {
                                let c = am.get(k, a * rm + s);
                                if !c.is_zero() {
                                    let idx = layout.index(total, i + jm, k, t);
                                    v[idx] = v[idx].add(c);
                                }
                            }
                            // -(-1)^{|a||m|} m ⊗ (a n) in block jm
                            for k in 0..n.dim(i + jn) {
                                let c = an.get(k, a * rn + t);
                                if !c.is_zero() {
                                    let idx = layout.index(total, jm, s, k);
                                    v[idx] = v[idx].sub(&sgn.mul(c));
                                }
                            }
                            if v.iter().any(|x| !x.is_zero()) {
                                rels.entry(total).or_default().push(v);
                            }
                        }
                    }
                }
            }
        }
    }

    let mut quotients = BTreeMap::new();
    let mut dims = Vec::new();
    let degrees: Vec<i64> = tensor_f.space.degrees().collect();
    for &d in &degrees {
        let empty = Vec::new();
        let r = rels.get(&d).unwrap_or(&empty);
        let qm = QuotientMap::by_subspace(field, layout.dim(d), r);
        dims.push(qm.quotient_dim());
        quotients.insert(d, qm);
    }
    let min = degrees.first().copied().unwrap_or(0);
    let space = GradedSpace::new(min, dims);
    let mut diffs = BTreeMap::new();
    for &d in &degrees {
        let proj = match quotients.get(&(d - 1)) {
            Some(qm) => qm.projection.clone(),
            None => Matrix::zero(field, 0, layout.dim(d - 1)),
        };
        let big = tensor_f.differential(d);
        let sect = &quotients[&d].section;
        diffs.insert(d, proj.mul(&big).mul(sect));
    }
    let complex = Complex::new(field, space, diffs).expect("tensor_over_A shapes");
    TensorOverA {
        complex,
        quotients,
        tensor_f,
        layout,
    }
}

/// Restriction of scalars along an algebra morphism `φ: A -> B`: a DG
/// B-module becomes a DG A-module by `a · m := φ(a) · m`.
pub fn restrict_scalars(
    phi: &AlgebraMorphism,
    a: &Arc<DGAlgebra>,
    b: &DGAlgebra,
    m: &DGModule,
) -> DGModule {
    let field = a.field();
    let q = a.top_degree();
    let mut action = BTreeMap::new();
    for i in 0..=q {
        for j in m.complex.space.degrees() {
            let ni = a.dim(i);
            if ni * m.dim(j) == 0 || m.dim(i + j) == 0 {
                continue;
            }
            let mb = m.action(i, j);
            let phi_i = phi.block(a, b, i);
            action.insert(
                (i, j),
                mb.mul(&phi_i.kron(&Matrix::identity(field, m.dim(j)))),
            );
        }
    }
    DGModule {
        algebra: Arc::clone(a),
        complex: m.complex.clone(),
        action,
    }
}

/// Base change `B ⊗_A M` along `φ: A -> B`, realized on the quotient from
/// `tensor_over_a` with the left-factor B-action.
pub fn base_change(
    phi: &AlgebraMorphism,
    a: &Arc<DGAlgebra>,
    b: &Arc<DGAlgebra>,
    m: &DGModule,
) -> DGModule {
    let field = b.field();
    let breg = crate::instances::regular_module(b);
    let b_as_a = restrict_scalars(phi, a, b, &breg);
    let t = tensor_over_a(&b_as_a, m);
    // B acts on the left tensor factor
    let qb = b.top_degree();
    let mut action = BTreeMap::new();
    for i in 0..=qb {
        for j in t.complex.space.degrees() {
            let ni = b.dim(i);
            let (rj, rt) = (t.complex.dim(j), t.complex.dim(i + j));
            if ni * rj == 0 || rt == 0 {
                continue;
            }
            let mut big = Matrix::zero(field, t.layout.dim(i + j), ni * t.layout.dim(j));
            for (pos, &(blockdeg, s, y)) in t.layout.basis(j).iter().enumerate() {
                // b' · (e_s ⊗ e_y) = (b' e_s) ⊗ e_y
                for aa in 0..ni {
                    let prod = b.left_mult(i, aa, blockdeg);
                    for k in 0..prod.rows() {
                        let v = prod.get(k, s);
                        if !v.is_zero() {
                            if let Some(row) = t.layout.try_index(i + j, blockdeg + i, k, y) {
                                big.set(row, aa * t.layout.dim(j) + pos, v.clone());
                            }
                        }
                    }
                }
            }
            let proj = &t.quotients[&(i + j)].projection;
            let sect = &t.quotients[&j].section;
            let small = proj
                .mul(&big)
                .mul(&Matrix::identity(field, ni).kron(sect));
            action.insert((i, j), small);
        }
    }
    DGModule {
        algebra: Arc::clone(b),
        complex: t.complex,
        action,
    }
}

/// The homothety chain map `U -> Hom_A(M, M)`, `a ↦ (m ↦ am)`, expressed in
/// the computed basis of `hom_dg(M, M)`. Returns the Hom structure and the
/// per-degree matrices `U_i -> Hom_A(M,M)_i`.
pub fn homothety(m: &DGModule) -> (HomDg, BTreeMap<i64, Matrix>) {
    let hom = hom_dg(m, m);
    let field = m.field();
    let mut blocks = BTreeMap::new();
    for i in 0..=m.algebra.top_degree() {
        let ni = m.algebra.dim(i);
        let hd = hom.complex.dim(i);
        let mut blk = Matrix::zero(field, hd, ni);
        for a in 0..ni {
            // mult_a as a flat Hom_F vector
            let mut per_degree = BTreeMap::new();
            for j in m.complex.space.degrees() {
                per_degree.insert(j, m.act_by_basis(i, a, j));
            }
            let flat = hom.layout.flatten(i, &per_degree, field);
            let coords = hom
                .coords_of(i, &flat)
                .expect("multiplication maps are A-linear");
            blk.set_col(a, &coords);
        }
        blocks.insert(i, blk);
    }
    (hom, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::koszul;
    use crate::instances;
    use crate::scalar::FieldSpec;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn dual_numbers_ring() -> Arc<DGAlgebra> {
        Arc::new(instances::x_square_zero(f2()))
    }

    fn koszul_x() -> Arc<DGAlgebra> {
        let r = instances::x_square_zero(f2());
        Arc::new(koszul(&r, &[unit_vec(f2(), 2, 1)]).unwrap())
    }

    #[test]
    fn algebra_over_itself_is_valid() {
        for u in [dual_numbers_ring(), koszul_x()] {
            let m = instances::regular_module(&u);
            assert!(m.validate().is_valid());
        }
    }

    #[test]
    fn residue_module_is_valid() {
        for u in [dual_numbers_ring(), koszul_x()] {
            let k = instances::residue_module(&u).unwrap();
            assert!(k.validate().is_valid());
            assert_eq!(k.total_dim(), 1);
        }
    }

    #[test]
    fn perturbing_an_action_breaks_validation() {
        let u = koszul_x();
        let mut m = instances::regular_module(&u);
        let mut act = m.action(1, 0);
        let v = act.get(0, 0).add(&f2().one());
        act.set(0, 0, v);
        m.set_action(1, 0, act);
        assert!(!m.validate().is_valid());
    }

    #[test]
    fn free_module_shapes_and_validity() {
        let u = koszul_x();
        let f0 = free_module(&u, &[0]);
        assert_eq!(f0.complex.space.dims, u.complex.space.dims);
        assert!(f0.validate().is_valid());

        let f01 = free_module(&u, &[0, 1]);
        for d in 0..=2 {
            assert_eq!(f01.dim(d), u.dim(d) + u.dim(d - 1));
        }
        assert!(f01.validate().is_valid());

        let fneg = free_module(&u, &[-2, 3]);
        assert!(fneg.validate().is_valid());
    }

    #[test]
    fn shift_module_involution_and_validity() {
        let u = koszul_x();
        let m = instances::regular_module(&u);
        let s = m.shift(1);
        assert!(s.validate().is_valid());
        let back = s.shift(-1);
        assert_eq!(back.complex, m.complex);
        assert_eq!(back.action(1, 0), m.action(1, 0));
        assert_eq!(m.shift(0).complex, m.complex);
    }

    #[test]
    fn semifree_free_matches_block_structure() {
        let u = koszul_x();
        let sf = SemifreeModule::free(&u, &[0, 1]);
        assert!(sf.module.validate().is_valid());
        for d in 0..=2 {
            assert_eq!(sf.module.dim(d), u.dim(d) + u.dim(d - 1));
        }
        // untwisted free layout is isomorphic to the signed free module
        let fm = free_module(&u, &[0, 1]);
        for d in 0..=2 {
            assert_eq!(sf.module.dim(d), fm.dim(d));
        }
    }

    #[test]
    fn semifree_adjoin_builds_leibniz_differential() {
        // resolution-style: one generator in degree 0, then kill x·g with a
        // degree-1 generator over F_2[x]/(x^2)
        let u = dual_numbers_ring();
        let mut sf = SemifreeModule::free(&u, &[0]);
        let bd = {
            let mut v = zero_vec(f2(), sf.space_dim(0));
            let idx = sf.index_of(0, 0, 1).unwrap(); // x @ g0
            v[idx] = f2().one();
            v
        };
        sf.adjoin(1, bd);
        let m = &sf.module;
        assert!(m.validate().is_valid());
        assert_eq!(m.dim(0), 2);
        assert_eq!(m.dim(1), 2);
        // ∂(g1) = x g0, ∂(x g1) = x² g0 = 0
        let d1 = m.complex.differential(1);
        let g1 = sf.index_of(1, 1, 0).unwrap();
        let xg1 = sf.index_of(1, 1, 1).unwrap();
        assert_eq!(d1.col(g1), vec![f2().zero(), f2().one()]);
        assert!(d1.col(xg1).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn hom_into_regular_module_has_module_dims() {
        // Hom_U(U, N) ≅ N degreewise
        let u = koszul_x();
        let n = instances::residue_module(&u).unwrap();
        let sf = SemifreeModule::free(&u, &[0]);
        let (h, _) = hom_from_semifree(&sf, &n);
        for d in n.complex.space.degrees() {
            assert_eq!(h.dim(d), n.dim(d));
        }
        // and via the generic kernel route
        let m = instances::regular_module(&u);
        let hd = hom_dg(&m, &n);
        for d in n.complex.space.degrees() {
            assert_eq!(hd.complex.dim(d), n.dim(d));
        }
    }

    #[test]
    fn hom_dg_zero_target_and_identity_cycle() {
        let u = koszul_x();
        let m = instances::regular_module(&u);
        let z = DGModule::zero_module(Arc::clone(&u));
        let hd = hom_dg(&m, &z);
        assert_eq!(hd.complex.space.total_dim(), 0);

        // identity endomorphism is a degree-0 cycle
        let hmm = hom_dg(&m, &m);
        let mut blocks = BTreeMap::new();
        for d in m.complex.space.degrees() {
            blocks.insert(d, Matrix::identity(f2(), m.dim(d)));
        }
        let flat = hmm.layout.flatten(0, &blocks, f2());
        let coords = hmm.coords_of(0, &flat).expect("identity is A-linear");
        let img = hmm.complex.differential(0).apply(&coords);
        assert!(img.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn hom_semifree_agrees_with_generic_hom_dg() {
        let u = koszul_x();
        let n = instances::regular_module(&u).shift(1).direct_sum(
            &instances::residue_module(&u).unwrap(),
        );
        let sf = SemifreeModule::free(&u, &[0, 1]);
        let (h1, _) = hom_from_semifree(&sf, &n);
        let h2 = hom_dg(&sf.module, &n);
        let min = h1.space.min_degree.min(h2.complex.space.min_degree);
        let max = h1.space.max_degree().max(h2.complex.space.max_degree());
        for d in min..=max {
            assert_eq!(h1.dim(d), h2.complex.dim(d), "dim mismatch at {d}");
            assert_eq!(
                h1.homology_dims().get(&d).copied().unwrap_or(0),
                h2.complex.homology_dims().get(&d).copied().unwrap_or(0),
                "homology mismatch at {d}"
            );
        }
    }

    #[test]
    fn tensor_over_a_unit_law() {
        // U ⊗_U M ≅ M dimension-wise
        let u = koszul_x();
        let m = instances::residue_module(&u).unwrap();
        let reg = instances::regular_module(&u);
        let t = tensor_over_a(&reg, &m);
        for d in m.complex.space.degrees() {
            assert_eq!(t.complex.dim(d), m.dim(d), "dim at {d}");
        }
        // tensor with the zero module
        let z = DGModule::zero_module(Arc::clone(&u));
        let tz = tensor_over_a(&reg, &z);
        assert_eq!(tz.complex.space.total_dim(), 0);
    }

    #[test]
    fn tensor_semifree_agrees_with_generic_quotient() {
        let u = koszul_x();
        let n = instances::regular_module(&u);
        let sf = SemifreeModule::free(&u, &[0, 2]);
        let (t1, _) = tensor_with_semifree(&sf, &n);
        let t2 = tensor_over_a(&sf.module, &n);
        let min = t1.space.min_degree.min(t2.complex.space.min_degree);
        let max = t1.space.max_degree().max(t2.complex.space.max_degree());
        for d in min..=max {
            assert_eq!(t1.dim(d), t2.complex.dim(d), "dim mismatch at {d}");
            assert_eq!(
                t1.homology_dims().get(&d).copied().unwrap_or(0),
                t2.complex.homology_dims().get(&d).copied().unwrap_or(0),
                "homology mismatch at {d}"
            );
        }
    }

    #[test]
    fn base_change_identity_and_augmentation() {
        let u = koszul_x();
        let id = AlgebraMorphism::identity(&u);
        let m = instances::residue_module(&u).unwrap();
        let bc = base_change(&id, &u, &u, &m);
        assert!(bc.validate().is_valid());
        for d in m.complex.space.degrees() {
            assert_eq!(bc.dim(d), m.dim(d));
        }

        // base change of U along U -> k sends U to k
        let kalg = Arc::new(instances::field_algebra(f2()));
        let local = u.local_structure().unwrap();
        let mut blocks = BTreeMap::new();
        blocks.insert(0, local.residue_row.clone());
        for d in 1..=u.top_degree() {
            blocks.insert(d, Matrix::zero(f2(), 0, u.dim(d)));
        }
        let aug = AlgebraMorphism { blocks };
        aug.validate(&u, &kalg).unwrap();
        let reg = instances::regular_module(&u);
        let bc = base_change(&aug, &u, &kalg, &reg);
        assert!(bc.validate().is_valid());
        assert_eq!(bc.total_dim(), 1);
        assert_eq!(bc.dim(0), 1);
    }

    #[test]
    fn homothety_unit_maps_to_identity_and_is_injective_on_regular() {
        let u = koszul_x();
        let m = instances::regular_module(&u);
        let (hom, blocks) = homothety(&m);
        // a = 1 ↦ identity endomorphism
        let unit_coords = blocks[&0].apply(&u.unit);
        let id_blocks = {
            let mut b = BTreeMap::new();
            for d in m.complex.space.degrees() {
                b.insert(d, Matrix::identity(f2(), m.dim(d)));
            }
            b
        };
        let id_flat = hom.layout.flatten(0, &id_blocks, f2());
        let id_coords = hom.coords_of(0, &id_flat).unwrap();
        assert_eq!(unit_coords, id_coords);
        // homothety is injective in each degree for M = U
        for i in 0..=u.top_degree() {
            assert_eq!(blocks[&i].rank(), u.dim(i));
        }
        // zero module: homothety is zero
        let z = DGModule::zero_module(Arc::clone(&u));
        let (_, zb) = homothety(&z);
        for (_, blk) in zb {
            assert!(blk.is_zero());
        }
    }

    #[test]
    fn truncate_module_cases() {
        let u = koszul_x();
        let m = instances::regular_module(&u);
        // n above the top: morphism is the identity
        let (t, phi) = m.truncate(5);
        assert!(t.validate().is_valid());
        assert_eq!(t.complex.space.total_dim(), m.total_dim());
        phi.validate(&m, &t).unwrap();

        // truncation at sup(M) = 1 is a quasiisomorphism
        let (t1, phi1) = m.truncate(1);
        assert!(t1.validate().is_valid());
        assert!(phi1.is_quasiiso(&m, &t1).unwrap());

        // truncation at 0: H_0 preserved, degree 1 gone
        let (t0, phi0) = m.truncate(0);
        assert!(t0.validate().is_valid());
        phi0.validate(&m, &t0).unwrap();
        assert_eq!(t0.dim(1), 0);
        assert_eq!(
            t0.complex.homology_dims()[&0],
            m.complex.homology_dims()[&0]
        );
        // not a quasiiso since H_1(M) != 0
        assert!(!phi0.is_quasiiso(&m, &t0).unwrap());
    }

    #[test]
    fn truncate_random_free_modules_stays_valid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let u = koszul_x();
        for _ in 0..10 {
            let shifts: Vec<i64> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(-1..3)).collect();
            let m = free_module(&u, &shifts);
            let n = rng.gen_range(-1..4);
            let (t, phi) = m.truncate(n);
            assert!(t.validate().is_valid());
            phi.validate(&m, &t).unwrap();
        }
    }

    #[test]
    fn morphism_respects_scalar_multiplication_check() {
        let u = dual_numbers_ring();
        let m = instances::regular_module(&u);
        let id = DGModuleMorphism::identity(&m);
        id.validate(&m, &m).unwrap();

        // a non-A-linear graded map is rejected
        let mut bad = DGModuleMorphism::identity(&m);
        let mut blk = Matrix::identity(f2(), 2);
        blk.set(0, 1, f2().one());
        bad.blocks.insert(0, blk);
        assert!(bad.validate(&m, &m).is_err());
    }
}
