//! Finite-dimensional DG algebras presented by structure constants on a
//! chosen basis: non-negatively graded, unital, associative, graded
//! commutative, with a differential satisfying the Leibniz rule.

use std::collections::BTreeMap;

use crate::complex::{Complex, GradedSpace};
use crate::error::{Error, Result};
use crate::matrix::{cols_to_matrix, unit_vec, zero_vec, Matrix, Vector};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct DGAlgebra {
    pub complex: Complex,
    /// `mult[(i,j)]`: U_i ⊗ U_j -> U_{i+j}, column index `a * n_j + b`.
    mult: BTreeMap<(i64, i64), Matrix>,
    /// Coordinates of 1 in U_0.
    pub unit: Vector,
}

impl DGAlgebra {
    pub fn new(
        complex: Complex,
        mult: BTreeMap<(i64, i64), Matrix>,
        unit: Vector,
    ) -> Result<Self> {
        if complex.space.min_degree != 0 && !complex.space.is_zero() {
            return Err(Error::InvalidInput(format!(
                "algebra must be concentrated in non-negative degrees, found min degree {}",
                complex.space.min_degree
            )));
        }
        if unit.len() != complex.dim(0) {
            return Err(Error::DimensionMismatch(format!(
                "unit vector length {} vs dim U_0 = {}",
                unit.len(),
                complex.dim(0)
            )));
        }
        let alg = DGAlgebra {
            complex,
            mult,
            unit,
        };
        for ((i, j), m) in &alg.mult {
            let expect = (
                alg.dim(i + j),
                alg.dim(*i) * alg.dim(*j),
            );
            if (m.rows(), m.cols()) != expect {
                return Err(Error::DimensionMismatch(format!(
                    "structure tensor ({i},{j}) has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    expect.0,
                    expect.1
                )));
            }
        }
        Ok(alg)
    }

    /// Assemble from a sparse structure-constant list `(i, a, j, b, k, coeff)`
    /// meaning `e_a^{(i)} · e_b^{(j)} += coeff · e_k^{(i+j)}`.
    pub fn from_sparse(
        complex: Complex,
        entries: &[(i64, usize, i64, usize, usize, Scalar)],
        unit: Vector,
    ) -> Result<Self> {
        let field = complex.field;
        let mut mult: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
        for (i, a, j, b, k, c) in entries {
            let (ni, nj, nk) = (complex.dim(*i), complex.dim(*j), complex.dim(*i + *j));
            if *a >= ni || *b >= nj || *k >= nk {
                return Err(Error::InvalidInput(format!(
                    "structure constant ({i},{a},{j},{b},{k}) out of range"
                )));
            }
            let m = mult
                .entry((*i, *j))
                .or_insert_with(|| Matrix::zero(field, nk, ni * nj));
            let col = a * nj + b;
            let cur = m.get(*k, col).add(c);
            m.set(*k, col, cur);
        }
        DGAlgebra::new(complex, mult, unit)
    }

    pub fn field(&self) -> FieldSpec {
        self.complex.field
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.complex.dim(degree)
    }

    pub fn top_degree(&self) -> i64 {
        self.complex.space.max_degree().max(0)
    }

    pub fn total_dim(&self) -> usize {
        self.complex.space.total_dim()
    }

    /// Structure tensor U_i ⊗ U_j -> U_{i+j} (zero-shaped out of range).
    pub fn mult(&self, i: i64, j: i64) -> Matrix {
        match self.mult.get(&(i, j)) {
            Some(m) => m.clone(),
            None => Matrix::zero(
                self.field(),
                self.dim(i + j),
                self.dim(i) * self.dim(j),
            ),
        }
    }

    /// Product of two basis elements.
    pub fn basis_product(&self, i: i64, a: usize, j: i64, b: usize) -> Vector {
        self.mult(i, j).col(a * self.dim(j) + b)
    }

    /// Left multiplication by the basis element `(i, a)` as a map
    /// `U_j -> U_{i+j}`.
    pub fn left_mult(&self, i: i64, a: usize, j: i64) -> Matrix {
        let m = self.mult(i, j);
        let nj = self.dim(j);
        let mut out = Matrix::zero(self.field(), self.dim(i + j), nj);
        for b in 0..nj {
            out.set_col(b, &m.col(a * nj + b));
        }
        out
    }

    /// Left multiplication by an arbitrary element `x` in U_i.
    pub fn left_mult_by(&self, i: i64, x: &[Scalar], j: i64) -> Matrix {
        let mut out = Matrix::zero(self.field(), self.dim(i + j), self.dim(j));
        for (a, coef) in x.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            out = out.add(&self.left_mult(i, a, j).scale(coef));
        }
        out
    }

    pub fn product(&self, i: i64, x: &[Scalar], j: i64, y: &[Scalar]) -> Vector {
        self.left_mult_by(i, x, j).apply(y)
    }

    /// Full validation report: shapes, d² = 0, Leibniz, associativity,
    /// unitality, graded commutativity and odd squares, checked on basis
    /// elements (bilinearity extends them to all elements).
    pub fn validate(&self) -> AlgebraReport {
        let mut failures = Vec::new();
        let cx = self.complex.validate();
        failures.extend(cx.failures.iter().map(|f| format!("complex: {f}")));

        let q = self.top_degree();
        let field = self.field();

        // Leibniz: d ∘ μ_{i,j} = μ_{i-1,j} ∘ (d_i ⊗ 1) + (-1)^i μ_{i,j-1} ∘ (1 ⊗ d_j)
        for i in 0..=q {
            for j in 0..=q {
                if i + j > q || self.dim(i) == 0 || self.dim(j) == 0 {
                    continue;
                }
                let lhs = self.complex.differential(i + j).mul(&self.mult(i, j));
                let t1 = self
                    .mult(i - 1, j)
                    .mul(&self.complex.differential(i).kron(&Matrix::identity(field, self.dim(j))));
                let t2 = self
                    .mult(i, j - 1)
                    .mul(&Matrix::identity(field, self.dim(i)).kron(&self.complex.differential(j)))
                    .scale(&field.sign(i));
                if lhs != t1.add(&t2) {
                    failures.push(format!("Leibniz fails on U_{i} ⊗ U_{j}"));
                }
            }
        }

        // associativity on basis triples
        for i in 0..=q {
            for p in 0..=q {
                for j in 0..=q {
                    if i + p + j > q {
                        continue;
                    }
                    for a in 0..self.dim(i) {
                        for b in 0..self.dim(p) {
                            for c in 0..self.dim(j) {
                                let ab = self.basis_product(i, a, p, b);
                                let lhs = self.product(i + p, &ab, j, &unit_vec(field, self.dim(j), c));
                                let bc = self.basis_product(p, b, j, c);
                                let rhs = self
                                    .left_mult(i, a, p + j)
                                    .apply(&bc);
                                if lhs != rhs {
                                    failures.push(format!(
                                        "associativity fails at ({i},{a})·({p},{b})·({j},{c})"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }

        // unitality on both sides
        for j in 0..=q {
            let nj = self.dim(j);
            if nj == 0 {
                continue;
            }
            for b in 0..nj {
                let e = unit_vec(field, nj, b);
                let left = self.product(0, &self.unit, j, &e);
                if left != e {
                    failures.push(format!("1 · e_{b}^({j}) != e_{b}^({j})"));
                }
                let right = {
                    let mut acc = zero_vec(field, nj);
                    for (u, coef) in self.unit.iter().enumerate() {
                        if !coef.is_zero() {
                            let prod = self.basis_product(j, b, 0, u);
                            for (k, v) in prod.iter().enumerate() {
                                acc[k] = acc[k].add(&v.mul(coef));
                            }
                        }
                    }
                    acc
                };
                if right != e {
                    failures.push(format!("e_{b}^({j}) · 1 != e_{b}^({j})"));
                }
            }
        }

        // graded commutativity and a² = 0 for odd degree
        for i in 0..=q {
            for j in 0..=q {
                if i + j > q {
                    continue;
                }
                let sign = field.sign(i * j);
                for a in 0..self.dim(i) {
                    for b in 0..self.dim(j) {
                        let ab = self.basis_product(i, a, j, b);
                        let ba = self.basis_product(j, b, i, a);
                        let expect: Vector = ba.iter().map(|v| v.mul(&sign)).collect();
                        if ab != expect {
                            failures.push(format!(
                                "graded commutativity fails at ({i},{a})·({j},{b})"
                            ));
                        }
                    }
                }
            }
            if i % 2 == 1 && 2 * i <= q {
                for a in 0..self.dim(i) {
                    let sq = self.basis_product(i, a, i, a);
                    if sq.iter().any(|v| !v.is_zero()) {
                        failures.push(format!("odd square nonzero at ({i},{a})"));
                    }
                }
            }
        }

        AlgebraReport { failures }
    }

    /// The algebra of dual numbers over `self`: U[ε] on U ⊕ U per degree,
    /// ε-block first, with ε² = 0 and block-diagonal differential.
    pub fn dual_numbers(&self) -> DGAlgebra {
        let field = self.field();
        let q = self.top_degree();
        let dims: Vec<usize> = (0..=q).map(|d| 2 * self.dim(d)).collect();
        let mut diffs = BTreeMap::new();
        for d in 0..=q {
            let b = self.complex.differential(d);
            let mut m = Matrix::zero(field, 2 * self.dim(d - 1), 2 * self.dim(d));
            m.paste(0, 0, &b);
            m.paste(self.dim(d - 1), self.dim(d), &b);
            diffs.insert(d, m);
        }
        let complex = Complex::new(field, GradedSpace::new(0, dims), diffs).expect("shapes");
        let mut mult = BTreeMap::new();
        for i in 0..=q {
            for j in 0..=q {
                if i + j > q {
                    continue;
                }
                let (ni, nj, nk) = (self.dim(i), self.dim(j), self.dim(i + j));
                let base = self.mult(i, j);
                let mut m = Matrix::zero(field, 2 * nk, (2 * ni) * (2 * nj));
                for pa in 0..2usize {
                    for pb in 0..2usize {
                        // ε-part is index 0: ε·ε = 0, ε·1 = 1·ε = ε, 1·1 = 1
                        let target = match (pa, pb) {
                            (0, 0) => continue,
                            (1, 1) => 1usize,
                            _ => 0usize,
                        };
                        for a in 0..ni {
                            for b in 0..nj {
                                let col = (pa * ni + a) * (2 * nj) + (pb * nj + b);
                                let prod = base.col(a * nj + b);
                                for (k, v) in prod.iter().enumerate() {
                                    if !v.is_zero() {
                                        m.set(target * nk + k, col, v.clone());
                                    }
                                }
                            }
                        }
                    }
                }
                mult.insert((i, j), m);
            }
        }
        let mut unit = zero_vec(field, 2 * self.dim(0));
        for (k, v) in self.unit.iter().enumerate() {
            unit[self.dim(0) + k] = v.clone();
        }
        DGAlgebra::new(complex, mult, unit).expect("dual numbers shapes")
    }

    /// Detects whether the algebra is local with residue field equal to the
    /// base field; returns the degree-0 maximal ideal and the residue
    /// functional. `None` means "not local, or residue field larger than F"
    /// (see `LocalStructure`).
    pub fn local_structure(&self) -> Option<LocalStructure> {
        let field = self.field();
        let n0 = self.dim(0);
        if n0 == 0 {
            return None;
        }
        let m0 = match field {
            FieldSpec::Prime(p) => {
                let budget = 1u128 << 20;
                if (p as u128).checked_pow(n0 as u32).is_some_and(|t| t <= budget) {
                    self.m0_by_enumeration(p, n0)?
                } else {
                    self.m0_by_nilpotent_span(n0)?
                }
            }
            FieldSpec::Rationals => self.m0_by_trace_radical(n0)?,
        };
        // residue functional: coordinates along the unit modulo m0
        let mut cols = vec![self.unit.clone()];
        cols.extend(m0.iter().cloned());
        let p = cols_to_matrix(field, n0, &cols);
        if p.rank() != n0 {
            return None;
        }
        let inv = p.inverse()?;
        let mut residue_row = Matrix::zero(field, 1, n0);
        for c in 0..n0 {
            residue_row.set(0, c, inv.get(0, c).clone());
        }
        Some(LocalStructure {
            m0_basis: m0,
            residue_row,
        })
    }

    fn m0_by_enumeration(&self, p: u64, n0: usize) -> Option<Vec<Vector>> {
        let field = self.field();
        let total = (p as usize).pow(n0 as u32);
        let mut non_units = Vec::new();
        for code in 0..total {
            let mut v = Vec::with_capacity(n0);
            let mut x = code;
            for _ in 0..n0 {
                v.push(field.from_i64((x % p as usize) as i64));
                x /= p as usize;
            }
            if self.left_mult_by(0, &v, 0).rank() < n0 {
                non_units.push(v);
            }
        }
        let span_rank = cols_to_matrix(field, n0, &non_units).rank();
        // local over F iff the non-units are exactly a hyperplane
        if non_units.len() != (p as usize).pow(span_rank as u32) || span_rank + 1 != n0 {
            return None;
        }
        let (r, pivots) = cols_to_matrix(field, n0, &non_units).transpose().rref();
        let basis = (0..pivots.len()).map(|ri| r.row(ri)).collect();
        Some(basis)
    }

    fn m0_by_trace_radical(&self, n0: usize) -> Option<Vec<Vector>> {
        let field = self.field();
        // Gram matrix of the trace form Tr(L_a L_b); its kernel is the
        // nilradical in characteristic zero.
        let mut gram = Matrix::zero(field, n0, n0);
        let lms: Vec<Matrix> = (0..n0).map(|a| self.left_mult(0, a, 0)).collect();
        for a in 0..n0 {
            for b in 0..n0 {
                let prod = lms[a].mul(&lms[b]);
                let mut tr = field.zero();
                for k in 0..n0 {
                    tr = tr.add(prod.get(k, k));
                }
                gram.set(a, b, tr);
            }
        }
        let rad = gram.kernel_basis();
        if rad.len() + 1 != n0 {
            return None;
        }
        // sanity: radical is an ideal
        let radm = cols_to_matrix(field, n0, &rad);
        for a in 0..n0 {
            for v in &rad {
                let prod = self.left_mult(0, a, 0).apply(v);
                if radm.solve(&prod).ok()?.is_none() {
                    return None;
                }
            }
        }
        Some(rad)
    }

    fn m0_by_nilpotent_span(&self, n0: usize) -> Option<Vec<Vector>> {
        let field = self.field();
        // span of nilpotent basis elements, certified to be a nil ideal of
        // codimension one. Sufficient (not complete) for large fields.
        let mut nils = Vec::new();
        for a in 0..n0 {
            let l = self.left_mult(0, a, 0);
            let mut pw = l.clone();
            for _ in 0..n0 {
                pw = pw.mul(&l);
            }
            if pw.is_zero() {
                nils.push(unit_vec(field, n0, a));
            }
        }
        let span = cols_to_matrix(field, n0, &nils);
        if span.rank() + 1 != n0 {
            return None;
        }
        for a in 0..n0 {
            for v in &nils {
                let prod = self.left_mult(0, a, 0).apply(v);
                if span.solve(&prod).ok()?.is_none() {
                    return None;
                }
            }
        }
        Some(nils)
    }
}

/// Degree-0 maximal ideal basis and the residue functional of a local
/// algebra whose residue field equals the base field. The full augmentation
/// ideal is `m_0 ⊕ U_{≥1}`.
#[derive(Clone, Debug)]
pub struct LocalStructure {
    pub m0_basis: Vec<Vector>,
    /// Row functional: `residue(v) = residue_row · v` for `v` in U_0.
    pub residue_row: Matrix,
}

impl LocalStructure {
    pub fn residue(&self, v: &[Scalar]) -> Scalar {
        self.residue_row.apply(v)[0].clone()
    }

    pub fn m0_contains(&self, field: FieldSpec, v: &[Scalar]) -> bool {
        if v.is_empty() {
            return true;
        }
        crate::matrix::in_span(field, v.len(), &self.m0_basis, v)
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraReport {
    pub failures: Vec<String>,
}

impl AlgebraReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The Koszul complex on a sequence of elements of a commutative algebra
/// concentrated in degree 0: the exterior algebra on degree-1 generators
/// `e_1..e_n` with `∂(e_m) = a_m` and the wedge product.
///
/// Basis of degree `d`: pairs (size-`d` subset of {0..n-1} in lex order,
/// basis element of the coefficient algebra).
pub fn koszul(r: &DGAlgebra, seq: &[Vector]) -> Result<DGAlgebra> {
    if r.top_degree() != 0 {
        return Err(Error::InvalidInput(
            "koszul requires a coefficient algebra concentrated in degree 0".into(),
        ));
    }
    let field = r.field();
    let n0 = r.dim(0);
    for a in seq {
        if a.len() != n0 {
            return Err(Error::InvalidInput(format!(
                "koszul sequence element has length {}, expected {}",
                a.len(),
                n0
            )));
        }
        for e in a {
            if e.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), e.field().to_string()));
            }
        }
    }
    let n = seq.len() as i64;
    let subsets: Vec<Vec<Vec<usize>>> = (0..=n)
        .map(|d| combinations(n as usize, d as usize))
        .collect();
    let sub_index = |s: &[usize]| -> usize {
        subsets[s.len()]
            .iter()
            .position(|t| t == s)
            .expect("subset present")
    };
    let dims: Vec<usize> = (0..=n).map(|d| subsets[d as usize].len() * n0).collect();

    // differential: ∂(e_S ⊗ b) = Σ_m (-1)^m (e_{S \ s_m} ⊗ a_{s_m}·b)
    let mut diffs = BTreeMap::new();
    for d in 1..=n {
        let mut m = Matrix::zero(field, dims[(d - 1) as usize], dims[d as usize]);
        for (si, s) in subsets[d as usize].iter().enumerate() {
            for b in 0..n0 {
                let col = si * n0 + b;
                for (pos, &gen) in s.iter().enumerate() {
                    let rest: Vec<usize> = s.iter().copied().filter(|&g| g != gen).collect();
                    let ri = sub_index(&rest);
                    let coeff = r.product(0, &seq[gen], 0, &unit_vec(field, n0, b));
                    let sign = field.sign(pos as i64);
                    for (k, v) in coeff.iter().enumerate() {
                        if !v.is_zero() {
                            let cur = m.get(ri * n0 + k, col).add(&sign.mul(v));
                            m.set(ri * n0 + k, col, cur);
                        }
                    }
                }
            }
        }
        diffs.insert(d, m);
    }
    let complex = Complex::new(field, GradedSpace::new(0, dims.clone()), diffs)?;

    // wedge products with merge-inversion signs
    let mut mult = BTreeMap::new();
    for i in 0..=n {
        for j in 0..=n {
            if i + j > n {
                continue;
            }
            let (di, dj, dk) = (
                dims[i as usize],
                dims[j as usize],
                dims[(i + j) as usize],
            );
            let mut m = Matrix::zero(field, dk, di * dj);
            for (si, s) in subsets[i as usize].iter().enumerate() {
                for (ti, t) in subsets[j as usize].iter().enumerate() {
                    if s.iter().any(|g| t.contains(g)) {
                        continue;
                    }
                    let mut merged: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
                    let inversions = count_inversions(&merged);
                    merged.sort_unstable();
                    let ui = sub_index(&merged);
                    let sign = field.sign(inversions as i64);
                    for a in 0..n0 {
                        for b in 0..n0 {
                            let col = (si * n0 + a) * dj + (ti * n0 + b);
                            let prod = r.basis_product(0, a, 0, b);
                            for (k, v) in prod.iter().enumerate() {
                                if !v.is_zero() {
                                    let cur = m.get(ui * n0 + k, col).add(&sign.mul(v));
                                    m.set(ui * n0 + k, col, cur);
                                }
                            }
                        }
                    }
                }
            }
            mult.insert((i, j), m);
        }
    }

    let mut unit = zero_vec(field, dims[0]);
    for (k, v) in r.unit.iter().enumerate() {
        unit[k] = v.clone();
    }
    DGAlgebra::new(complex, mult, unit)
}

fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    if d > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        out.push(idx.clone());
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - d {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn count_inversions(v: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    inv
}

/// A morphism of DG algebras: per-degree blocks that form a chain map,
/// respect products, and send unit to unit.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub blocks: BTreeMap<i64, Matrix>,
}

impl AlgebraMorphism {
    pub fn identity(u: &DGAlgebra) -> Self {
        let mut blocks = BTreeMap::new();
        for d in 0..=u.top_degree() {
            blocks.insert(d, Matrix::identity(u.field(), u.dim(d)));
        }
        AlgebraMorphism { blocks }
    }

    pub fn block(&self, source: &DGAlgebra, target: &DGAlgebra, d: i64) -> Matrix {
        self.blocks
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(source.field(), target.dim(d), source.dim(d)))
    }

    pub fn validate(&self, source: &DGAlgebra, target: &DGAlgebra) -> Result<()> {
        let q = source.top_degree().max(target.top_degree());
        for d in 0..=q {
            let lhs = target
                .complex
                .differential(d)
                .mul(&self.block(source, target, d));
            let rhs = self
                .block(source, target, d - 1)
                .mul(&source.complex.differential(d));
            if lhs != rhs {
                return Err(Error::NotChainMap {
                    degree: d,
                    detail: "algebra morphism fails to commute with differentials".into(),
                });
            }
        }
        for i in 0..=q {
            for j in 0..=q {
                if i + j > q {
                    continue;
                }
                for a in 0..source.dim(i) {
                    for b in 0..source.dim(j) {
                        let fab = self
                            .block(source, target, i + j)
                            .apply(&source.basis_product(i, a, j, b));
                        let fa = self
                            .block(source, target, i)
                            .apply(&unit_vec(source.field(), source.dim(i), a));
                        let fb = self
                            .block(source, target, j)
                            .apply(&unit_vec(source.field(), source.dim(j), b));
                        let fafb = target.product(i, &fa, j, &fb);
                        if fab != fafb {
                            return Err(Error::InvalidInput(format!(
                                "morphism not multiplicative at ({i},{a})·({j},{b})"
                            )));
                        }
                    }
                }
            }
        }
        let funit = self.block(source, target, 0).apply(&source.unit);
        if funit != target.unit {
            return Err(Error::InvalidInput("morphism does not preserve unit".into()));
        }
        Ok(())
    }
}

/// The inclusion U -> U[ε] (1-block) and the retraction U[ε] -> U.
pub fn dual_numbers_inclusion(u: &DGAlgebra) -> AlgebraMorphism {
    let mut blocks = BTreeMap::new();
    for d in 0..=u.top_degree() {
        let n = u.dim(d);
        let mut m = Matrix::zero(u.field(), 2 * n, n);
        m.paste(n, 0, &Matrix::identity(u.field(), n));
        blocks.insert(d, m);
    }
    AlgebraMorphism { blocks }
}

pub fn dual_numbers_retraction(u: &DGAlgebra) -> AlgebraMorphism {
    let mut blocks = BTreeMap::new();
    for d in 0..=u.top_degree() {
        let n = u.dim(d);
        let mut m = Matrix::zero(u.field(), n, 2 * n);
        m.paste(0, n, &Matrix::identity(u.field(), n));
        blocks.insert(d, m);
    }
    AlgebraMorphism { blocks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    #[test]
    fn base_field_is_a_valid_algebra() {
        let f = instances::field_algebra(FieldSpec::rationals());
        assert!(f.validate().is_valid());
    }

    #[test]
    fn dual_numbers_ring_is_valid_with_n0_two() {
        let r = instances::x_square_zero(f2());
        assert!(r.validate().is_valid());
        assert_eq!(r.dim(0), 2);
    }

    #[test]
    fn exterior_on_one_generator_enforces_square_zero() {
        // exterior algebra on one degree-1 generator over F: koszul on (0)
        let f = instances::field_algebra(FieldSpec::rationals());
        let k = koszul(&f, &[vec![FieldSpec::rationals().zero()]]).unwrap();
        assert!(k.validate().is_valid());
        assert_eq!(k.dim(1), 1);
        // e·e = 0
        assert!(k.basis_product(1, 0, 1, 0).iter().all(|v| v.is_zero()));
        // zero sequence: differential is zero and homology is the algebra itself
        let h = k.complex.homology_dims();
        assert_eq!(h[&0], 1);
        assert_eq!(h[&1], 1);
    }

    #[test]
    fn koszul_on_one_element_is_mult_by_a() {
        let r = instances::x_square_zero(f2());
        let x = unit_vec(f2(), 2, 1);
        let k = koszul(&r, &[x.clone()]).unwrap();
        assert!(k.validate().is_valid());
        assert_eq!(k.complex.space.dims, vec![2, 2]);
        // ∂(e ⊗ 1) = x
        assert_eq!(k.complex.differential(1).col(0), x);
        // H_0 = F_2, H_1 = F_2 (kernel/cokernel of multiplication by x)
        let h = k.complex.homology_dims();
        assert_eq!(h[&0], 1);
        assert_eq!(h[&1], 1);
    }

    #[test]
    fn koszul_two_elements_total_dimension() {
        let r = instances::xy_square_zero(f2());
        let x = unit_vec(f2(), 3, 1);
        let y = unit_vec(f2(), 3, 2);
        let k = koszul(&r, &[x, y]).unwrap();
        assert!(k.validate().is_valid());
        assert_eq!(k.complex.space.dims, vec![3, 6, 3]);
        assert_eq!(k.total_dim(), 3 * 4);
    }

    #[test]
    fn dual_numbers_doubles_dims_and_validates() {
        let r = instances::x_square_zero(f2());
        let k = koszul(&r, &[unit_vec(f2(), 2, 1)]).unwrap();
        let ke = k.dual_numbers();
        assert!(ke.validate().is_valid());
        for d in 0..=1 {
            assert_eq!(ke.dim(d), 2 * k.dim(d));
        }
        // block-diagonal differential
        let b = k.complex.differential(1);
        let be = ke.complex.differential(1);
        for r_ in 0..b.rows() {
            for c in 0..b.cols() {
                assert_eq!(be.get(r_, c), b.get(r_, c));
                assert_eq!(be.get(b.rows() + r_, b.cols() + c), b.get(r_, c));
            }
        }
        // ε·ε = 0: ε is the first basis vector of degree 0
        assert!(ke.basis_product(0, 0, 0, 0).iter().all(|v| v.is_zero()));
        // inclusion and retraction are morphisms
        dual_numbers_inclusion(&k).validate(&k, &ke).unwrap();
        dual_numbers_retraction(&k).validate(&ke, &k).unwrap();
    }

    #[test]
    fn locality_detection() {
        // F itself: local with m = 0
        let f = instances::field_algebra(FieldSpec::rationals());
        let loc = f.local_structure().unwrap();
        assert!(loc.m0_basis.is_empty());
        assert!(loc.residue(&[FieldSpec::rationals().one()]).is_one());

        // F_2[x]/(x^2): local with m0 = (x); oracle: the two non-units are 0 and x
        let r = instances::x_square_zero(f2());
        let mut non_units = Vec::new();
        for a in 0..2i64 {
            for b in 0..2i64 {
                let v = vec![f2().from_i64(a), f2().from_i64(b)];
                if r.left_mult_by(0, &v, 0).rank() < 2 {
                    non_units.push(v);
                }
            }
        }
        assert_eq!(non_units.len(), 2); // 0 and x
        let loc = r.local_structure().unwrap();
        assert_eq!(loc.m0_basis.len(), 1);
        assert_eq!(loc.m0_basis[0], unit_vec(f2(), 2, 1));

        // F x F: not local; oracle: two maximal ideals by enumeration
        let ff = instances::product_ff(f2());
        assert!(ff.validate().is_valid());
        assert!(ff.local_structure().is_none());

        // and over the rationals via the trace radical
        let rq = instances::x_square_zero(FieldSpec::rationals());
        let loc = rq.local_structure().unwrap();
        assert_eq!(loc.m0_basis.len(), 1);
        let ffq = instances::product_ff(FieldSpec::rationals());
        assert!(ffq.local_structure().is_none());
    }

    #[test]
    fn h0_receives_a_ring_surjection_from_u0() {
        // H_0(U) carries the induced product: check that products of cycle
        // representatives are well-defined modulo boundaries on a small case.
        let r = instances::x_square_zero(f2());
        let k = koszul(&r, &[unit_vec(f2(), 2, 1)]).unwrap();
        // H_0(K) = U_0 / im(d_1); multiplying the image ideal stays inside it
        let d1 = k.complex.differential(1);
        let img: Vec<Vector> = (0..d1.cols()).map(|c| d1.col(c)).collect();
        let imat = cols_to_matrix(f2(), 2, &img);
        for a in 0..k.dim(0) {
            for v in &img {
                let prod = k.left_mult(0, a, 0).apply(v);
                assert!(imat.solve(&prod).unwrap().is_some());
            }
        }
    }

    #[test]
    fn flipping_a_sign_breaks_validation() {
        let r = instances::xy_square_zero(f2());
        let x = unit_vec(f2(), 3, 1);
        let y = unit_vec(f2(), 3, 2);
        let mut k = koszul(&r, &[x, y]).unwrap();
        // corrupt one structure constant
        let m = k.mult.get_mut(&(1, 1)).unwrap();
        let v = m.get(0, 0).add(&f2().one());
        m.set(0, 0, v);
        assert!(!k.validate().is_valid());
    }
}
