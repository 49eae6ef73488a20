//! Semi-free resolutions up to an explicit degree bound, and everything
//! derived from them: Ext and Tor dimensions with honest validity windows,
//! Betti and Bass numbers over a local algebra, semidualizing verdicts, and
//! the Poincaré–Bass coefficient identity.
//!
//! A resolution is built by repeatedly killing the homology of the mapping
//! cone of the comparison map. In the minimal mode (local algebra required)
//! each batch lifts only a minimal generating set — a basis of
//! `H/(m·H)` — with representatives reduced so every generator boundary
//! lies in `m_U · F`; that is exactly the condition that the differential
//! on `k ⊗ F` vanishes.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{DGAlgebra, LocalStructure};
use crate::complex::{
    check_chain_map, induced_homology_map, GradedMap, HomologyBasis, HomologyWindow,
};
use crate::error::{Error, Result};
use crate::instances;
use crate::matrix::{cols_to_matrix, vec_neg, zero_vec, Matrix, Vector};
use crate::module::{
    hom_from_semifree, tensor_with_semifree, DGModule, DGModuleMorphism, SemifreeModule,
};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct SemifreeResolution {
    pub target: DGModule,
    pub total: SemifreeModule,
    /// comparison morphism `total -> target`, a quasiisomorphism in degrees
    /// strictly below `bound`
    pub comparison: DGModuleMorphism,
    /// values of the comparison map on the semibasis
    pub phi_gens: Vec<Vector>,
    /// generators adjoined per degree
    pub stages: BTreeMap<i64, usize>,
    pub bound: i64,
    pub minimal: bool,
    /// true when every generator boundary landed in `m_U · F`
    pub minimal_certified: bool,
}

impl SemifreeResolution {
    /// Stage counts; for a minimal resolution these are the Betti numbers.
    pub fn stage_count(&self, degree: i64) -> usize {
        self.stages.get(&degree).copied().unwrap_or(0)
    }

    /// Check that the comparison map is a valid morphism inducing homology
    /// isomorphisms in all degrees `< bound`.
    pub fn verify(&self) -> Result<()> {
        self.comparison.validate(&self.total.module, &self.target)?;
        let f = self.comparison.as_graded_map();
        let a = &self.total.module.complex;
        let b = &self.target.complex;
        let min = a.space.min_degree.min(b.space.min_degree) - 1;
        for d in min..self.bound {
            let ha = HomologyBasis::new(a, d);
            let hb = HomologyBasis::new(b, d);
            if ha.dim() != hb.dim() {
                return Err(Error::InvalidInput(format!(
                    "resolution not a quasiisomorphism at degree {d}: {} vs {}",
                    ha.dim(),
                    hb.dim()
                )));
            }
            if induced_homology_map(&f, a, b, d).rank() != ha.dim() {
                return Err(Error::InvalidInput(format!(
                    "resolution induces a non-isomorphism at degree {d}"
                )));
            }
        }
        Ok(())
    }
}

/// Build a semi-free resolution of `m`, adjoining generators in degrees up
/// to `bound`. With `minimal = true` the algebra must be local and the
/// resulting differential vanishes on `k ⊗ F`.
pub fn semifree_resolution(
    m: &DGModule,
    bound: i64,
    minimal: bool,
) -> Result<SemifreeResolution> {
    let algebra = Arc::clone(&m.algebra);
    let local = if minimal {
        Some(algebra.local_structure().ok_or(Error::NotLocal)?)
    } else {
        None
    };
    let window = m.complex.homology_window();
    let inf = match window {
        HomologyWindow::Trivial => {
            // quasiisomorphic to zero: the empty resolution
            let total = SemifreeModule::free(&algebra, &[]);
            return Ok(SemifreeResolution {
                target: m.clone(),
                comparison: DGModuleMorphism::zero(),
                phi_gens: Vec::new(),
                total,
                stages: BTreeMap::new(),
                bound,
                minimal,
                minimal_certified: true,
            });
        }
        HomologyWindow::Window { inf, .. } => inf,
    };
    if bound < inf {
        return Err(Error::InsufficientBound {
            given: bound,
            required: inf,
            context: "resolution bound below the bottom of homology".into(),
        });
    }

    let mut total = SemifreeModule::free(&algebra, &[]);
    let mut phi_gens: Vec<Vector> = Vec::new();
    let mut stages: BTreeMap<i64, usize> = BTreeMap::new();
    let mut minimal_certified = true;

    for n in inf..=bound {
        let mut guard = 0usize;
        loop {
            let phi = total.assemble_hom(m, 0, &phi_gens);
            let out = cone_matrix(&total, &phi, m, n);
            let into = cone_matrix(&total, &phi, m, n + 1);
            let h = HomologyBasis::from_matrices(&out, &into);
            if h.dim() == 0 {
                break;
            }
            guard += 1;
            assert!(guard <= h.dim() + 2, "cone killing failed to converge");

            let reps = h.representatives();
            let chosen: Vec<Vector> = if let Some(loc) = &local {
                minimal_batch(&total, m, n, &h, &reps, &into, loc)
            } else {
                reps
            };
            let mut boundaries = Vec::new();
            let mut values = Vec::new();
            let fdim = total.space_dim(n - 1);
            for z in &chosen {
                let (f, mm) = split_cone_vector(z, fdim);
                if let Some(loc) = &local {
                    if !total.in_augmentation_times(loc, n - 1, &f) {
                        minimal_certified = false;
                    }
                }
                boundaries.push(f);
                values.push(vec_neg(&mm));
            }
            let count = boundaries.len();
            total.adjoin_batch(n, boundaries);
            phi_gens.extend(values);
            *stages.entry(n).or_insert(0) += count;
        }
    }

    let comparison = morphism_from_gen_values(&total, m, &phi_gens);
    Ok(SemifreeResolution {
        target: m.clone(),
        total,
        comparison,
        phi_gens,
        stages,
        bound,
        minimal,
        minimal_certified,
    })
}

fn morphism_from_gen_values(
    total: &SemifreeModule,
    target: &DGModule,
    phi_gens: &[Vector],
) -> DGModuleMorphism {
    let gm = total.assemble_hom(target, 0, phi_gens);
    let mut blocks = BTreeMap::new();
    for d in gm.degrees() {
        blocks.insert(
            d,
            gm.block(target.field(), &total.module.complex, &target.complex, d),
        );
    }
    DGModuleMorphism { blocks }
}

/// Boundary matrix of the mapping cone at degree `n`, where
/// `X_n = F_{n-1} ⊕ M_n` and `∂(f, m) = (-∂f, φ(f) + ∂m)`.
fn cone_matrix(total: &SemifreeModule, phi: &GradedMap, m: &DGModule, n: i64) -> Matrix {
    let field = m.field();
    let fc = &total.module.complex;
    let (r1, r2) = (fc.dim(n - 1), m.dim(n));
    let (t1, t2) = (fc.dim(n - 2), m.dim(n - 1));
    let mut out = Matrix::zero(field, t1 + t2, r1 + r2);
    out.paste(0, 0, &fc.differential(n - 1).neg());
    out.paste(t1, 0, &phi.block(field, fc, &m.complex, n - 1));
    out.paste(t1, r1, &m.complex.differential(n));
    out
}

fn split_cone_vector(z: &[Scalar], fdim: usize) -> (Vector, Vector) {
    (z[..fdim].to_vec(), z[fdim..].to_vec())
}

/// Representatives of a basis of `H / (m_0 · H)`, each reduced modulo
/// boundaries so that its `F`-component lies in `m_U · F` when possible.
fn minimal_batch(
    total: &SemifreeModule,
    m: &DGModule,
    n: i64,
    h: &HomologyBasis,
    reps: &[Vector],
    into: &Matrix,
    local: &LocalStructure,
) -> Vec<Vector> {
    let field = m.field();
    let fdim = total.space_dim(n - 1);
    // coordinates of m_0-multiples of the basis classes
    let mut sub_coords: Vec<Vector> = Vec::new();
    for u in &local.m0_basis {
        let af = total.module.act_by(0, u, n - 1);
        let am = m.act_by(0, u, n);
        for z in reps {
            let (f, mm) = split_cone_vector(z, fdim);
            let mut uz = af.apply(&f);
            uz.extend(am.apply(&mm));
            if let Some(c) = h.reduce(&uz) {
                if c.iter().any(|v| !v.is_zero()) {
                    sub_coords.push(c);
                }
            }
        }
    }
    // greedy basis extension: pivot columns of [m·H | I] that land in the
    // identity part pick out a basis of H/(m·H)
    let hdim = h.dim();
    let mut cols = sub_coords.clone();
    for i in 0..hdim {
        cols.push(crate::matrix::unit_vec(field, hdim, i));
    }
    let (_, pivots) = cols_to_matrix(field, hdim, &cols).rref();
    let chosen: Vec<Vector> = pivots
        .iter()
        .filter_map(|&p| p.checked_sub(sub_coords.len()))
        .map(|i| reps[i].clone())
        .collect();

    chosen
        .into_iter()
        .map(|z| reduce_into_augmentation(total, m, n, &z, into, local).unwrap_or(z))
        .collect()
}

/// Replace the cone cycle `z` by a homologous one whose F-component lies in
/// `m_U · F`, when such a representative exists.
fn reduce_into_augmentation(
    total: &SemifreeModule,
    m: &DGModule,
    n: i64,
    z: &[Scalar],
    into: &Matrix,
    local: &LocalStructure,
) -> Option<Vector> {
    let field = m.field();
    let fdim = total.space_dim(n - 1);
    // residue functionals: one row per degree-0 slot of F_{n-1}
    let mut rows: Vec<Vector> = Vec::new();
    for (_, udeg, off) in total.slots(n - 1) {
        if udeg != 0 {
            continue;
        }
        let n0 = total.algebra.dim(0);
        let mut row = zero_vec(field, fdim + m.dim(n));
        for b in 0..n0 {
            row[off + b] = local.residue_row.get(0, b).clone();
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Some(z.to_vec());
    }
    let c = cols_to_matrix(field, fdim + m.dim(n), &rows).transpose();
    let rhs = vec_neg(&c.apply(z));
    if rhs.iter().all(|v| v.is_zero()) {
        return Some(z.to_vec());
    }
    let cb = c.mul(into);
    let lambda = cb.solve(&rhs).expect("shape ok")?;
    let adjust = into.apply(&lambda);
    Some(z.iter().zip(&adjust).map(|(a, b)| a.add(b)).collect())
}

/// A window of integer coefficients, used for Poincaré and Bass series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentWindow {
    pub lo: i64,
    pub hi: i64,
    pub coeffs: BTreeMap<i64, usize>,
}

impl LaurentWindow {
    pub fn coeff(&self, i: i64) -> usize {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }
}

/// `dim Ext^i_A(M, N)` for `lo <= i <= hi`, computed from a semi-free
/// resolution of `M` truncated at `bound`; requires
/// `bound >= hi + top(N) + 2` so the window is trustworthy.
pub fn ext_dims(
    m: &DGModule,
    n: &DGModule,
    lo: i64,
    hi: i64,
    bound: i64,
) -> Result<BTreeMap<i64, usize>> {
    if n.total_dim() == 0 {
        return Ok((lo..=hi).map(|i| (i, 0)).collect());
    }
    let top_n = n.complex.space.top_nonzero().unwrap_or(0);
    let required = hi + top_n + 2;
    if bound < required {
        return Err(Error::InsufficientBound {
            given: bound,
            required,
            context: format!("ext window up to {hi} against a target with top degree {top_n}"),
        });
    }
    let res = resolve_auto(m, bound)?;
    Ok(ext_dims_with(&res, n, lo, hi))
}

/// Ext dimensions from an existing resolution (the caller owns the window
/// bookkeeping).
pub fn ext_dims_with(
    res: &SemifreeResolution,
    n: &DGModule,
    lo: i64,
    hi: i64,
) -> BTreeMap<i64, usize> {
    let (hc, _) = hom_from_semifree(&res.total, n);
    let h = hc.homology_dims();
    (lo..=hi)
        .map(|i| (i, h.get(&(-i)).copied().unwrap_or(0)))
        .collect()
}

/// `dim Tor_i^A(M, N)` for `lo <= i <= hi`; requires
/// `bound >= hi - bottom(N) + 2`.
pub fn tor_dims(
    m: &DGModule,
    n: &DGModule,
    lo: i64,
    hi: i64,
    bound: i64,
) -> Result<BTreeMap<i64, usize>> {
    if n.total_dim() == 0 {
        return Ok((lo..=hi).map(|i| (i, 0)).collect());
    }
    let bot_n = n.complex.space.bottom_nonzero().unwrap_or(0);
    let required = hi - bot_n + 2;
    if bound < required {
        return Err(Error::InsufficientBound {
            given: bound,
            required,
            context: format!("tor window up to {hi} against a target with bottom degree {bot_n}"),
        });
    }
    let res = resolve_auto(m, bound)?;
    Ok(tor_dims_with(&res, n, lo, hi))
}

pub fn tor_dims_with(
    res: &SemifreeResolution,
    n: &DGModule,
    lo: i64,
    hi: i64,
) -> BTreeMap<i64, usize> {
    let (tc, _) = tensor_with_semifree(&res.total, n);
    let h = tc.homology_dims();
    (lo..=hi)
        .map(|i| (i, h.get(&i).copied().unwrap_or(0)))
        .collect()
}

/// Minimal resolution when the algebra is local, plain otherwise.
pub fn resolve_auto(m: &DGModule, bound: i64) -> Result<SemifreeResolution> {
    match m.algebra.local_structure() {
        Some(_) => semifree_resolution(m, bound, true),
        None => semifree_resolution(m, bound, false),
    }
}

/// Betti and Bass windows of a homologically finite module over a local
/// algebra: `β_i = dim Tor_i(k, M)` and `μ^i = dim Ext^i(k, M)` for
/// `|i| <= bound`, computed from one minimal resolution of `k`.
pub fn betti_bass(m: &DGModule, bound: i64) -> Result<(LaurentWindow, LaurentWindow)> {
    let algebra = Arc::clone(&m.algebra);
    if algebra.local_structure().is_none() {
        return Err(Error::NotLocal);
    }
    let k = instances::residue_module(&algebra)?;
    let top = m.complex.space.top_nonzero().unwrap_or(0);
    let bot = m.complex.space.bottom_nonzero().unwrap_or(0);
    let kbound = (bound + top.max(0) + 2)
        .max(bound - bot.min(0) + 2)
        .max(0);
    let res = semifree_resolution(&k, kbound, true)?;
    let betti = tor_dims_with(&res, m, -bound, bound);
    let bass = ext_dims_with(&res, m, -bound, bound);
    let window = |coeffs: BTreeMap<i64, usize>| LaurentWindow {
        lo: -bound,
        hi: bound,
        coeffs,
    };
    Ok((window(betti), window(bass)))
}

/// Verdict of the semidualizing check up to a resolution bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SdmVerdict {
    /// The homothety induces isomorphisms on homology in every degree
    /// `>= checked_from`.
    YesUpTo { checked_from: i64 },
    No { witness_degree: i64 },
}

#[derive(Clone, Debug)]
pub struct SdmReport {
    pub verdict: SdmVerdict,
    pub checked_from: i64,
    pub checked_to: i64,
    pub resolution_bound: i64,
}

impl SdmReport {
    pub fn is_yes(&self) -> bool {
        matches!(self.verdict, SdmVerdict::YesUpTo { .. })
    }
}

/// Is `c` semidualizing up to the bound? Builds a semi-free resolution
/// `F ≃ c`, forms `Hom_A(F, c)` (quasiisomorphic to `Hom_A(F, F)` through
/// the comparison map) and certifies that `a ↦ (g ↦ a·φ(g))` induces
/// homology isomorphisms in every degree the bound can see.
pub fn is_semidualizing_up_to(c: &DGModule, bound: i64) -> Result<SdmReport> {
    let algebra = Arc::clone(&c.algebra);
    let field = c.field();
    if c.total_dim() == 0 || c.complex.homology_window() == HomologyWindow::Trivial {
        return Ok(SdmReport {
            verdict: SdmVerdict::No { witness_degree: 0 },
            checked_from: 0,
            checked_to: 0,
            resolution_bound: bound,
        });
    }
    let top_c = c.complex.space.top_nonzero().unwrap_or(0);
    let checked_from = top_c - bound + 2;
    if checked_from > 0 {
        return Err(Error::InsufficientBound {
            given: bound,
            required: top_c + 2,
            context: "semidualizing check needs its window to reach degree 0".into(),
        });
    }
    let res = resolve_auto(c, bound)?;
    let (hc, layout) = hom_from_semifree(&res.total, c);

    // homothety composed with Hom(F, φ): a ↦ (g ↦ a·φ(g))
    let mut chi = GradedMap::new(0);
    for i in 0..=algebra.top_degree() {
        let ni = algebra.dim(i);
        let mut blk = Matrix::zero(field, hc.dim(i), ni);
        for a in 0..ni {
            for (t, val) in res.phi_gens.iter().enumerate() {
                let sdeg = res.total.gen_degrees[t];
                if c.dim(sdeg + i) == 0 {
                    continue;
                }
                let img = c.act_by_basis(i, a, sdeg).apply(val);
                for (k, v) in img.iter().enumerate() {
                    if !v.is_zero() {
                        if let Some(row) = layout.index(i, t, k) {
                            blk.set(row, a, v.clone());
                        }
                    }
                }
            }
        }
        chi.set_block(i, blk);
    }
    check_chain_map(&chi, &algebra.complex, &hc)?;

    let checked_to = algebra
        .complex
        .space
        .max_degree()
        .max(hc.space.max_degree());
    for d in checked_from..=checked_to {
        let ha = HomologyBasis::new(&algebra.complex, d);
        let hb = HomologyBasis::new(&hc, d);
        let ok = ha.dim() == hb.dim()
            && induced_homology_map(&chi, &algebra.complex, &hc, d).rank() == ha.dim();
        if !ok {
            return Ok(SdmReport {
                verdict: SdmVerdict::No { witness_degree: d },
                checked_from,
                checked_to,
                resolution_bound: bound,
            });
        }
    }
    Ok(SdmReport {
        verdict: SdmVerdict::YesUpTo { checked_from },
        checked_from,
        checked_to,
        resolution_bound: bound,
    })
}

#[derive(Clone, Debug)]
pub struct PoincareBassReport {
    pub bass_of_r: LaurentWindow,
    pub betti_of_c: LaurentWindow,
    pub bass_of_c: LaurentWindow,
    /// per-degree check of `μ^m(R) = Σ_t β_t(C) μ^{m-t}(C)`
    pub identity: BTreeMap<i64, bool>,
    /// per-degree check of `β_p(C) <= μ^p(R)` (depth-zero case)
    pub betti_bound: BTreeMap<i64, bool>,
    pub window_hi: i64,
}

impl PoincareBassReport {
    pub fn all_hold(&self) -> bool {
        self.identity.values().all(|&b| b) && self.betti_bound.values().all(|&b| b)
    }
}

/// Verify the coefficient identity `μ^m(R) = Σ_t β_t(C)·μ^{m-t}(C)` for
/// `0 <= m <= bound` over a degree-0 local artinian algebra.
pub fn poincare_bass_identity_check(
    r: &Arc<DGAlgebra>,
    c: &DGModule,
    bound: i64,
) -> Result<PoincareBassReport> {
    if r.top_degree() != 0 {
        return Err(Error::InvalidInput(
            "poincare/bass identity expects an algebra concentrated in degree 0".into(),
        ));
    }
    let reg = instances::regular_module(r);
    let (_, bass_r) = betti_bass(&reg, bound)?;
    let (betti_c, bass_c) = betti_bass(c, bound)?;
    let mut identity = BTreeMap::new();
    let mut betti_bound = BTreeMap::new();
    for m in 0..=bound {
        let mut rhs = 0usize;
        for t in 0..=m {
            rhs += betti_c.coeff(t) * bass_c.coeff(m - t);
        }
        identity.insert(m, bass_r.coeff(m) == rhs);
        betti_bound.insert(m, betti_c.coeff(m) <= bass_r.coeff(m));
    }
    Ok(PoincareBassReport {
        bass_of_r: bass_r,
        betti_of_c: betti_c,
        bass_of_c: bass_c,
        identity,
        betti_bound,
        window_hi: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::koszul;
    use crate::matrix::unit_vec;
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
    fn resolution_of_regular_module_is_trivial_after_degree_zero() {
        for u in [dual_numbers_ring(), koszul_x()] {
            let m = instances::regular_module(&u);
            let res = semifree_resolution(&m, 5, true).unwrap();
            res.verify().unwrap();
            assert!(res.minimal_certified);
            assert_eq!(res.stage_count(0), 1);
            for d in 1..=5 {
                assert_eq!(res.stage_count(d), 0, "extra stage at {d}");
            }
        }
    }

    #[test]
    fn periodic_resolution_of_k_over_dual_numbers() {
        // classical oracle: ... -> R -> R -> k with β_i = 1 for all i
        let u = dual_numbers_ring();
        let k = instances::residue_module(&u).unwrap();
        let res = semifree_resolution(&k, 6, true).unwrap();
        res.verify().unwrap();
        assert!(res.minimal_certified);
        for d in 0..=6 {
            assert_eq!(res.stage_count(d), 1, "β_{d}");
        }
    }

    #[test]
    fn betti_transfer_under_base_change_to_the_koszul_algebra() {
        // β_j over U = Koszul(x) of the base-changed module K ⊗_R C equals
        // β_j over R of C; both sides computed independently for C = k.
        let f = f2();
        let r = Arc::new(instances::x_square_zero(f));
        let u = koszul_x();
        let kr = instances::residue_module(&r).unwrap();
        let res_r = semifree_resolution(&kr, 5, true).unwrap();
        res_r.verify().unwrap();

        // inclusion R -> K in degree 0
        let mut blocks = BTreeMap::new();
        blocks.insert(0, Matrix::identity(f, 2));
        let incl = crate::algebra::AlgebraMorphism { blocks };
        incl.validate(&r, &u).unwrap();
        let kc = crate::module::base_change(&incl, &r, &u, &kr);
        assert!(kc.validate().is_valid());
        let res_u = semifree_resolution(&kc, 5, true).unwrap();
        res_u.verify().unwrap();
        assert!(res_u.minimal_certified);
        for d in 0..=5 {
            assert_eq!(
                res_u.stage_count(d),
                res_r.stage_count(d),
                "β_{d} transfer"
            );
        }
    }

    #[test]
    fn nonminimal_resolution_differs_but_gives_same_invariants() {
        // over F_2[x]/(x^3), basis-killing over-adjoins: β_1 jumps to 2
        let u = Arc::new(instances::x_cube_zero(f2()));
        let k = instances::residue_module(&u).unwrap();
        let min = semifree_resolution(&k, 5, true).unwrap();
        let plain = semifree_resolution(&k, 5, false).unwrap();
        min.verify().unwrap();
        plain.verify().unwrap();
        assert!(min.minimal_certified);
        assert_eq!(min.stage_count(1), 1);
        assert!(plain.stage_count(1) >= 2);

        // identical Ext/Tor dims on the shared window
        let reg = instances::regular_module(&u);
        for n in [&k, &reg] {
            assert_eq!(ext_dims_with(&min, n, 0, 2), ext_dims_with(&plain, n, 0, 2));
            assert_eq!(tor_dims_with(&min, n, 0, 2), tor_dims_with(&plain, n, 0, 2));
        }
    }

    #[test]
    fn ext_window_bookkeeping() {
        let u = dual_numbers_ring();
        let k = instances::residue_module(&u).unwrap();
        let err = ext_dims(&k, &k, 0, 4, 3).unwrap_err();
        match err {
            Error::InsufficientBound { required, .. } => assert_eq!(required, 6),
            other => panic!("unexpected error {other}"),
        }
        // classical oracle over F_2[x]/(x^2): dim Ext^i(k,k) = 1 for i >= 0
        let e = ext_dims(&k, &k, 0, 3, 6).unwrap();
        for i in 0..=3 {
            assert_eq!(e[&i], 1, "Ext^{i}(k,k)");
        }
    }

    #[test]
    fn ext_of_free_source_is_homology_of_target() {
        let u = koszul_x();
        let reg = instances::regular_module(&u);
        let k = instances::residue_module(&u).unwrap();
        let e = ext_dims(&reg, &k, 0, 2, 6).unwrap();
        let h = k.complex.homology_dims();
        assert_eq!(e[&0], h.get(&0).copied().unwrap_or(0));
        assert_eq!(e[&1], 0);
        assert_eq!(e[&2], 0);
        // Ext^1(U, U) = 0: positively graded, so H_{-1} vanishes
        let e = ext_dims(&reg, &reg, 1, 1, 6).unwrap();
        assert_eq!(e[&1], 0);
        // Ext against the zero module vanishes
        let z = DGModule::zero_module(Arc::clone(&u));
        let e = ext_dims(&k, &z, 0, 2, 10).unwrap();
        assert!(e.values().all(|&v| v == 0));
    }

    #[test]
    fn tor_dims_basics() {
        let u = dual_numbers_ring();
        let k = instances::residue_module(&u).unwrap();
        let reg = instances::regular_module(&u);
        // Tor_0(U, N) = homology of N
        let t = tor_dims(&reg, &k, 0, 2, 6).unwrap();
        assert_eq!(t[&0], 1);
        assert_eq!(t[&1], 0);
        // β_i = dim Tor_i(M, k) for the minimal resolution of M = k
        let res = semifree_resolution(&k, 6, true).unwrap();
        let tk = tor_dims_with(&res, &k, 0, 3);
        for i in 0..=3 {
            assert_eq!(tk[&i], res.stage_count(i), "Tor_{i} vs stage count");
        }
    }

    #[test]
    fn ext_is_resolution_independent_and_shift_covariant() {
        let u = koszul_x();
        let k = instances::residue_module(&u).unwrap();
        let m = crate::module::free_module(&u, &[0, 1]);
        let min = semifree_resolution(&k, 7, true).unwrap();
        let plain = semifree_resolution(&k, 7, false).unwrap();
        assert_eq!(
            ext_dims_with(&min, &m, 0, 3),
            ext_dims_with(&plain, &m, 0, 3)
        );

        // Ext^i(Σ^j M, N) = Ext^{i-j}(M, N) under homological indexing;
        // point check first: over the base field with M = N = F in degree
        // 0, Ext^2(Σ^2 M, N) = Ext^0(M, N) = 1.
        let fa = Arc::new(instances::field_algebra(f2()));
        let pt = instances::regular_module(&fa);
        let e = ext_dims(&pt.shift(2), &pt, 2, 2, 9).unwrap();
        assert_eq!(e[&2], 1);

        let shifted = k.shift(2);
        let e_plain = ext_dims(&k, &m, 0, 2, 9).unwrap();
        let e_shift = ext_dims(&shifted, &m, 2, 4, 11).unwrap();
        for i in 0..=2 {
            assert_eq!(e_shift[&(i + 2)], e_plain[&i], "shift covariance at {i}");
        }
    }

    #[test]
    fn betti_bass_windows() {
        let u = dual_numbers_ring();
        // M = U: β_0 = 1, β_i = 0 otherwise
        let reg = instances::regular_module(&u);
        let (betti, bass) = betti_bass(&reg, 3).unwrap();
        assert_eq!(betti.coeff(0), 1);
        for i in 1..=3 {
            assert_eq!(betti.coeff(i), 0);
            assert_eq!(betti.coeff(-i), 0);
        }
        // Bass of R = F_2[x]/(x^2) over itself: the socle is (x),
        // one-dimensional, and R is self-injective artinian: μ^0 = 1.
        assert_eq!(bass.coeff(0), 1);
        for i in 1..=3 {
            assert_eq!(bass.coeff(i), 0);
        }
        // M = k: β_i = 1 for all computed i >= 0
        let k = instances::residue_module(&u).unwrap();
        let (betti, _) = betti_bass(&k, 3).unwrap();
        for i in 0..=3 {
            assert_eq!(betti.coeff(i), 1);
        }
        // non-local algebra is rejected
        let ff = Arc::new(instances::product_ff(f2()));
        let m = instances::regular_module(&ff);
        assert!(matches!(betti_bass(&m, 2), Err(Error::NotLocal)));
    }

    #[test]
    fn semidualizing_verdicts() {
        let u = dual_numbers_ring();
        let reg = instances::regular_module(&u);
        let rep = is_semidualizing_up_to(&reg, 4).unwrap();
        assert!(rep.is_yes());
        // C = k: no — Ext^i(k,k) = 1 for i >= 1 while H_{-i}(U) = 0, so the
        // first failing degree inside the window is reported
        let k = instances::residue_module(&u).unwrap();
        let rep = is_semidualizing_up_to(&k, 4).unwrap();
        match rep.verdict {
            SdmVerdict::No { witness_degree } => assert!(witness_degree < 0),
            other => panic!("expected a negative witness, got {other:?}"),
        }
        // shift invariance
        let sh = reg.shift(3);
        let rep = is_semidualizing_up_to(&sh, 6).unwrap();
        assert!(rep.is_yes());
        // insufficient bound
        assert!(matches!(
            is_semidualizing_up_to(&sh, 2),
            Err(Error::InsufficientBound { .. })
        ));
    }

    #[test]
    fn dual_module_is_semidualizing_over_square_zero_algebra() {
        let r = Arc::new(instances::xy_square_zero(f2()));
        let d = instances::dual_module(&r);
        assert!(d.validate().is_valid());
        let rep = is_semidualizing_up_to(&d, 5).unwrap();
        assert!(rep.is_yes(), "dualizing module must verify: {:?}", rep.verdict);
        // and k is not semidualizing over this algebra
        let k = instances::residue_module(&r).unwrap();
        let rep = is_semidualizing_up_to(&k, 5).unwrap();
        assert!(matches!(rep.verdict, SdmVerdict::No { .. }));
    }

    #[test]
    fn poincare_bass_identity_for_self_and_dual() {
        let r = Arc::new(instances::xy_square_zero(f2()));
        // C = R: the identity reduces to I = 1·I
        let reg = instances::regular_module(&r);
        let rep = poincare_bass_identity_check(&r, &reg, 4).unwrap();
        assert!(rep.all_hold());
        // C = dualizing module: identity on the window
        let d = instances::dual_module(&r);
        let rep = poincare_bass_identity_check(&r, &d, 5).unwrap();
        assert!(rep.all_hold(), "{:?}", rep);
        // oracle cross-check of the Bass numbers of R = F_2[x,y]/(x,y)^2:
        // μ^0 = dim socle = 2, and dimension shifting along the periodic
        // syzygies Ω^i(k) = k^{2^i} gives μ^i = 3·2^{i-1} for i >= 1.
        assert_eq!(rep.bass_of_r.coeff(0), 2);
        for i in 1..=5i64 {
            assert_eq!(rep.bass_of_r.coeff(i), 3 * (1usize << (i - 1)), "μ^{i}");
        }
        // β_i(D) equals μ^i(R) by duality
        for i in 0..=5 {
            assert_eq!(rep.betti_of_c.coeff(i), rep.bass_of_r.coeff(i));
        }
    }

    #[test]
    fn contractible_module_has_empty_resolution() {
        // the cone of the identity on k is homologically trivial
        let u = dual_numbers_ring();
        let k = instances::residue_module(&u).unwrap();
        let mut cone = k.shift(1).direct_sum(&k);
        let mut d = Matrix::zero(f2(), 1, 1);
        d.set(0, 0, f2().one());
        cone.complex.set_differential(1, d);
        assert!(cone.validate().is_valid());
        assert_eq!(cone.complex.homology_window(), HomologyWindow::Trivial);
        let res = semifree_resolution(&cone, 4, true).unwrap();
        assert_eq!(res.total.gen_count(), 0);
        res.verify().unwrap();
        let e = ext_dims(&cone, &k, 0, 2, 8).unwrap();
        assert!(e.values().all(|&v| v == 0));
    }
}
