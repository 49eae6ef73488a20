//! Small standard algebras and modules used by examples and tests:
//! truncated polynomial rings, square-zero algebras, residue-field modules.

use std::collections::BTreeMap;

use crate::algebra::DGAlgebra;
use crate::complex::Complex;
use crate::error::Result;
use crate::matrix::{unit_vec, Vector};
use crate::module::DGModule;
use crate::scalar::{FieldSpec, Scalar};
use std::sync::Arc;

/// The base field as a DG algebra concentrated in degree 0.
pub fn field_algebra(field: FieldSpec) -> DGAlgebra {
    let complex = Complex::concentrated(field, 0, 1);
    let entries = [(0, 0usize, 0, 0usize, 0usize, field.one())];
    DGAlgebra::from_sparse(complex, &entries, vec![field.one()]).expect("field algebra")
}

/// `F[x]/(x^2)` in degree 0, basis {1, x}.
pub fn x_square_zero(field: FieldSpec) -> DGAlgebra {
    let complex = Complex::concentrated(field, 0, 2);
    let one = field.one();
    let entries = [
        (0, 0usize, 0, 0usize, 0usize, one.clone()),
        (0, 0usize, 0, 1usize, 1usize, one.clone()),
        (0, 1usize, 0, 0usize, 1usize, one.clone()),
    ];
    DGAlgebra::from_sparse(complex, &entries, unit_vec(field, 2, 0)).expect("x^2 = 0 algebra")
}

/// `F[x]/(x^3)` in degree 0, basis {1, x, x^2}.
pub fn x_cube_zero(field: FieldSpec) -> DGAlgebra {
    let complex = Complex::concentrated(field, 0, 3);
    let one = field.one();
    let mut entries = Vec::new();
    for (a, b) in [(0usize, 0usize), (0, 1), (0, 2), (1, 0), (2, 0), (1, 1)] {
        if a + b <= 2 {
            entries.push((0, a, 0, b, a + b, one.clone()));
        }
    }
    DGAlgebra::from_sparse(complex, &entries, unit_vec(field, 3, 0)).expect("x^3 = 0 algebra")
}

/// `F[x,y]/(x^2, xy, y^2)` in degree 0, basis {1, x, y}.
pub fn xy_square_zero(field: FieldSpec) -> DGAlgebra {
    let complex = Complex::concentrated(field, 0, 3);
    let one = field.one();
    let entries = [
        (0, 0usize, 0, 0usize, 0usize, one.clone()),
        (0, 0usize, 0, 1usize, 1usize, one.clone()),
        (0, 0usize, 0, 2usize, 2usize, one.clone()),
        (0, 1usize, 0, 0usize, 1usize, one.clone()),
        (0, 2usize, 0, 0usize, 2usize, one.clone()),
    ];
    DGAlgebra::from_sparse(complex, &entries, unit_vec(field, 3, 0)).expect("square-zero algebra")
}

/// `F x F` in degree 0 (not local), basis of orthogonal idempotents.
pub fn product_ff(field: FieldSpec) -> DGAlgebra {
    let complex = Complex::concentrated(field, 0, 2);
    let one = field.one();
    let entries = [
        (0, 0usize, 0, 0usize, 0usize, one.clone()),
        (0, 1usize, 0, 1usize, 1usize, one.clone()),
    ];
    let unit = vec![one.clone(), one.clone()];
    DGAlgebra::from_sparse(complex, &entries, unit).expect("product algebra")
}

/// The algebra as a DG module over itself.
pub fn regular_module(u: &Arc<DGAlgebra>) -> DGModule {
    let mut action = BTreeMap::new();
    let q = u.top_degree();
    for i in 0..=q {
        for j in 0..=q {
            if i + j > q {
                continue;
            }
            action.insert((i, j), u.mult(i, j));
        }
    }
    DGModule::new(Arc::clone(u), u.complex.clone(), action).expect("regular module")
}

/// The residue field as a DG module via the augmentation: positive degrees
/// and the degree-0 maximal ideal act as zero. Requires a local algebra.
pub fn residue_module(u: &Arc<DGAlgebra>) -> Result<DGModule> {
    let local = u
        .local_structure()
        .ok_or(crate::error::Error::NotLocal)?;
    let field = u.field();
    let complex = Complex::concentrated(field, 0, 1);
    let mut action = BTreeMap::new();
    // only U_0 ⊗ k_0 -> k_0 can be nonzero: a · 1 = residue(a)
    let mut m = crate::matrix::Matrix::zero(field, 1, u.dim(0));
    for c in 0..u.dim(0) {
        m.set(0, c, local.residue(&unit_vec(field, u.dim(0), c)));
    }
    action.insert((0, 0), m);
    DGModule::new(Arc::clone(u), complex, action)
}

/// The linear dual `Hom_F(R, F)` of a degree-0 algebra as a DG module:
/// `(a · f)(b) = f(ab)`. For an artinian local algebra this is the
/// dualizing module.
pub fn dual_module(u: &Arc<DGAlgebra>) -> DGModule {
    assert_eq!(u.top_degree(), 0, "dual_module expects a degree-0 algebra");
    let field = u.field();
    let n0 = u.dim(0);
    let complex = Complex::concentrated(field, 0, n0);
    let mut action = BTreeMap::new();
    // action of basis element a on the dual basis: transpose of left
    // multiplication by a
    let mut m = crate::matrix::Matrix::zero(field, n0, n0 * n0);
    for a in 0..n0 {
        let l = u.left_mult(0, a, 0).transpose();
        for b in 0..n0 {
            let col = l.col(b);
            for (k, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(k, a * n0 + b, v.clone());
                }
            }
        }
    }
    action.insert((0, 0), m);
    DGModule::new(Arc::clone(u), complex, action).expect("dual module")
}

/// Element `x` of a small truncated polynomial algebra (second basis slot).
pub fn x_element(field: FieldSpec, n0: usize) -> Vector {
    unit_vec(field, n0, 1)
}

pub fn scalar_one(field: FieldSpec) -> Scalar {
    field.one()
}

/// A random valid module point with total dimension at most `max_total`:
/// start from a shifted standard atom, splice in further atoms through
/// random extension cocycles, then conjugate by a random basis change.
/// Valid by construction; the result is asserted to pass validation.
pub fn random_point(
    u: &Arc<DGAlgebra>,
    rng: &mut impl rand::Rng,
    max_total: usize,
) -> DGModule {
    use rand::seq::SliceRandom;

    let mut atoms: Vec<DGModule> = Vec::new();
    if let Ok(k) = residue_module(u) {
        atoms.push(k);
    }
    let reg = regular_module(u);
    let (trunc, _) = reg.truncate(0);
    if trunc.total_dim() > 0 {
        atoms.push(trunc);
    }
    atoms.push(reg);
    let shifted: Vec<DGModule> = atoms
        .iter()
        .flat_map(|a| [a.shift(-1), a.shift(1)])
        .collect();
    atoms.extend(shifted);
    atoms.retain(|a| a.total_dim() <= max_total && a.total_dim() > 0);
    assert!(!atoms.is_empty(), "no atoms fit the size limit");

    let mut point = atoms.choose(rng).expect("atoms nonempty").clone();
    for _ in 0..rng.gen_range(0..3) {
        let next = atoms.choose(rng).expect("atoms nonempty");
        if point.total_dim() + next.total_dim() > max_total {
            break;
        }
        // extension 0 -> next -> X -> point -> 0 with a random cocycle
        let sys = crate::yoneda::cocycle_system(&point, next);
        let basis = sys.cocycle_basis();
        let field = point.field();
        let mut v = crate::matrix::zero_vec(field, sys.layout.dim());
        for b in &basis {
            let c = match field {
                FieldSpec::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
                FieldSpec::Rationals => field.from_i64(rng.gen_range(-2..3)),
            };
            if !c.is_zero() {
                for (slot, e) in v.iter_mut().zip(b) {
                    *slot = slot.add(&e.mul(&c));
                }
            }
        }
        point = sys.class_of(v).assemble();
    }
    let alpha = crate::moduli::GLElement::random(&point.complex.space, point.field(), rng);
    let moved = crate::moduli::act(&alpha, &point).expect("random basis change is invertible");
    assert!(moved.validate().is_valid(), "sampled point must validate");
    moved
}
