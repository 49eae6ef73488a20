//! The `dgmod/1` JSON schema: self-describing encodings of complexes,
//! algebras, modules, extension data, and graded spaces. Scalars are
//! serialized as strings (`"3/4"` over `Q`, `"2"` over a prime field) so
//! round trips stay exact; every top-level object carries
//! `"schema": "dgmod/1"` and its field.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::DGAlgebra;
use crate::complex::{Complex, GradedSpace};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::module::DGModule;
use crate::scalar::{FieldSpec, Scalar};

pub const SCHEMA: &str = "dgmod/1";

fn check_schema(schema: &str) -> Result<()> {
    if schema != SCHEMA {
        return Err(Error::Parse(format!(
            "unsupported schema {schema:?}, expected {SCHEMA:?}"
        )));
    }
    Ok(())
}

fn parse_field(s: &str) -> Result<FieldSpec> {
    s.parse()
}

fn scalar_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
        .collect()
}

fn matrix_from_strings(
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: &[Vec<String>],
) -> Result<Matrix> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse(format!(
            "matrix shape mismatch: expected {rows}x{cols}"
        )));
    }
    let mut m = Matrix::zero(field, rows, cols);
    for (r, row) in data.iter().enumerate() {
        for (c, s) in row.iter().enumerate() {
            m.set(r, c, field.parse_scalar(s)?);
        }
    }
    Ok(m)
}

fn vector_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn vector_from_strings(field: FieldSpec, data: &[String]) -> Result<Vector> {
    data.iter().map(|s| field.parse_scalar(s)).collect()
}

/// `{"schema", "kind": "complex", "field", "min_degree", "dims",
/// "differentials"}`; `differentials[k]` maps out of degree `min + k`.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ComplexJson {
    pub schema: String,
    pub kind: String,
    pub field: String,
    pub min_degree: i64,
    pub dims: Vec<usize>,
    pub differentials: Vec<Vec<Vec<String>>>,
}

pub fn complex_to_json(c: &Complex) -> ComplexJson {
    let dims = c.space.dims.clone();
    let differentials = c
        .space
        .degrees()
        .map(|d| scalar_strings(&c.differential(d)))
        .collect();
    ComplexJson {
        schema: SCHEMA.into(),
        kind: "complex".into(),
        field: c.field.to_string(),
        min_degree: c.space.min_degree,
        dims,
        differentials,
    }
}

pub fn complex_from_json(j: &ComplexJson) -> Result<Complex> {
    check_schema(&j.schema)?;
    let field = parse_field(&j.field)?;
    let space = GradedSpace::new(j.min_degree, j.dims.clone());
    if j.differentials.len() != j.dims.len() {
        return Err(Error::Parse(
            "differentials list must match the dims list".into(),
        ));
    }
    let mut diffs = BTreeMap::new();
    for (k, data) in j.differentials.iter().enumerate() {
        let d = j.min_degree + k as i64;
        diffs.insert(
            d,
            matrix_from_strings(field, space.dim(d - 1), space.dim(d), data)?,
        );
    }
    Complex::new(field, space, diffs)
}

/// Sparse structure constants `(i, a, j, b, k, coeff)`.
pub type SparseEntry = (i64, usize, i64, usize, usize, String);

/// `{"schema", "kind": "algebra", "field", "dims", "differentials",
/// "mult", "unit"}`.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct AlgebraJson {
    pub schema: String,
    pub kind: String,
    pub field: String,
    pub dims: Vec<usize>,
    pub differentials: Vec<Vec<Vec<String>>>,
    pub mult: Vec<SparseEntry>,
    pub unit: Vec<String>,
}

pub fn algebra_to_json(u: &DGAlgebra) -> AlgebraJson {
    let cx = complex_to_json(&u.complex);
    let mut mult = Vec::new();
    for i in 0..=u.top_degree() {
        for j in 0..=u.top_degree() {
            if i + j > u.top_degree() {
                continue;
            }
            let m = u.mult(i, j);
            let nj = u.dim(j);
            for a in 0..u.dim(i) {
                for b in 0..nj {
                    for k in 0..u.dim(i + j) {
                        let v = m.get(k, a * nj + b);
                        if !v.is_zero() {
                            mult.push((i, a, j, b, k, v.to_string()));
                        }
                    }
                }
            }
        }
    }
    AlgebraJson {
        schema: SCHEMA.into(),
        kind: "algebra".into(),
        field: cx.field,
        dims: cx.dims,
        differentials: cx.differentials,
        mult,
        unit: vector_strings(&u.unit),
    }
}

pub fn algebra_from_json(j: &AlgebraJson) -> Result<DGAlgebra> {
    check_schema(&j.schema)?;
    let field = parse_field(&j.field)?;
    let cx = ComplexJson {
        schema: SCHEMA.into(),
        kind: "complex".into(),
        field: j.field.clone(),
        min_degree: 0,
        dims: j.dims.clone(),
        differentials: j.differentials.clone(),
    };
    let complex = complex_from_json(&cx)?;
    let entries: Vec<(i64, usize, i64, usize, usize, Scalar)> = j
        .mult
        .iter()
        .map(|(i, a, jj, b, k, s)| Ok((*i, *a, *jj, *b, *k, field.parse_scalar(s)?)))
        .collect::<Result<_>>()?;
    let unit = vector_from_strings(field, &j.unit)?;
    DGAlgebra::from_sparse(complex, &entries, unit)
}

/// `{"schema", "kind": "module", "algebra": inline-or-path, "min_degree",
/// "dims", "differentials", "action"}`.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ModuleJson {
    pub schema: String,
    pub kind: String,
    pub algebra: AlgebraRef,
    pub min_degree: i64,
    pub dims: Vec<usize>,
    pub differentials: Vec<Vec<Vec<String>>>,
    pub action: Vec<SparseEntry>,
}

/// An algebra either inline or as a file path (resolved relative to the
/// referencing file).
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path(String),
    Inline(Box<AlgebraJson>),
}

pub fn module_to_json(m: &DGModule) -> ModuleJson {
    let mut action = Vec::new();
    for i in 0..=m.algebra.top_degree() {
        for j in m.complex.space.degrees() {
            let a = m.action(i, j);
            let rj = m.dim(j);
            for aa in 0..m.algebra.dim(i) {
                for b in 0..rj {
                    for k in 0..m.dim(i + j) {
                        let v = a.get(k, aa * rj + b);
                        if !v.is_zero() {
                            action.push((i, aa, j, b, k, v.to_string()));
                        }
                    }
                }
            }
        }
    }
    ModuleJson {
        schema: SCHEMA.into(),
        kind: "module".into(),
        algebra: AlgebraRef::Inline(Box::new(algebra_to_json(&m.algebra))),
        min_degree: m.complex.space.min_degree,
        dims: m.complex.space.dims.clone(),
        differentials: m
            .complex
            .space
            .degrees()
            .map(|d| scalar_strings(&m.complex.differential(d)))
            .collect(),
        action,
    }
}

pub fn module_from_json(j: &ModuleJson, base_dir: Option<&Path>) -> Result<DGModule> {
    check_schema(&j.schema)?;
    let algebra = match &j.algebra {
        AlgebraRef::Inline(a) => algebra_from_json(a)?,
        AlgebraRef::Path(p) => {
            let path = match base_dir {
                Some(dir) => dir.join(p),
                None => Path::new(p).to_path_buf(),
            };
            let text = std::fs::read_to_string(&path)?;
            let parsed: AlgebraJson =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            algebra_from_json(&parsed)?
        }
    };
    let field = algebra.field();
    let space = GradedSpace::new(j.min_degree, j.dims.clone());
    if j.differentials.len() != j.dims.len() {
        return Err(Error::Parse(
            "differentials list must match the dims list".into(),
        ));
    }
    let mut diffs = BTreeMap::new();
    for (k, data) in j.differentials.iter().enumerate() {
        let d = j.min_degree + k as i64;
        diffs.insert(
            d,
            matrix_from_strings(field, space.dim(d - 1), space.dim(d), data)?,
        );
    }
    let complex = Complex::new(field, space.clone(), diffs)?;
    let mut action: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
    for (i, a, jj, b, k, s) in &j.action {
        let (ni, rj, rt) = (algebra.dim(*i), space.dim(*jj), space.dim(i + jj));
        if *a >= ni || *b >= rj || *k >= rt {
            return Err(Error::Parse(format!(
                "action entry ({i},{a},{jj},{b},{k}) out of range"
            )));
        }
        let m = action
            .entry((*i, *jj))
            .or_insert_with(|| Matrix::zero(field, rt, ni * rj));
        let col = a * rj + b;
        let cur = m.get(*k, col).add(&field.parse_scalar(s)?);
        m.set(*k, col, cur);
    }
    DGModule::new(Arc::new(algebra), complex, action)
}

/// `{"schema", "kind": "space", "min_degree", "dims"}` — a graded space for
/// enumeration jobs.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SpaceJson {
    pub schema: String,
    pub kind: String,
    pub min_degree: i64,
    pub dims: Vec<usize>,
}

pub fn space_from_json(j: &SpaceJson) -> Result<GradedSpace> {
    check_schema(&j.schema)?;
    Ok(GradedSpace::new(j.min_degree, j.dims.clone()))
}

pub fn space_to_json(s: &GradedSpace) -> SpaceJson {
    SpaceJson {
        schema: SCHEMA.into(),
        kind: "space".into(),
        min_degree: s.min_degree,
        dims: s.dims.clone(),
    }
}

/// `{"schema", "kind": "sequence", "elements"}` — elements of a degree-0
/// algebra, for Koszul construction.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SequenceJson {
    pub schema: String,
    pub kind: String,
    pub elements: Vec<Vec<String>>,
}

pub fn sequence_from_json(j: &SequenceJson, field: FieldSpec) -> Result<Vec<Vector>> {
    check_schema(&j.schema)?;
    j.elements
        .iter()
        .map(|e| vector_from_strings(field, e))
        .collect()
}

/// `{"schema", "kind": "extension", "source", "target", "gamma", "theta"}`
/// — a Yoneda class `(γ, θ)`; `gamma[d]` maps `M_d -> N_{d-1}`.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ExtensionJson {
    pub schema: String,
    pub kind: String,
    pub source: ModuleJson,
    pub target: ModuleJson,
    pub gamma: Vec<GammaBlockJson>,
    pub theta: Vec<SparseEntry>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct GammaBlockJson {
    pub degree: i64,
    pub matrix: Vec<Vec<String>>,
}

#[allow(clippy::type_complexity)]
pub fn extension_from_json(
    j: &ExtensionJson,
    base_dir: Option<&Path>,
) -> Result<(
    DGModule,
    DGModule,
    BTreeMap<i64, Matrix>,
    BTreeMap<(i64, i64), Matrix>,
)> {
    check_schema(&j.schema)?;
    let source = module_from_json(&j.source, base_dir)?;
    let target = module_from_json(&j.target, base_dir)?;
    let field = source.field();
    let mut gamma = BTreeMap::new();
    for blk in &j.gamma {
        gamma.insert(
            blk.degree,
            matrix_from_strings(
                field,
                target.dim(blk.degree - 1),
                source.dim(blk.degree),
                &blk.matrix,
            )?,
        );
    }
    let mut theta: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
    for (i, a, jj, b, k, s) in &j.theta {
        let (ni, rj, rt) = (source.algebra.dim(*i), source.dim(*jj), target.dim(i + jj));
        if *a >= ni || *b >= rj || *k >= rt {
            return Err(Error::Parse(format!(
                "theta entry ({i},{a},{jj},{b},{k}) out of range"
            )));
        }
        let m = theta
            .entry((*i, *jj))
            .or_insert_with(|| Matrix::zero(field, rt, ni * rj));
        let col = a * rj + b;
        let cur = m.get(*k, col).add(&field.parse_scalar(s)?);
        m.set(*k, col, cur);
    }
    Ok((source, target, gamma, theta))
}

pub fn extension_to_json(
    source: &DGModule,
    target: &DGModule,
    gamma: &BTreeMap<i64, Matrix>,
    theta: &BTreeMap<(i64, i64), Matrix>,
) -> ExtensionJson {
    let mut gblocks = Vec::new();
    for (d, m) in gamma {
        if !m.is_zero() {
            gblocks.push(GammaBlockJson {
                degree: *d,
                matrix: scalar_strings(m),
            });
        }
    }
    let mut tentries = Vec::new();
    for ((i, j), m) in theta {
        let rj = source.dim(*j);
        for a in 0..source.algebra.dim(*i) {
            for b in 0..rj {
                for k in 0..target.dim(i + j) {
                    let v = m.get(k, a * rj + b);
                    if !v.is_zero() {
                        tentries.push((*i, a, *j, b, k, v.to_string()));
                    }
                }
            }
        }
    }
    ExtensionJson {
        schema: SCHEMA.into(),
        kind: "extension".into(),
        source: module_to_json(source),
        target: module_to_json(target),
        gamma: gblocks,
        theta: tentries,
    }
}

/// Parse a top-level object by its `kind` tag.
#[derive(Deserialize)]
struct KindProbe {
    schema: String,
    kind: String,
}

pub enum AnyObject {
    Complex(Complex),
    Algebra(DGAlgebra),
    Module(DGModule),
    Space(GradedSpace),
}

pub fn parse_any(text: &str, base_dir: Option<&Path>) -> Result<AnyObject> {
    let probe: KindProbe = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    check_schema(&probe.schema)?;
    match probe.kind.as_str() {
        "complex" => {
            let j: ComplexJson =
                serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(AnyObject::Complex(complex_from_json(&j)?))
        }
        "algebra" => {
            let j: AlgebraJson =
                serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(AnyObject::Algebra(algebra_from_json(&j)?))
        }
        "module" => {
            let j: ModuleJson =
                serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(AnyObject::Module(module_from_json(&j, base_dir)?))
        }
        "space" => {
            let j: SpaceJson =
                serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(AnyObject::Space(space_from_json(&j)?))
        }
        other => Err(Error::Parse(format!("unknown object kind {other:?}"))),
    }
}
