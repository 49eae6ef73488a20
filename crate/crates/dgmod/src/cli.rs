//! Job layer behind the `dgmod` command-line tool: parse input files,
//! dispatch one operation, and emit a human-readable or JSON report.
//!
//! Exit codes: 0 success (reports may still contain failed checks),
//! 1 domain errors (bad bounds, budgets, non-local algebras, ...),
//! 2 parse and I/O errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::koszul;
use crate::complex::HomologyWindow;
use crate::error::{Error, Result};
use crate::json as schema;
use crate::moduli::{
    enumerate_points, finiteness_experiment, orbit_decompose, tangent_space, voigt_check,
    ScanBudget,
};
use crate::resolution::{betti_bass, ext_dims, tor_dims};
use crate::scalar::FieldSpec;
use crate::yoneda::{baer_sum, cocycle_system, is_split};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Validate,
    Homology,
    Ext,
    Tor,
    Betti,
    Yext1,
    BaerSum,
    IsSplit,
    Tangent,
    Orbits,
    Voigt,
    ScanSdm,
    Koszul,
}

#[derive(Clone, Debug, Default)]
pub struct JobOptions {
    /// expected field; inputs in a different field are rejected
    pub field: Option<FieldSpec>,
    pub bound: Option<i64>,
    pub lo: Option<i64>,
    pub hi: Option<i64>,
    pub max_points: Option<usize>,
    pub max_q_power: Option<u32>,
    pub json: bool,
    pub echo: bool,
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct Job {
    pub verb: Verb,
    pub inputs: Vec<PathBuf>,
    pub options: JobOptions,
}

pub struct Report {
    pub human: String,
    pub json: Value,
}

/// Run a job, write the report, and return the process exit code.
pub fn run(job: &Job, out: &mut dyn Write) -> i32 {
    match run_inner(job) {
        Ok(report) => {
            let text = if job.options.json {
                serde_json::to_string_pretty(&report.json).expect("report serializes")
            } else {
                report.human.clone()
            };
            let emit: std::io::Result<()> = match &job.options.output {
                Some(path) => std::fs::write(path, text + "\n"),
                None => writeln!(out, "{text}"),
            };
            if let Err(e) = emit {
                eprintln!("error: {e}");
                return 2;
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::Io(_) => 2,
                _ => 1,
            }
        }
    }
}

fn read_input(path: &Path) -> Result<(String, Option<PathBuf>)> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().map(|p| p.to_path_buf());
    Ok((text, base))
}

fn want_inputs(job: &Job, n: usize) -> Result<()> {
    if job.inputs.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} input file(s), got {}",
            job.inputs.len()
        )));
    }
    Ok(())
}

fn check_field(opts: &JobOptions, found: FieldSpec) -> Result<()> {
    if let Some(f) = opts.field {
        if f != found {
            return Err(Error::InvalidInput(format!(
                "input is over {found}, but --field {f} was requested"
            )));
        }
    }
    Ok(())
}

fn load_module(job: &Job, idx: usize) -> Result<crate::module::DGModule> {
    let (text, base) = read_input(&job.inputs[idx])?;
    let parsed: schema::ModuleJson =
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let m = schema::module_from_json(&parsed, base.as_deref())?;
    check_field(&job.options, m.field())?;
    Ok(m)
}

fn load_algebra(job: &Job, idx: usize) -> Result<crate::algebra::DGAlgebra> {
    let (text, _) = read_input(&job.inputs[idx])?;
    let parsed: schema::AlgebraJson =
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let a = schema::algebra_from_json(&parsed)?;
    check_field(&job.options, a.field())?;
    Ok(a)
}

fn budget(opts: &JobOptions) -> ScanBudget {
    let mut b = ScanBudget::default();
    if let Some(mp) = opts.max_points {
        b.max_points = mp;
    }
    if let Some(mq) = opts.max_q_power {
        b.max_q_power = mq;
    }
    if let Some(bd) = opts.bound {
        b.sdm_bound = bd;
    }
    b
}

fn echo_inputs(job: &Job) -> Result<Value> {
    let mut echo = serde_json::Map::new();
    for path in &job.inputs {
        let (text, base) = read_input(path)?;
        let canonical = match schema::parse_any(&text, base.as_deref()) {
            Ok(schema::AnyObject::Complex(c)) => {
                serde_json::to_value(schema::complex_to_json(&c)).unwrap()
            }
            Ok(schema::AnyObject::Algebra(a)) => {
                serde_json::to_value(schema::algebra_to_json(&a)).unwrap()
            }
            Ok(schema::AnyObject::Module(m)) => {
                serde_json::to_value(schema::module_to_json(&m)).unwrap()
            }
            Ok(schema::AnyObject::Space(s)) => {
                serde_json::to_value(schema::space_to_json(&s)).unwrap()
            }
            Err(_) => serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?,
        };
        echo.insert(path.display().to_string(), canonical);
    }
    Ok(Value::Object(echo))
}

fn finish(job: &Job, mut j: Value, human: String) -> Result<Report> {
    if job.options.echo {
        j["echo"] = echo_inputs(job)?;
    }
    j["schema"] = json!(schema::SCHEMA);
    Ok(Report { human, json: j })
}

fn window_value(w: &HomologyWindow) -> Value {
    match w {
        HomologyWindow::Trivial => json!("homologically trivial"),
        HomologyWindow::Window { inf, sup, amp } => json!({
            "inf": inf, "sup": sup, "amp": amp
        }),
    }
}

fn run_inner(job: &Job) -> Result<Report> {
    match job.verb {
        Verb::Validate => {
            want_inputs(job, 1)?;
            let (text, base) = read_input(&job.inputs[0])?;
            let (kind, failures): (&str, Vec<String>) =
                match schema::parse_any(&text, base.as_deref())? {
                    schema::AnyObject::Complex(c) => ("complex", c.validate().failures),
                    schema::AnyObject::Algebra(a) => {
                        check_field(&job.options, a.field())?;
                        ("algebra", a.validate().failures)
                    }
                    schema::AnyObject::Module(m) => {
                        check_field(&job.options, m.field())?;
                        let mut f = m.algebra.validate().failures;
                        f.extend(m.validate().failures);
                        ("module", f)
                    }
                    schema::AnyObject::Space(_) => ("space", Vec::new()),
                };
            let valid = failures.is_empty();
            let human = if valid {
                format!("{kind}: valid")
            } else {
                format!("{kind}: INVALID\n  {}", failures.join("\n  "))
            };
            finish(
                job,
                json!({"kind": kind, "valid": valid, "failures": failures}),
                human,
            )
        }
        Verb::Homology => {
            want_inputs(job, 1)?;
            let (text, base) = read_input(&job.inputs[0])?;
            let complex = match schema::parse_any(&text, base.as_deref())? {
                schema::AnyObject::Complex(c) => c,
                schema::AnyObject::Module(m) => m.complex.clone(),
                schema::AnyObject::Algebra(a) => a.complex.clone(),
                _ => return Err(Error::InvalidInput("homology expects a complex".into())),
            };
            check_field(&job.options, complex.field)?;
            let h = complex.homology_dims();
            let w = complex.homology_window();
            let human = format!(
                "homology: {}\nwindow: {:?}",
                h.iter()
                    .map(|(d, v)| format!("H_{d} = {v}"))
                    .collect::<Vec<_>>()
                    .join(", "),
                w
            );
            let hmap: BTreeMap<String, usize> =
                h.iter().map(|(d, v)| (d.to_string(), *v)).collect();
            finish(
                job,
                json!({"homology": hmap, "window": window_value(&w)}),
                human,
            )
        }
        Verb::Ext | Verb::Tor => {
            want_inputs(job, 2)?;
            let m = load_module(job, 0)?;
            let n = load_module(job, 1)?;
            let lo = job.options.lo.unwrap_or(0);
            let hi = job.options.hi.unwrap_or(lo.max(2));
            let bound = job.options.bound.ok_or_else(|| {
                Error::InvalidInput("--bound is required for ext/tor".into())
            })?;
            let (name, dims) = match job.verb {
                Verb::Ext => ("ext", ext_dims(&m, &n, lo, hi, bound)?),
                _ => ("tor", tor_dims(&m, &n, lo, hi, bound)?),
            };
            let human = dims
                .iter()
                .map(|(i, v)| format!("{name}^{i} = {v}"))
                .collect::<Vec<_>>()
                .join("\n");
            let dmap: BTreeMap<String, usize> =
                dims.iter().map(|(d, v)| (d.to_string(), *v)).collect();
            finish(
                job,
                json!({name: dmap, "window": [lo, hi], "bound": bound}),
                human,
            )
        }
        Verb::Betti => {
            want_inputs(job, 1)?;
            let m = load_module(job, 0)?;
            let bound = job.options.bound.unwrap_or(4);
            let (betti, bass) = betti_bass(&m, bound)?;
            let fmt = |w: &crate::resolution::LaurentWindow| -> BTreeMap<String, usize> {
                w.coeffs
                    .iter()
                    .filter(|(_, v)| **v > 0)
                    .map(|(d, v)| (d.to_string(), *v))
                    .collect()
            };
            let human = format!(
                "betti: {:?}\nbass: {:?}\nwindow: [{}, {}]",
                fmt(&betti),
                fmt(&bass),
                -bound,
                bound
            );
            finish(
                job,
                json!({
                    "betti": fmt(&betti),
                    "bass": fmt(&bass),
                    "window": [-bound, bound],
                }),
                human,
            )
        }
        Verb::Yext1 => {
            want_inputs(job, 2)?;
            let m = load_module(job, 0)?;
            let n = load_module(job, 1)?;
            let y = crate::yoneda::yext1(&m, &n)?;
            let human = format!("dim YExt^1 = {}", y.dimension);
            finish(
                job,
                json!({
                    "dimension": y.dimension,
                    "cocycle_dim": y.system.cocycle_basis().len(),
                }),
                human,
            )
        }
        Verb::BaerSum => {
            want_inputs(job, 2)?;
            let (t1, b1) = read_input(&job.inputs[0])?;
            let (t2, b2) = read_input(&job.inputs[1])?;
            let e1: schema::ExtensionJson =
                serde_json::from_str(&t1).map_err(|e| Error::Parse(e.to_string()))?;
            let e2: schema::ExtensionJson =
                serde_json::from_str(&t2).map_err(|e| Error::Parse(e.to_string()))?;
            let (m1, n1, g1, th1) = schema::extension_from_json(&e1, b1.as_deref())?;
            let (m2, n2, g2, th2) = schema::extension_from_json(&e2, b2.as_deref())?;
            if m1.complex != m2.complex || n1.complex != n2.complex {
                return Err(Error::InvalidInput(
                    "baer-sum requires matching endpoints".into(),
                ));
            }
            let sys = cocycle_system(&m1, &n1);
            let c1 = sys.class_of(sys.layout.flatten(m1.field(), &m1, &g1, &th1));
            let c2 = sys.class_of(sys.layout.flatten(m1.field(), &m1, &g2, &th2));
            for (label, c) in [("first", &c1), ("second", &c2)] {
                if !sys.is_cocycle(&c.coords) {
                    return Err(Error::InvalidInput(format!(
                        "{label} input is not an extension cocycle"
                    )));
                }
            }
            let sum = baer_sum(&c1, &c2, &sys)?;
            let out = schema::extension_to_json(&m1, &n1, &sum.gamma, &sum.theta);
            let human = format!(
                "baer sum computed; categorical construction agrees with the coordinate sum\nsplit: {}",
                is_split(&sum, &sys).is_some()
            );
            finish(
                job,
                json!({
                    "sum": serde_json::to_value(&out).unwrap(),
                    "split": is_split(&sum, &sys).is_some(),
                }),
                human,
            )
        }
        Verb::IsSplit => {
            want_inputs(job, 1)?;
            let (text, base) = read_input(&job.inputs[0])?;
            let e: schema::ExtensionJson =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let (m, n, g, th) = schema::extension_from_json(&e, base.as_deref())?;
            let sys = cocycle_system(&m, &n);
            let cls = sys.class_of(sys.layout.flatten(m.field(), &m, &g, &th));
            if !sys.is_cocycle(&cls.coords) {
                return Err(Error::InvalidInput(
                    "input is not an extension cocycle".into(),
                ));
            }
            let witness = is_split(&cls, &sys);
            let human = match &witness {
                Some(_) => "split: yes (witness found)".to_string(),
                None => "split: no".to_string(),
            };
            let wjson = witness.map(|w| {
                let blocks: BTreeMap<String, Vec<Vec<String>>> = w
                    .blocks
                    .iter()
                    .map(|(d, m)| {
                        (
                            d.to_string(),
                            (0..m.rows())
                                .map(|r| {
                                    (0..m.cols()).map(|c| m.get(r, c).to_string()).collect()
                                })
                                .collect(),
                        )
                    })
                    .collect();
                json!(blocks)
            });
            finish(
                job,
                json!({"split": wjson.is_some(), "witness": wjson}),
                human,
            )
        }
        Verb::Tangent => {
            want_inputs(job, 1)?;
            let m = load_module(job, 0)?;
            let ts = tangent_space(&m);
            let orbit = crate::moduli::orbit_tangent(&m, &ts.system);
            let human = format!(
                "tangent dim = {}, orbit tangent dim = {}",
                ts.basis.len(),
                orbit.len()
            );
            finish(
                job,
                json!({
                    "tangent_dim": ts.basis.len(),
                    "orbit_tangent_dim": orbit.len(),
                }),
                human,
            )
        }
        Verb::Voigt => {
            want_inputs(job, 1)?;
            let m = load_module(job, 0)?;
            let rep = voigt_check(&m)?;
            let verdict = if rep.equal { "equal" } else { "UNEQUAL" };
            let human = format!(
                "t_dim = {}, orbit_dim = {}, yext_dim = {}, verdict = {verdict}",
                rep.tangent_dim, rep.orbit_dim, rep.yext_dim
            );
            finish(
                job,
                json!({
                    "t_dim": rep.tangent_dim,
                    "orbit_dim": rep.orbit_dim,
                    "yext_dim": rep.yext_dim,
                    "verdict": verdict,
                    "tau_kernel_matches": rep.tau_kernel_matches,
                    "tau_additive": rep.tau_additive,
                }),
                human,
            )
        }
        Verb::Orbits => {
            want_inputs(job, 2)?;
            let u = Arc::new(load_algebra(job, 0)?);
            let (text, _) = read_input(&job.inputs[1])?;
            let sj: schema::SpaceJson =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let w = schema::space_from_json(&sj)?;
            let b = budget(&job.options);
            let points = enumerate_points(&u, &w, &b)?;
            let records = orbit_decompose(&points, &u, &w, &b)?;
            let human = format!(
                "{} points, {} orbits\n{}",
                points.len(),
                records.len(),
                records
                    .iter()
                    .enumerate()
                    .map(|(i, r)| format!(
                        "orbit {i}: size {}, stabilizer {}, tangent {}, orbit tangent {}, open candidate {}",
                        r.orbit_size,
                        r.stabilizer_order,
                        r.tangent_dim,
                        r.orbit_tangent_dim,
                        r.is_open_candidate
                    ))
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            let recs: Vec<Value> = records
                .iter()
                .map(|r| {
                    json!({
                        "orbit_size": r.orbit_size,
                        "stabilizer_order": r.stabilizer_order.to_string(),
                        "tangent_dim": r.tangent_dim,
                        "orbit_tangent_dim": r.orbit_tangent_dim,
                        "is_open_candidate": r.is_open_candidate,
                        "representative": serde_json::to_value(schema::module_to_json(&r.representative)).unwrap(),
                    })
                })
                .collect();
            finish(
                job,
                json!({"points": points.len(), "orbits": recs}),
                human,
            )
        }
        Verb::ScanSdm => {
            want_inputs(job, 1)?;
            let r = Arc::new(load_algebra(job, 0)?);
            let b = budget(&job.options);
            let rep = finiteness_experiment(&r, &b)?;
            let human = format!(
                "semidualizing scan: {} class(es) found\nlambda = {}, dimension tuples <= lambda: {}\ncandidates: {}\nskipped windows (budget): {}",
                rep.class_count,
                rep.lambda,
                rep.w_family_count,
                rep.candidates
                    .iter()
                    .map(|c| format!(
                        "{} [{}]",
                        c.label,
                        if c.sdm.is_yes() { "yes" } else { "no" }
                    ))
                    .collect::<Vec<_>>()
                    .join(", "),
                rep.skipped_windows
            );
            let cands: Vec<Value> = rep
                .candidates
                .iter()
                .map(|c| {
                    json!({
                        "label": c.label,
                        "semidualizing": c.sdm.is_yes(),
                        "checked_from": c.sdm.checked_from,
                        "w_dims": c.w_dims,
                        "within_lambda": c.within_lambda,
                        "homology": c.homology,
                    })
                })
                .collect();
            finish(
                job,
                json!({
                    "class_count": rep.class_count,
                    "lambda": rep.lambda,
                    "w_family_count": rep.w_family_count.to_string(),
                    "degree_caps": rep.degree_caps,
                    "amplitude_checks": rep.amplitude_checks,
                    "candidates": cands,
                    "separation": rep.separation_certificates,
                    "scanned_windows": rep.scanned_windows,
                    "skipped_windows": rep.skipped_windows,
                }),
                human,
            )
        }
        Verb::Koszul => {
            want_inputs(job, 2)?;
            let r = load_algebra(job, 0)?;
            let (text, _) = read_input(&job.inputs[1])?;
            let sj: schema::SequenceJson =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let seq = schema::sequence_from_json(&sj, r.field())?;
            let k = koszul(&r, &seq)?;
            let kj = schema::algebra_to_json(&k);
            let human = format!(
                "koszul algebra on {} generator(s): dims {:?}",
                seq.len(),
                k.complex.space.dims
            );
            finish(job, json!({"algebra": serde_json::to_value(&kj).unwrap()}), human)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
        p
    }

    #[test]
    fn validate_and_homology_jobs() {
        let dir = tempfile::tempdir().unwrap();
        let f2 = FieldSpec::prime(2).unwrap();
        let r = instances::x_square_zero(f2);
        let aj = serde_json::to_value(schema::algebra_to_json(&r)).unwrap();
        let apath = write_json(dir.path(), "algebra.json", &aj);

        let job = Job {
            verb: Verb::Validate,
            inputs: vec![apath.clone()],
            options: JobOptions::default(),
        };
        let mut out = Vec::new();
        assert_eq!(run(&job, &mut out), 0);
        assert!(String::from_utf8(out).unwrap().contains("valid"));

        let job = Job {
            verb: Verb::Homology,
            inputs: vec![apath],
            options: JobOptions {
                json: true,
                ..Default::default()
            },
        };
        let mut out = Vec::new();
        assert_eq!(run(&job, &mut out), 0);
        let v: Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v["homology"]["0"], 2);
    }

    #[test]
    fn ext_job_insufficient_bound_is_a_domain_error() {
        let dir = tempfile::tempdir().unwrap();
        let f2 = FieldSpec::prime(2).unwrap();
        let u = Arc::new(instances::x_square_zero(f2));
        let k = instances::residue_module(&u).unwrap();
        let mj = serde_json::to_value(schema::module_to_json(&k)).unwrap();
        let mpath = write_json(dir.path(), "k.json", &mj);
        let job = Job {
            verb: Verb::Ext,
            inputs: vec![mpath.clone(), mpath],
            options: JobOptions {
                lo: Some(0),
                hi: Some(4),
                bound: Some(2),
                ..Default::default()
            },
        };
        let mut out = Vec::new();
        assert_eq!(run(&job, &mut out), 1);
    }

    #[test]
    fn parse_errors_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("broken.json");
        std::fs::write(&p, "{not json").unwrap();
        let job = Job {
            verb: Verb::Validate,
            inputs: vec![p],
            options: JobOptions::default(),
        };
        let mut out = Vec::new();
        assert_eq!(run(&job, &mut out), 2);
    }

    #[test]
    fn voigt_job_on_the_residue_field() {
        let dir = tempfile::tempdir().unwrap();
        let f2 = FieldSpec::prime(2).unwrap();
        let u = Arc::new(instances::x_square_zero(f2));
        let k = instances::residue_module(&u).unwrap();
        let mj = serde_json::to_value(schema::module_to_json(&k)).unwrap();
        let mpath = write_json(dir.path(), "k.json", &mj);
        let job = Job {
            verb: Verb::Voigt,
            inputs: vec![mpath],
            options: JobOptions {
                json: true,
                ..Default::default()
            },
        };
        let mut out = Vec::new();
        assert_eq!(run(&job, &mut out), 0);
        let v: Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v["verdict"], "equal");
        assert_eq!(v["yext_dim"], 1);
    }

    #[test]
    fn echo_round_trips_canonically() {
        let dir = tempfile::tempdir().unwrap();
        let f2 = FieldSpec::prime(2).unwrap();
        let r = instances::x_square_zero(f2);
        let aj = serde_json::to_value(schema::algebra_to_json(&r)).unwrap();
        let apath = write_json(dir.path(), "algebra.json", &aj);
        let job = Job {
            verb: Verb::Validate,
            inputs: vec![apath.clone()],
            options: JobOptions {
                json: true,
                echo: true,
                ..Default::default()
            },
        };
        let mut out = Vec::new();
        assert_eq!(run(&job, &mut out), 0);
        let v: Value = serde_json::from_slice(&out).unwrap();
        let echoed = &v["echo"][apath.display().to_string()];
        // the echoed canonical form re-parses to the same canonical bytes
        let reparsed = schema::algebra_from_json(
            &serde_json::from_value(echoed.clone()).unwrap(),
        )
        .unwrap();
        let again = serde_json::to_value(schema::algebra_to_json(&reparsed)).unwrap();
        assert_eq!(echoed, &again);
    }
}
