use std::path::Path;
use std::time::Instant;

use num_traits::Zero;
use serde_json::{json, Value};

use solvkit::catalog::{associativity_residual, brackets_from_group_law, get, list, CrossCheckConfig, Params};
use solvkit::cohomology::{holonomy_quotient_dim, winkelmann_h1, HolonomyAction};
use solvkit::complex_structure::{is_integrable, AlmostComplexStructure};
use solvkit::coordinate::{
    ext_d, omega_closedness_certificate, omega_coordinate, omega_mc, pullback_translation, LatticeTranslation,
};
use solvkit::io::{self, LoadedAlgebra};
use solvkit::lattice::{
    build_lattice_nilpotent_with, build_lattice_nonnilpotent_with, nakamura_lattice_with, search_palindromic,
    verify_lattice_spec, IntMatrix, LatticeError, LatticeSpec, SearchClass, SecondHolonomy, Tolerances,
};
use solvkit::pseudo_kahler::{classify, classify_pointwise, FormClass, PseudoKahlerError};
use solvkit::scalar::{rat, Field};
use solvkit::{LieAlgebra, Rational, Scalar};

use crate::criteria::{self, Config};
use crate::report::{Report, Verdict};
use crate::{AlgebraArgs, CatalogCmd, Cli, CliError, Command, GlobalOpts, LatticeCmd, LatticeKindArg, Output};

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| input_error(path, e))
}

fn input_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input { path: path.display().to_string(), message: e.to_string() }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn load(args: &AlgebraArgs) -> Result<(String, LoadedAlgebra), CliError> {
    let text = read(&args.file)?;
    let loaded = io::parse_algebra(&text, !args.no_validate).map_err(|e| input_error(&args.file, e))?;
    Ok((text, loaded))
}

/// The real algebra and its J: the stored J, or the tautological one of a complex algebra.
fn real_pair(
    path: &Path,
    loaded: LoadedAlgebra,
) -> Result<(LieAlgebra<Scalar>, AlmostComplexStructure<Scalar>), CliError> {
    match loaded.j {
        Some(j) if loaded.algebra.is_real_form() => Ok((loaded.algebra, j)),
        Some(_) => Err(input_error(path, "J must act on a real algebra")),
        None if loaded.algebra.is_real_form() => Err(input_error(path, "no J given for a real algebra")),
        None => {
            let real = loaded.algebra.realify().map_err(|e| input_error(path, e))?;
            let j = AlmostComplexStructure::standard(real.dim()).map_err(|e| input_error(path, e))?;
            Ok((real, j))
        }
    }
}

fn config(g: &GlobalOpts, seed: u64) -> Config {
    Config {
        seed,
        lattice: Tolerances { residual: g.residual_tol, independence: g.independence_margin },
        crosscheck: CrossCheckConfig { step: g.fd_step, rank_threshold: g.rank_threshold },
        associativity_tol: g.assoc_tol,
        triples: 100,
        samples: g.samples,
    }
}

fn error_verdict(id: &str, e: impl std::fmt::Display) -> Verdict {
    Verdict::new(id, false, Some(json!({ "error": e.to_string() })))
}

pub fn dispatch(cli: Cli, seed: u64) -> Result<Output, CliError> {
    let g = cli.global;
    let cfg = config(&g, seed);
    let report = match cli.command {
        Command::Catalog(CatalogCmd::List) => catalog_list(),
        Command::Catalog(CatalogCmd::Show { name, params }) => return catalog_show(&name, params.as_deref()),
        Command::Catalog(CatalogCmd::Crosscheck { name, params, triples }) => {
            catalog_crosscheck(&name, params.as_deref(), &Config { triples, ..cfg })?
        }
        Command::VerifyIntegrable(args) => verify_integrable(&args)?,
        Command::H1 { algebra, holonomy } => h1(&algebra, holonomy.as_deref())?,
        Command::ClassifyForm { algebra, j, omega } => classify_form(&algebra, j.as_deref(), &omega)?,
        Command::VerifyTheorem9 => verify_theorem9(),
        Command::Lattice(LatticeCmd::Search { bound, out }) => lattice_search(bound, out.as_deref())?,
        Command::Lattice(LatticeCmd::Build { kind, matrix, k, b, epsilon, beta, out }) => {
            let args = BuildArgs { kind, matrix: &matrix, k, b: b.as_deref(), epsilon: &epsilon, beta: &beta };
            lattice_build(&args, &cfg.lattice, out.as_deref())?
        }
        Command::PaperReport => paper_report(&cfg),
    };
    Ok(Output::Report(report.finish(!g.no_timings)))
}

fn params(text: Option<&str>) -> Result<Params, CliError> {
    match text {
        Some(t) => Params::default().parse_assignments(t).map_err(usage),
        None => Ok(Params::default()),
    }
}

fn catalog_list() -> Report {
    let mut r = Report::new("catalog list", &[]);
    let entries: Vec<Value> = list().map(|(name, aliases)| json!({ "name": name, "aliases": aliases })).collect();
    r.set("entries", entries);
    r
}

fn catalog_show(name: &str, p: Option<&str>) -> Result<Output, CliError> {
    let e = get(name, &params(p)?).map_err(usage)?;
    Ok(Output::Raw(io::algebra_to_json(&e.algebra, e.j.as_ref())))
}

fn catalog_crosscheck(name: &str, p: Option<&str>, cfg: &Config) -> Result<Report, CliError> {
    let e = get(name, &params(p)?).map_err(usage)?;
    let mut r = Report::new("catalog crosscheck", &[("name", name.as_bytes()), ("params", p.unwrap_or("").as_bytes())]);
    r.set("name", e.name);
    r.set("params", &e.params);
    let start = Instant::now();
    match brackets_from_group_law(&e, &cfg.crosscheck) {
        Ok(report) => {
            r.push(Verdict::new(
                "invariants_match",
                report.invariants_match,
                Some(json!({ "numeric": report.numeric, "stored": report.stored })),
            ));
            r.set("max_abs_constant", report.max_abs_constant);
        }
        Err(err) => r.push(error_verdict("invariants_match", err)),
    }
    r.record("crosscheck", start);
    let start = Instant::now();
    match associativity_residual(&e, cfg.triples, cfg.seed) {
        Ok(res) => r.push(Verdict::new("associativity", res <= cfg.associativity_tol, Some(json!(res)))),
        Err(err) => r.push(error_verdict("associativity", err)),
    }
    r.record("associativity", start);
    Ok(r)
}

fn verify_integrable(args: &AlgebraArgs) -> Result<Report, CliError> {
    let (text, loaded) = load(args)?;
    let mut r = Report::new("verify-integrable", &[("algebra", text.as_bytes())]);
    let jacobi = loaded.algebra.jacobi_check();
    r.push(Verdict::new("jacobi", jacobi.ok, jacobi.witness.map(|(a, b, c)| json!([a + 1, b + 1, c + 1]))));
    let (l, j) = real_pair(&args.file, loaded)?;
    r.push(Verdict::new("j_squared", true, None));
    let start = Instant::now();
    match is_integrable(&l, &j) {
        Ok(rep) => {
            let witness = rep.witness.map(|(a, b)| json!([a + 1, b + 1]));
            r.set("integrable", rep.ok);
            r.push(Verdict::new("integrable", rep.ok, witness));
        }
        Err(e) => r.push(error_verdict("integrable", e)),
    }
    r.record("nijenhuis", start);
    Ok(r)
}

fn h1(args: &AlgebraArgs, holonomy: Option<&Path>) -> Result<Report, CliError> {
    let (text, loaded) = load(args)?;
    let l = loaded.algebra;
    let hol_text = holonomy.map(read).transpose()?;
    let mut inputs: Vec<(&str, &[u8])> = vec![("algebra", text.as_bytes())];
    if let Some(t) = &hol_text {
        inputs.push(("holonomy", t.as_bytes()));
    }
    let mut r = Report::new("h1", &inputs);
    let action = match (holonomy, &hol_text) {
        (Some(path), Some(t)) => io::parse_holonomy(t).map_err(|e| input_error(path, e))?,
        _ => {
            let quotient = holonomy_quotient_dim(&l).map_err(|e| input_error(&args.file, e))?;
            if quotient > 0 {
                return Err(usage(format!(
                    "[g, g]/[n, n] has dimension {quotient}, so h^1 depends on the lattice: pass --holonomy"
                )));
            }
            HolonomyAction::trivial()
        }
    };
    let start = Instant::now();
    match winkelmann_h1(&l, &action) {
        Ok(w) => {
            r.set("h1", w.h1);
            r.set("h1_lie", w.h1_lie);
            r.set("dimW", w.dim_w);
            r.push(Verdict::new("winkelmann", true, None));
        }
        Err(e) => r.push(error_verdict("winkelmann", e)),
    }
    r.record("h1", start);
    Ok(r)
}

fn classify_form(args: &AlgebraArgs, j_path: Option<&Path>, omega: &Path) -> Result<Report, CliError> {
    let (text, loaded) = load(args)?;
    let w_text = read(omega)?;
    let j_text = j_path.map(read).transpose()?;
    let mut inputs: Vec<(&str, &[u8])> = vec![("algebra", text.as_bytes()), ("omega", w_text.as_bytes())];
    if let Some(t) = &j_text {
        inputs.push(("J", t.as_bytes()));
    }
    let mut r = Report::new("classify-form", &inputs);
    let (l, j) = match (j_path, &j_text) {
        (Some(path), Some(t)) => {
            let l = loaded.algebra;
            let j = io::parse_complex_structure(t, l.dim()).map_err(|e| input_error(path, e))?;
            (l, j)
        }
        _ => real_pair(&args.file, loaded)?,
    };
    let w = io::parse_two_form(&w_text, l.dim()).map_err(|e| input_error(omega, e))?;
    let start = Instant::now();
    let verdict = classify(&l, &j, &w);
    r.record("classify", start);
    match verdict {
        Ok(class) => {
            r.push(Verdict::new("integrable", true, None));
            r.set("verdict", class.tag());
            if let FormClass::Kahler { p, q } | FormClass::PseudoKahler { p, q } = class {
                r.set("signature", json!({ "p": p, "q": q }));
            }
            let stage = match class {
                FormClass::NotClosed => 0,
                FormClass::Incompatible => 1,
                FormClass::Degenerate => 2,
                FormClass::Kahler { .. } | FormClass::PseudoKahler { .. } => 3,
            };
            for (k, id) in ["closed", "compatible", "nondegenerate"].into_iter().enumerate() {
                r.push(match k.cmp(&stage) {
                    std::cmp::Ordering::Less => Verdict::new(id, true, None),
                    std::cmp::Ordering::Equal => Verdict::new(id, false, None),
                    std::cmp::Ordering::Greater => Verdict::skip(id, "an earlier check failed"),
                });
            }
        }
        Err(PseudoKahlerError::NotIntegrable(a, b)) => {
            r.push(Verdict::new("integrable", false, Some(json!([a + 1, b + 1]))));
        }
        Err(e) => return Err(input_error(omega, e)),
    }
    Ok(r)
}

fn verify_theorem9() -> Report {
    let mut r = Report::new("verify-theorem9", &[]);
    let start = Instant::now();
    let w = omega_coordinate();
    r.push(Verdict::new("presentations_equal", omega_mc() == w, None));
    let d = |f: &solvkit::coordinate::ExpForm| ext_d(f).map(|x| x.is_zero());
    match (d(&w), d(&omega_mc())) {
        (Ok(a), Ok(b)) => r.push(Verdict::new("d_omega_zero", a && b, Some(json!({ "coordinate": a, "maurer_cartan": b })))),
        (Err(e), _) | (_, Err(e)) => r.push(error_verdict("d_omega_zero", e)),
    }
    let invariant: Vec<(i64, bool)> = (-2..=2)
        .map(|k| (k, pullback_translation(&w, &LatticeTranslation::new(Rational::zero(), rat(k, 1))) == w))
        .collect();
    let failing: Vec<i64> = invariant.iter().filter(|(_, ok)| !ok).map(|(k, _)| *k).collect();
    r.push(Verdict::new("invariance_k1", failing.is_empty(), Some(json!({ "k": [-2, -1, 0, 1, 2], "failing": failing }))));
    let half = pullback_translation(&w, &LatticeTranslation::new(Rational::zero(), rat(1, 2))) != w;
    r.push(Verdict::new("negative_half_integer", half, Some(json!({ "w1_im_pi": "1/2", "invariant": !half }))));
    r.record("pipeline", start);
    let pointwise = (|| -> anyhow::Result<FormClass> {
        let l = get("nonnilpotent3", &Params::default())?.algebra.realify()?;
        let j = AlmostComplexStructure::standard(6)?;
        Ok(classify_pointwise(&l, &j, &omega_closedness_certificate()?)?)
    })();
    match pointwise {
        Ok(class) => r.set("identity_value", class),
        Err(e) => r.set("identity_value", json!({ "error": e.to_string() })),
    }
    r
}

fn lattice_search(bound: i64, out: Option<&Path>) -> Result<Report, CliError> {
    let mut r = Report::new("lattice search", &[("bound", &bound.to_le_bytes())]);
    let start = Instant::now();
    let hits = search_palindromic(bound).map_err(usage)?;
    r.record("search", start);
    let count = |c: SearchClass| hits.iter().filter(|h| h.classification == c).count();
    r.set("bound", bound);
    r.set("counts", json!({ "3a": count(SearchClass::ThreeA), "3b": count(SearchClass::ThreeB), "excluded": count(SearchClass::Excluded) }));
    match out {
        Some(path) => {
            let body = serde_json::to_string_pretty(&hits).expect("hits serialize");
            std::fs::write(path, body + "\n").map_err(|e| input_error(path, e))?;
            r.set("out", path.display().to_string());
        }
        None => r.set("hits", &hits),
    }
    r.push(Verdict::new("search", true, None));
    Ok(r)
}

struct BuildArgs<'a> {
    kind: LatticeKindArg,
    matrix: &'a Path,
    k: Option<i64>,
    b: Option<&'a Path>,
    epsilon: &'a str,
    beta: &'a str,
}

fn int_matrix(path: &Path) -> Result<(String, IntMatrix), CliError> {
    let text = read(path)?;
    let rows: Vec<Vec<i64>> = serde_json::from_str(&text).map_err(|e| input_error(path, e))?;
    let m = IntMatrix::new(rows).map_err(|e| input_error(path, e))?;
    Ok((text, m))
}

fn parse_beta(s: &str) -> Result<[num_complex::Complex<f64>; 2], CliError> {
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(usage)?;
    match v[..] {
        [a, b, c, d] => Ok([num_complex::Complex::new(a, b), num_complex::Complex::new(c, d)]),
        _ => Err(usage("--beta takes four numbers re1,im1,re2,im2")),
    }
}

fn lattice_build(args: &BuildArgs, tol: &Tolerances, out: Option<&Path>) -> Result<Report, CliError> {
    let (text, a) = int_matrix(args.matrix)?;
    let b = args.b.map(int_matrix).transpose()?;
    let mut inputs: Vec<(&str, &[u8])> = vec![("matrix", text.as_bytes())];
    if let Some((t, _)) = &b {
        inputs.push(("b", t.as_bytes()));
    }
    let flags = format!("{:?} k={:?} epsilon={} beta={}", args.kind, args.k, args.epsilon, args.beta);
    inputs.push(("flags", flags.as_bytes()));
    let mut r = Report::new("lattice build", &inputs);
    let start = Instant::now();
    let built: Result<LatticeSpec, LatticeError> = match args.kind {
        LatticeKindArg::Nilpotent => build_lattice_nilpotent_with(&a, parse_beta(args.beta)?, tol),
        LatticeKindArg::Nonnilpotent => {
            let second = match b {
                Some((_, m)) => SecondHolonomy::Matrix(m),
                None => SecondHolonomy::Phase(args.k.unwrap_or(1)),
            };
            build_lattice_nonnilpotent_with(&a, &second, tol)
        }
        LatticeKindArg::Nakamura => {
            let eps: Scalar = args.epsilon.parse().map_err(usage)?;
            if !eps.is_real() {
                return Err(usage("--epsilon is the imaginary part and must be rational"));
            }
            nakamura_lattice_with(&a, &eps.real_part(), args.k.unwrap_or(1), tol)
        }
    };
    r.record("build", start);
    match built {
        Ok(spec) => {
            let v = verify_lattice_spec(&spec);
            r.push(Verdict::new("build", true, None));
            r.push(Verdict::new("residual", v.max_residual <= tol.residual, Some(json!(v.max_residual))));
            r.push(Verdict::new("independence", v.independence_det > tol.independence, Some(json!(v.independence_det))));
            if let Some(path) = out {
                let body = serde_json::to_string_pretty(&spec).expect("specs serialize");
                std::fs::write(path, body + "\n").map_err(|e| input_error(path, e))?;
            }
            r.set("spec", &spec);
        }
        Err(e) => r.push(error_verdict("build", e)),
    }
    Ok(r)
}

fn paper_report(cfg: &Config) -> Report {
    let described = format!("{cfg:?}");
    let mut r = Report::new("paper-report", &[("config", described.as_bytes())]);
    let start = Instant::now();
    let verdicts = criteria::run_all(cfg);
    r.record("suite", start);
    let passed = verdicts.iter().filter(|v| v.status == crate::report::Status::Pass).count();
    r.set("criteria", verdicts.len());
    r.set("passed", passed);
    for v in verdicts {
        r.push(v);
    }
    r
}
