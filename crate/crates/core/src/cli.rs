//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::autgroup::automorphism_group;
use crate::catalog::{standard_instances, CatalogEntry, ExpectedDegree, ExpectedOrder, Family, Instance, FAMILIES};
use crate::distmat::{
    label_exact, label_float, read_matrix_csv, read_matrix_json, sphere_partition, DistmatError, LabeledDistanceMatrix,
    DEFAULT_TOL,
};
use crate::geometry::{circumsphere_check, read_instance, squared_distances, write_instance, PointSet};
use crate::homogeneity::{
    homogeneity_degree, is_m_point_homogeneous, resolve_dimension, verify_witness, Degree, DegreeOptions, DegreeReport,
    LevelTime, Termination, Verdict, Witness,
};
use crate::permgroup::PermGroup;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TABLE_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_AMBIGUOUS: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("ambiguous clustering: {0}")]
    Ambiguous(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Ambiguous(_) => EXIT_AMBIGUOUS,
        }
    }
}

impl From<DistmatError> for CliError {
    fn from(e: DistmatError) -> Self {
        match e {
            DistmatError::AmbiguousClustering { .. } => CliError::Ambiguous(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "homdeg", version, about = "Isometry groups and point homogeneity degrees of finite metric spaces")]
pub struct Cli {
    /// Worker threads for the homogeneity search; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Permit the 600-cell and 120-cell.
    #[arg(long, global = true)]
    pub allow_expensive: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List or export catalog families.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Isometry group, spheres and homogeneity degree of one space.
    Analyze(AnalyzeArgs),
    /// Expected against computed values on the standard instance set.
    Table {
        #[arg(long)]
        json: bool,
    },
    /// Base, strong generators and orbits of the isometry group.
    Group {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        json: bool,
    },
    /// Find or check a pair of isometric tuples that no isometry relates.
    Witness(WitnessArgs),
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List {
        #[arg(long)]
        json: bool,
    },
    /// Print an instance as a points file, or a matrix file for abstract metrics.
    Export { name: String },
}

#[derive(Debug, Args, Clone)]
pub struct SourceArgs {
    /// Catalog instance, `family` or `family:key=value,...`.
    #[arg(long, group = "source")]
    pub catalog: Option<String>,
    /// JSON points file.
    #[arg(long, group = "source")]
    pub points_file: Option<PathBuf>,
    /// Squared-distance matrix, JSON (exact) or CSV (floats).
    #[arg(long, group = "source")]
    pub matrix_file: Option<PathBuf>,
    /// Label distances numerically; the tolerance defaults to $HOMDEG_TOL, else 1e-9.
    #[arg(long, value_name = "TOL", num_args = 0..=1)]
    pub float: Option<Option<f64>>,
    /// Affine dimension for matrix inputs.
    #[arg(long)]
    pub dimension: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Stop after testing this m.
    #[arg(long)]
    pub max_m: Option<usize>,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub no_accelerator: bool,
    /// Prune antipodal classes and orbits on centrally symmetric inputs.
    #[arg(long)]
    pub antipodal_pruning: bool,
    /// Run the full search next to every shortcut, and the brute oracle on small inputs.
    #[arg(long)]
    pub cross_check: bool,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub m: Option<usize>,
    /// Comma-separated point indices of the first tuple to check.
    #[arg(long, value_delimiter = ',', requires = "second")]
    pub first: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', requires = "first")]
    pub second: Option<Vec<usize>>,
    #[arg(long)]
    pub json: bool,
}

/// A space ready for analysis.
pub struct Loaded {
    pub name: String,
    pub ldm: LabeledDistanceMatrix,
    pub points: Option<PointSet>,
    pub dimension: Option<usize>,
    pub entry: Option<CatalogEntry>,
}

pub const TOL_ENV: &str = "HOMDEG_TOL";

/// Tolerance for float labelling: explicit value, then the environment, then the default.
fn float_tolerance(explicit: Option<f64>) -> Result<f64, CliError> {
    let tol = match explicit {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| CliError::Input(format!("{TOL_ENV}={v} is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Input(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    Ok(tol)
}

pub fn load(src: &SourceArgs, allow_expensive: bool) -> Result<Loaded, CliError> {
    let float = match src.float {
        Some(explicit) => Some(float_tolerance(explicit)?),
        None => None,
    };
    if let Some(name) = &src.catalog {
        let family: Family = name.parse().map_err(input)?;
        if family.is_expensive() && !allow_expensive {
            return Err(CliError::Input(format!("{} is expensive; pass --allow-expensive", family.family_name())));
        }
        let entry = family.generate().map_err(input)?;
        let ldm = match &entry.instance {
            Instance::Points(ps) => label_points(ps, float)?,
            Instance::Matrix(m) => m.clone(),
        };
        let points = entry.point_set().cloned();
        let dimension = src.dimension.or(entry.declared_dimension);
        return Ok(Loaded { name: entry.name.clone(), ldm, points, dimension, entry: Some(entry) });
    }
    if let Some(path) = &src.points_file {
        let ps = read_instance(&read(path)?).map_err(input)?;
        let ldm = label_points(&ps, float)?;
        let name = if ps.name().is_empty() { stem(path) } else { ps.name().to_string() };
        let dimension = src.dimension.or(ps.declared_dimension());
        return Ok(Loaded { name, ldm, points: Some(ps), dimension, entry: None });
    }
    if let Some(path) = &src.matrix_file {
        let text = read(path)?;
        let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        let ldm = if is_csv {
            let m = read_matrix_csv(text.as_bytes())?;
            label_float(&m, float.map_or_else(|| float_tolerance(None), Ok)?)?
        } else {
            let exact = read_matrix_json(&text)?;
            match float {
                Some(tol) => label_float(&exact.to_float_matrix(), tol)?.with_dimension_hint(exact.dimension_hint()),
                None => exact,
            }
        };
        let dimension = src.dimension.or(ldm.dimension_hint());
        return Ok(Loaded { name: stem(path), ldm, points: None, dimension, entry: None });
    }
    Err(CliError::Input("no source: give --catalog, --points-file or --matrix-file".into()))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned())
}

fn label_points(ps: &PointSet, float: Option<f64>) -> Result<LabeledDistanceMatrix, CliError> {
    let d = squared_distances(ps);
    Ok(match float {
        None => label_exact(&d)?,
        Some(tol) => {
            let f: Vec<Vec<f64>> = d.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect();
            label_float(&f, tol)?
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Shell {
    pub label: u16,
    pub squared_distance: String,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct WallTimes {
    pub automorphisms: f64,
    pub levels: Vec<LevelTime>,
}

/// The `analyze` report.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub instance: String,
    pub k: usize,
    pub n: usize,
    pub group_order: String,
    pub shells: Vec<usize>,
    pub shell_values: Vec<Shell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_sq: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<f64>,
    pub verdicts: Vec<Verdict>,
    pub degree: Degree,
    pub termination: Termination,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spot_check: Option<Verdict>,
    pub accelerator_used: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
    pub wall_times: WallTimes,
}

pub struct Analysis {
    pub report: Report,
    pub group: PermGroup,
    pub degree: DegreeReport,
}

pub fn analyze(loaded: &Loaded, opts: &DegreeOptions, oracle: bool) -> Result<Analysis, CliError> {
    let start = Instant::now();
    let group = automorphism_group(&loaded.ldm);
    let aut_time = start.elapsed().as_secs_f64();
    let n = resolve_dimension(&loaded.ldm, loaded.points.as_ref(), loaded.dimension);
    let degree = homogeneity_degree(&loaded.ldm, &group, Some(n), loaded.points.as_ref(), opts)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let oracle_agrees = (oracle && loaded.ldm.k() <= crate::oracle::MAX_K).then(|| oracle_agreement(&loaded.ldm, &group));
    let sp = sphere_partition(&loaded.ldm, 0);
    let shell_values: Vec<Shell> = sp
        .shells
        .iter()
        .map(|(l, pts)| Shell {
            label: *l,
            squared_distance: class_text(&loaded.ldm, *l),
            size: pts.len(),
        })
        .collect();
    let radius_sq = loaded
        .points
        .as_ref()
        .and_then(|ps| circumsphere_check(ps).radius_sq)
        .map(|r| r.to_string());
    let report = Report {
        instance: loaded.name.clone(),
        k: loaded.ldm.k(),
        n,
        group_order: group.order().to_string(),
        shells: sp.sizes(),
        shell_values,
        radius_sq,
        certificate: loaded.ldm.certificate(),
        verdicts: degree.verdicts.clone(),
        degree: degree.degree,
        termination: degree.termination,
        spot_check: degree.spot_check.clone(),
        accelerator_used: degree.accelerator_used,
        oracle_agrees,
        wall_times: WallTimes { automorphisms: aut_time, levels: degree.wall_times.clone() },
    };
    Ok(Analysis { report, group, degree })
}

fn class_text(ldm: &LabeledDistanceMatrix, label: u16) -> String {
    match ldm.class_value(label).as_exact() {
        Some(s) => s.to_string(),
        None => format!("{:.12}", ldm.class_value(label).to_f64()),
    }
}

/// Group order and verdicts for m ≤ 4 against the exhaustive oracle.
pub fn oracle_agreement(ldm: &LabeledDistanceMatrix, g: &PermGroup) -> bool {
    let Ok(auts) = crate::oracle::brute_automorphisms(ldm) else { return false };
    if num_bigint::BigUint::from(auts.len()) != *g.order() {
        return false;
    }
    (1..=crate::oracle::MAX_M).all(|m| {
        let main = is_m_point_homogeneous(ldm, g, m).map(|v| v.holds).ok();
        main.is_some() && main == crate::oracle::brute_m_homog(ldm, m).ok()
    })
}

fn write_report<W: Write>(out: &mut W, r: &Report) -> std::io::Result<()> {
    writeln!(out, "instance: {}", r.instance)?;
    writeln!(out, "points: {}", r.k)?;
    writeln!(out, "dimension: {}", r.n)?;
    writeln!(out, "group order: {}", r.group_order)?;
    let shells: Vec<String> = r.shell_values.iter().map(|s| format!("{}@{}", s.size, s.squared_distance)).collect();
    writeln!(out, "shells (size@squared distance): {}", shells.join(" "))?;
    if let Some(rs) = &r.radius_sq {
        writeln!(out, "circumradius squared: {rs}")?;
    }
    if let Some(c) = r.certificate {
        writeln!(out, "clustering certificate: {c:.3e}")?;
    }
    for v in &r.verdicts {
        write_verdict(out, v)?;
    }
    if let Some(v) = &r.spot_check {
        write!(out, "spot check ")?;
        write_verdict(out, v)?;
    }
    if r.accelerator_used {
        writeln!(out, "three-distance accelerator: used")?;
    }
    if let Some(ok) = r.oracle_agrees {
        writeln!(out, "oracle: {}", if ok { "agrees" } else { "DISAGREES" })?;
    }
    writeln!(out, "degree: {} ({})", r.degree, termination_name(r.termination))
}

fn write_verdict<W: Write>(out: &mut W, v: &Verdict) -> std::io::Result<()> {
    match &v.witness {
        None => writeln!(out, "m={}: {}", v.m, if v.holds { "holds" } else { "fails" }),
        Some(w) => writeln!(out, "m={}: fails, witness {:?} vs {:?}", v.m, w.first, w.second),
    }
}

fn termination_name(t: Termination) -> String {
    serde_json::to_value(t).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub instance: String,
    pub expected_degree: String,
    pub computed_degree: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_order: Option<String>,
    pub computed_order: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_shells: Option<Vec<usize>>,
    pub computed_shells: Vec<usize>,
    pub pass: bool,
    pub seconds: f64,
}

pub fn degree_matches(expected: &ExpectedDegree, computed: Degree) -> bool {
    match (expected, computed) {
        (ExpectedDegree::Finite(a), Degree::Finite(b)) => *a == b,
        (ExpectedDegree::Infinite, Degree::Infinite) => true,
        (ExpectedDegree::AtLeast(a), Degree::Finite(b)) => b >= *a,
        (ExpectedDegree::AtLeast(_), Degree::Infinite) => true,
        _ => false,
    }
}

fn expected_degree_text(e: &Option<ExpectedDegree>) -> String {
    match e {
        Some(ExpectedDegree::Finite(q)) => q.to_string(),
        Some(ExpectedDegree::Infinite) => "infinite".into(),
        Some(ExpectedDegree::AtLeast(q)) => format!(">={q}"),
        None => "-".into(),
    }
}

/// Checks one catalog instance against its expected facts.
pub fn table_row(family: &Family) -> Result<TableRow, CliError> {
    let start = Instant::now();
    let src = SourceArgs { catalog: Some(family.to_string()), points_file: None, matrix_file: None, float: None, dimension: None };
    let loaded = load(&src, true)?;
    let a = analyze(&loaded, &DegreeOptions::default(), false)?;
    let e = &loaded.entry.as_ref().expect("catalog source").expected;
    let mut pass = e.vertex_count == a.report.k;
    if let Some(d) = &e.degree {
        pass &= degree_matches(d, a.report.degree);
    }
    let expected_order = e.group_order.as_ref().map(|o| match o {
        ExpectedOrder::Exact(n) => {
            pass &= a.group.order() == n;
            n.to_string()
        }
        ExpectedOrder::AtLeast(n) => {
            pass &= a.group.order() >= n;
            format!(">={n}")
        }
    });
    if let Some(s) = &e.shells {
        pass &= *s == a.report.shells;
    }
    if let Some(c) = e.distance_classes {
        pass &= c == loaded.ldm.num_classes();
    }
    if let Some(r) = &e.radius_sq {
        pass &= a.report.radius_sq.as_deref() == Some(r.to_string().as_str());
    }
    Ok(TableRow {
        instance: loaded.name.clone(),
        expected_degree: expected_degree_text(&e.degree),
        computed_degree: a.report.degree.to_string(),
        expected_order,
        computed_order: a.report.group_order.clone(),
        expected_shells: e.shells.clone(),
        computed_shells: a.report.shells.clone(),
        pass,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn table_instances(allow_expensive: bool) -> Vec<Family> {
    let mut v = standard_instances();
    if allow_expensive {
        v.push(Family::Cell600);
        v.push(Family::Cell120);
    }
    v
}

fn write_row<W: Write>(out: &mut W, r: &TableRow) -> std::io::Result<()> {
    write!(out, "{}: expected degree {}, computed {}", r.instance, r.expected_degree, r.computed_degree)?;
    if let Some(o) = &r.expected_order {
        write!(out, "; order expected {o}, computed {}", r.computed_order)?;
    }
    if let Some(s) = &r.expected_shells {
        write!(out, "; shells expected {s:?}, computed {:?}", r.computed_shells)?;
    }
    writeln!(out, ", {}", if r.pass { "PASS" } else { "FAIL" })
}

fn catalog_list<W: Write>(out: &mut W, json: bool) -> std::io::Result<()> {
    if json {
        #[derive(Serialize)]
        struct Row<'a> {
            family: &'a str,
            params: &'a str,
            vertices: &'a str,
            expensive: bool,
        }
        let rows: Vec<Row> = FAMILIES
            .iter()
            .map(|f| Row { family: f.name, params: f.params, vertices: f.vertices, expensive: f.expensive })
            .collect();
        return writeln!(out, "{}", serde_json::to_string_pretty(&rows).unwrap());
    }
    for f in FAMILIES {
        let flag = if f.expensive { "  [expensive]" } else { "" };
        writeln!(out, "{:<18} params: {:<34} vertices: {}{}", f.name, f.params, f.vertices, flag)?;
    }
    writeln!(out)?;
    writeln!(out, "standard instances:")?;
    for family in standard_instances() {
        let Ok(entry) = family.generate() else { continue };
        let e = &entry.expected;
        let mut facts = vec![format!("k={}", e.vertex_count)];
        if e.degree.is_some() {
            facts.push(format!("degree {}", expected_degree_text(&e.degree)));
        }
        match &e.group_order {
            Some(ExpectedOrder::Exact(n)) => facts.push(format!("order {n}")),
            Some(ExpectedOrder::AtLeast(n)) => facts.push(format!("order >={n}")),
            None => {}
        }
        if let Some(s) = &e.shells {
            facts.push(format!("shells {s:?}"));
        }
        if let Some(r) = &e.radius_sq {
            facts.push(format!("radius^2 {r}"));
        }
        writeln!(out, "  {:<28} {}", family.to_string(), facts.join(", "))?;
    }
    Ok(())
}

fn export(name: &str, allow_expensive: bool) -> Result<String, CliError> {
    let family: Family = name.parse().map_err(input)?;
    if family.is_expensive() && !allow_expensive {
        return Err(CliError::Input(format!("{} is expensive; pass --allow-expensive", family.family_name())));
    }
    let entry = family.generate().map_err(input)?;
    match &entry.instance {
        Instance::Points(ps) => Ok(write_instance(ps)),
        Instance::Matrix(m) => {
            let rows: Option<Vec<Vec<String>>> = (0..m.k())
                .map(|i| m.row(i).iter().map(|&l| m.class_value(l).as_exact().map(|s| s.to_string())).collect())
                .collect();
            let Some(rows) = rows else {
                return Err(CliError::Input(format!("{} has no exact distance values to export", entry.name)));
            };
            let doc = serde_json::json!({
                "name": entry.name,
                "dimension_hint": m.dimension_hint().or(entry.declared_dimension),
                "squared_distances": rows,
            });
            Ok(serde_json::to_string_pretty(&doc).unwrap() + "\n")
        }
    }
}

#[derive(Serialize)]
struct GroupReport {
    instance: String,
    order: String,
    base: Vec<usize>,
    transversal_sizes: Vec<usize>,
    generators: Vec<Vec<usize>>,
    orbits: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct WitnessReport {
    instance: String,
    m: usize,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile_equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orbit_inequivalent: Option<bool>,
}

/// Runs a parsed command line, writing results to `out`; returns the exit code.
pub fn run<W: Write>(cli: Cli, out: &mut W) -> i32 {
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return EXIT_INPUT;
    }
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Input(format!("write failed: {e}"))
}

fn dispatch<W: Write>(cli: Cli, out: &mut W) -> Result<i32, CliError> {
    let allow = cli.allow_expensive;
    match cli.command {
        Command::Catalog { action: CatalogAction::List { json } } => catalog_list(out, json).map_err(io)?,
        Command::Catalog { action: CatalogAction::Export { name } } => {
            out.write_all(export(&name, allow)?.as_bytes()).map_err(io)?
        }
        Command::Analyze(args) => {
            let loaded = load(&args.source, allow)?;
            let opts = DegreeOptions {
                max_m: args.max_m,
                accelerator: !args.no_accelerator,
                antipodal_pruning: args.antipodal_pruning,
                cross_check: args.cross_check,
                ..Default::default()
            };
            let a = analyze(&loaded, &opts, args.cross_check)?;
            if args.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&a.report).unwrap()).map_err(io)?;
            } else {
                write_report(out, &a.report).map_err(io)?;
            }
        }
        Command::Table { json } => {
            let mut rows = Vec::new();
            for family in table_instances(allow) {
                let row = table_row(&family)?;
                if !json {
                    write_row(out, &row).map_err(io)?;
                }
                rows.push(row);
            }
            let failed = rows.iter().filter(|r| !r.pass).count();
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rows).unwrap()).map_err(io)?;
            } else {
                writeln!(out, "{} rows, {} failed", rows.len(), failed).map_err(io)?;
            }
            return Ok(if failed > 0 { EXIT_TABLE_FAILURE } else { EXIT_OK });
        }
        Command::Group { source, json } => {
            let loaded = load(&source, allow)?;
            let g = automorphism_group(&loaded.ldm);
            let r = GroupReport {
                instance: loaded.name,
                order: g.order().to_string(),
                base: g.base(),
                transversal_sizes: g.transversal_sizes(),
                generators: g.generators().iter().map(|p| p.images().to_vec()).collect(),
                orbits: g.orbits(),
            };
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r).unwrap()).map_err(io)?;
            } else {
                writeln!(out, "instance: {}\norder: {}\nbase: {:?}\ntransversal sizes: {:?}", r.instance, r.order, r.base, r.transversal_sizes)
                    .map_err(io)?;
                for (i, gen) in r.generators.iter().enumerate() {
                    writeln!(out, "generator {i}: {gen:?}").map_err(io)?;
                }
                writeln!(out, "orbits: {}", r.orbits.len()).map_err(io)?;
            }
        }
        Command::Witness(args) => {
            let loaded = load(&args.source, allow)?;
            let g = automorphism_group(&loaded.ldm);
            let k = loaded.ldm.k();
            let report = match (args.first, args.second) {
                (Some(first), Some(second)) => {
                    if first.len() != second.len() || first.iter().chain(&second).any(|&x| x >= k) {
                        return Err(CliError::Input(format!("tuples must have equal length and indices below {k}")));
                    }
                    let profile_equal = loaded.ldm.tuple_profile(&first) == loaded.ldm.tuple_profile(&second);
                    let inequivalent = !g.orbit_of_tuple(&first).map_err(input)?.contains(&second);
                    let w = Witness { first, second };
                    debug_assert_eq!(verify_witness(&loaded.ldm, &g, &w).ok(), Some(profile_equal && inequivalent));
                    WitnessReport {
                        instance: loaded.name,
                        m: w.first.len(),
                        holds: !(profile_equal && inequivalent),
                        orbit_inequivalent: Some(inequivalent),
                        profile_equal: Some(profile_equal),
                        witness: Some(w),
                    }
                }
                _ => {
                    let m = args.m.ok_or_else(|| CliError::Input("give --m, or --first and --second".into()))?;
                    let v = is_m_point_homogeneous(&loaded.ldm, &g, m).map_err(input)?;
                    WitnessReport {
                        instance: loaded.name,
                        m,
                        holds: v.holds,
                        witness: v.witness,
                        profile_equal: None,
                        orbit_inequivalent: None,
                    }
                }
            };
            if args.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap()).map_err(io)?;
            } else {
                match (&report.witness, report.profile_equal) {
                    (Some(w), Some(pe)) => writeln!(
                        out,
                        "{:?} vs {:?}: profiles {}, {}",
                        w.first,
                        w.second,
                        if pe { "equal" } else { "differ" },
                        if report.orbit_inequivalent == Some(true) { "different orbits" } else { "same orbit" }
                    ),
                    (Some(w), None) => writeln!(out, "m={}: fails, witness {:?} vs {:?}", report.m, w.first, w.second),
                    (None, _) => writeln!(out, "m={}: holds", report.m),
                }
                .map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}
