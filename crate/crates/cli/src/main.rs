use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use isonet::christoffel::{christoffel_with_report, ChristoffelParams};
use isonet::cmc::{cmc_darboux, initial_sphere_residual, make_cmc_cylinder, verify_cmc, CmcPair};
use isonet::darboux::{
    bianchi_fourth_with_report, darboux_with_report, ribaucour_congruence_with_tol, riccati_residual, DarbouxParams,
};
use isonet::io::{export_obj, load_net, save_net, NetDocument, TransformKind, TransformRecord};
use isonet::lattice::{gen_clifford_torus, gen_cylinder, gen_planar_grid, isothermic_deviation};
use isonet::{Net, Quaternion, VertexIndex};

#[derive(Parser)]
#[command(name = "isonet", version, about = "Discrete isothermic nets and their transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seed net.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Christoffel dual of a net.
    Christoffel(ChristoffelArgs),
    /// Darboux transform through a seed point.
    Darboux(DarbouxArgs),
    /// cmc Darboux transform of a net and its parallel cmc net.
    CmcDarboux(CmcDarbouxArgs),
    /// Fourth net of a Bianchi quadrilateral.
    Bianchi(BianchiArgs),
    /// Run the predicate battery on a net.
    Verify(VerifyArgs),
    /// Write a net as a Wavefront OBJ mesh.
    Export(ExportArgs),
}

#[derive(Args)]
struct Size {
    #[arg(long = "M", default_value_t = 8)]
    m: usize,
    #[arg(long = "N", default_value_t = 8)]
    n: usize,
    /// Output JSON file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// The planar grid m + n i.
    Grid(Size),
    /// Square-faced cylinder, closed in m.
    Cylinder {
        #[command(flatten)]
        size: Size,
        #[arg(long = "r", default_value_t = 1.0)]
        r: f64,
        /// Also write the antipodal parallel cmc net here.
        #[arg(long)]
        parallel_out: Option<PathBuf>,
    },
    /// Stereographic Clifford torus, closed in both directions.
    Clifford(Size),
}

#[derive(Args)]
struct ChristoffelArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    lambda_c: f64,
}

#[derive(Args)]
struct SeedArgs {
    /// Seed vertex as `m,n`.
    #[arg(long, value_parser = parse_index, allow_hyphen_values = true)]
    seed: VertexIndex,
    /// Random seed for a seed point or direction that is not given.
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Work on one period of the universal cover of a closed net.
    #[arg(long)]
    unroll: bool,
}

#[derive(Args)]
struct DarbouxArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[command(flatten)]
    seed: SeedArgs,
    /// Initial point `w,x,y,z` of the transform at the seed vertex.
    #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true)]
    seed_value: Option<Quaternion>,
    /// Distance of a random initial point from the net.
    #[arg(long, default_value_t = 1.0)]
    offset: f64,
}

#[derive(Args)]
struct CmcDarbouxArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// The parallel cmc net of the input.
    #[arg(long)]
    parallel: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    parallel_out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[command(flatten)]
    seed: SeedArgs,
    /// Unit direction `x,y,z` from the parallel net to the initial point.
    #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
    seed_dir: Option<[f64; 3]>,
}

#[derive(Args)]
struct BianchiArgs {
    /// The common net.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    first: PathBuf,
    #[arg(long)]
    second: PathBuf,
    /// Parameter of the first transform; read from its history if omitted.
    #[arg(long, allow_hyphen_values = true)]
    lambda1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda2: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
    /// A net that the input should be a Darboux transform of.
    #[arg(long)]
    partner: Option<PathBuf>,
    /// Darboux parameter of the pair; read from the input's history if omitted.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// A parallel net that should make the input a cmc pair.
    #[arg(long)]
    parallel: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Checks,
}

impl From<isonet::Error> for Failure {
    fn from(e: isonet::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn parse_list<const K: usize>(s: &str) -> Result<[f64; K], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != K {
        return Err(format!("expected {K} comma-separated numbers"));
    }
    let mut out = [0.0; K];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.trim().parse().map_err(|_| format!("`{p}` is not a number"))?;
    }
    Ok(out)
}

fn parse_index(s: &str) -> Result<VertexIndex, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [m, n] => Ok((
            m.trim().parse().map_err(|_| format!("`{m}` is not an integer"))?,
            n.trim().parse().map_err(|_| format!("`{n}` is not an integer"))?,
        )),
        _ => Err("expected `m,n`".into()),
    }
}

fn parse_quaternion(s: &str) -> Result<Quaternion, String> {
    parse_list::<4>(s).map(Quaternion::from_array)
}

fn parse_direction(s: &str) -> Result<[f64; 3], String> {
    parse_list::<3>(s)
}

fn check_lambda(name: &str, value: f64) -> CliResult<()> {
    if value == 0.0 || !value.is_finite() {
        return Err(Failure::Usage(format!("--{name} must be a non-zero number")));
    }
    Ok(())
}

fn load(path: &Path) -> CliResult<NetDocument> {
    load_net(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn load_with_net(path: &Path, unroll: bool) -> CliResult<(NetDocument, Net)> {
    let doc = load(path)?;
    let net = doc.to_net()?;
    Ok((doc, if unroll { net.unrolled() } else { net }))
}

fn emit(doc: &NetDocument, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => save_net(path, doc).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => {
            println!("{}", doc.to_json()?);
            Ok(())
        }
    }
}

/// A new document for `net` carrying over the metadata of `parent`.
fn derived(parent: &NetDocument, net: &Net, record: TransformRecord) -> CliResult<NetDocument> {
    let mut doc = NetDocument::from_net(net);
    doc.metadata = parent.metadata.clone();
    doc.push_record(record)?;
    Ok(doc)
}

fn generated(net: &Net, generator: Value) -> NetDocument {
    let mut doc = NetDocument::from_net(net);
    doc.metadata.insert("generator".into(), generator);
    doc
}

fn gen(kind: GenKind) -> CliResult<()> {
    match kind {
        GenKind::Grid(s) => {
            let net = gen_planar_grid(s.m, s.n)?;
            emit(
                &generated(&net, json!({"kind": "grid", "M": s.m, "N": s.n})),
                s.out.as_deref(),
            )
        }
        GenKind::Clifford(s) => {
            let net = gen_clifford_torus(s.m, s.n)?;
            emit(
                &generated(&net, json!({"kind": "clifford", "M": s.m, "N": s.n})),
                s.out.as_deref(),
            )
        }
        GenKind::Cylinder {
            size: s,
            r,
            parallel_out,
        } => {
            let generator = json!({"kind": "cylinder", "M": s.m, "N": s.n, "r": r});
            match parallel_out {
                None => emit(&generated(&gen_cylinder(s.m, s.n, r)?, generator), s.out.as_deref()),
                Some(path) => {
                    let pair = make_cmc_cylinder(s.m, s.n, r)?;
                    let mut parallel = generated(&pair.fp, generator.clone());
                    parallel.metadata.insert("role".into(), json!("parallel"));
                    emit(&parallel, Some(&path))?;
                    emit(&generated(&pair.f, generator), s.out.as_deref())
                }
            }
        }
    }
}

fn run_christoffel(a: ChristoffelArgs) -> CliResult<()> {
    check_lambda("lambda-c", a.lambda_c)?;
    let (doc, net) = load_with_net(&a.input, false)?;
    let (dual, report) = christoffel_with_report(&net, &ChristoffelParams::new(a.lambda_c, net.window()))?;
    let record = TransformRecord::new(TransformKind::Christoffel)
        .parameter("lambda_c", a.lambda_c)
        .residual("closing", report.max_closing_residual)
        .residual("path_deviation", report.path_deviation)
        .residual("seam_mismatch", report.seam_mismatch)
        .residual("isothermic", isothermic_deviation(&dual)?);
    emit(&derived(&doc, &dual, record)?, a.out.as_deref())
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.1 && norm <= 1.0 {
            return v.map(|x| x / norm);
        }
    }
}

fn seed_json(seed: VertexIndex) -> Value {
    json!([seed.0, seed.1])
}

fn run_darboux(a: DarbouxArgs) -> CliResult<()> {
    check_lambda("lambda", a.lambda)?;
    let seed_value = |net: &Net| -> CliResult<Quaternion> {
        if let Some(q) = a.seed_value {
            return Ok(q);
        }
        let Some(rng_seed) = a.seed.rng_seed else {
            return Err(Failure::Usage("give --seed-value or --rng-seed".into()));
        };
        let base = net.value(a.seed.seed.0, a.seed.seed.1)?;
        let [x, y, z] = random_unit(&mut ChaCha8Rng::seed_from_u64(rng_seed));
        Ok(base + Quaternion::imag(x, y, z) * a.offset)
    };
    let (doc, net) = load_with_net(&a.input, a.seed.unroll)?;
    let p = DarbouxParams {
        lambda: a.lambda,
        seed_index: a.seed.seed,
        seed_value: seed_value(&net)?,
    };
    let (fhat, report) = darboux_with_report(&net, &p)?;
    let record = TransformRecord::new(TransformKind::Darboux)
        .parameter("lambda", a.lambda)
        .parameter("seed", seed_json(p.seed_index))
        .parameter("seed_value", p.seed_value.to_array().to_vec())
        .parameter("unrolled", a.seed.unroll)
        .residual("riccati", report.max_riccati_residual)
        .residual("consistency", report.max_consistency)
        .residual("seam_mismatch", report.seam_mismatch)
        .residual("isothermic", isothermic_deviation(&fhat)?);
    emit(&derived(&doc, &fhat, record)?, a.out.as_deref())
}

fn run_cmc_darboux(a: CmcDarbouxArgs) -> CliResult<()> {
    check_lambda("lambda", a.lambda)?;
    let dir = match (a.seed_dir, a.seed.rng_seed) {
        (Some(d), _) => d,
        (None, Some(s)) => random_unit(&mut ChaCha8Rng::seed_from_u64(s)),
        (None, None) => return Err(Failure::Usage("give --seed-dir or --rng-seed".into())),
    };
    let (doc, f) = load_with_net(&a.input, a.seed.unroll)?;
    let (parallel_doc, fp) = load_with_net(&a.parallel, a.seed.unroll)?;
    let report = verify_cmc(&f, &fp, isonet::hexa::GEOM_TOL)?;
    let pair = CmcPair {
        f,
        fp,
        h: report.h,
        lambda_p: report.lambda_p,
        lambda_c: report.lambda_c,
    };
    let t = cmc_darboux(&pair, a.lambda, a.seed.seed, dir)?;
    let out_report = verify_cmc(&t.f, &t.fp, isonet::hexa::GEOM_TOL)?;
    let record = TransformRecord::new(TransformKind::CmcDarboux)
        .parameter("lambda", a.lambda)
        .parameter("seed", seed_json(a.seed.seed))
        .parameter("seed_dir", dir.to_vec())
        .parameter("unrolled", a.seed.unroll)
        .parameter("H", t.h)
        .residual("riccati", riccati_residual(&pair.f, &t.f, a.lambda)?.0)
        .residual("initial_sphere", initial_sphere_residual(&pair, &t.f, a.lambda)?)
        .residual("distance", out_report.distance_spread)
        .residual("christoffel", out_report.christoffel_residual)
        .residual("darboux", out_report.darboux_residual);
    if let Some(path) = &a.parallel_out {
        emit(&derived(&parallel_doc, &t.fp, record.clone())?, Some(path))?;
    }
    emit(&derived(&doc, &t.f, record)?, a.out.as_deref())
}

/// The Darboux parameter recorded last in a document's history.
fn recorded_lambda(doc: &NetDocument) -> CliResult<Option<f64>> {
    Ok(doc
        .lineage()?
        .iter()
        .rev()
        .find(|r| matches!(r.kind, TransformKind::Darboux | TransformKind::CmcDarboux))
        .and_then(|r| r.parameters.get("lambda"))
        .and_then(Value::as_f64))
}

fn lambda_or_recorded(given: Option<f64>, doc: &NetDocument, name: &str) -> CliResult<f64> {
    let value = match given {
        Some(v) => v,
        None => recorded_lambda(doc)?.ok_or_else(|| {
            Failure::Usage(format!(
                "--{name} is required: the input has no recorded Darboux parameter"
            ))
        })?,
    };
    check_lambda(name, value)?;
    Ok(value)
}

fn run_bianchi(a: BianchiArgs) -> CliResult<()> {
    let (first_doc, first) = load_with_net(&a.first, false)?;
    let (second_doc, second) = load_with_net(&a.second, false)?;
    let (doc, f) = load_with_net(&a.input, false)?;
    // transforms computed with --unroll live on the cover of a closed net
    let f = aligned(&first, f);
    let second = aligned(&first, second);
    let l1 = lambda_or_recorded(a.lambda1, &first_doc, "lambda1")?;
    let l2 = lambda_or_recorded(a.lambda2, &second_doc, "lambda2")?;
    let (fhat, report) = bianchi_fourth_with_report(&f, &first, &second, l1, l2)?;
    let record = TransformRecord::new(TransformKind::Bianchi)
        .parameter("lambda1", l1)
        .parameter("lambda2", l2)
        .parameter("first", a.first.display().to_string())
        .parameter("second", a.second.display().to_string())
        .residual("ratio_spread", report.ratio_spread)
        .residual("from_first", report.from_first)
        .residual("from_second", report.from_second);
    emit(&derived(&doc, &fhat, record)?, a.out.as_deref())
}

struct Check {
    name: &'static str,
    residual: f64,
    pass: bool,
    note: Option<String>,
}

impl Check {
    fn measured(name: &'static str, residual: f64, tol: f64) -> Self {
        Check {
            name,
            residual,
            pass: residual <= tol,
            note: None,
        }
    }

    fn failed(name: &'static str, note: String) -> Self {
        Check {
            name,
            residual: f64::NAN,
            pass: false,
            note: Some(note),
        }
    }
}

/// Brings `other` onto the window of `net`, unrolling it if `net` lives on
/// its universal cover.
fn aligned(net: &Net, other: Net) -> Net {
    if other.window() != net.window() && other.window().unrolled() == *net.window() {
        other.unrolled()
    } else {
        other
    }
}

fn run_verify(a: VerifyArgs) -> CliResult<()> {
    let (doc, net) = load_with_net(&a.input, false)?;
    let mut checks = Vec::new();
    match isothermic_deviation(&net) {
        Ok(d) => checks.push(Check::measured("isothermic", d, a.tol)),
        Err(e) => checks.push(Check::failed("isothermic", e.to_string())),
    }
    if let Some(path) = &a.partner {
        let partner = aligned(&net, load(path)?.to_net()?);
        let lambda = lambda_or_recorded(a.lambda, &doc, "lambda")?;
        match riccati_residual(&partner, &net, lambda) {
            Ok((r, _)) => checks.push(Check::measured("riccati", r, a.tol)),
            Err(e) => checks.push(Check::failed("riccati", e.to_string())),
        }
        match ribaucour_congruence_with_tol(&partner, &net, a.tol) {
            Ok(c) => {
                checks.push(Check::measured("cosphericity", c.max_residual(), a.tol));
                checks.push(Check::measured("sphere_pairs", c.max_vertex_residual, a.tol));
            }
            Err(e) => checks.push(Check::failed("cosphericity", e.to_string())),
        }
    }
    let mut cmc = None;
    if let Some(path) = &a.parallel {
        let parallel = aligned(&net, load(path)?.to_net()?);
        match verify_cmc(&net, &parallel, a.tol) {
            Ok(r) => {
                checks.push(Check::measured("cmc_christoffel", r.christoffel_residual, a.tol));
                checks.push(Check::measured("cmc_distance", r.distance_spread, a.tol));
                checks.push(Check::measured("cmc_darboux", r.darboux_residual, a.tol));
                cmc = Some(r);
            }
            Err(e) => checks.push(Check::failed("cmc", e.to_string())),
        }
    }
    let pass = checks.iter().all(|c| c.pass);

    match a.report {
        ReportFormat::Json => {
            let items: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "residual": if c.residual.is_finite() { json!(c.residual) } else { Value::Null },
                        "tol": a.tol,
                        "pass": c.pass,
                        "error": c.note,
                    })
                })
                .collect();
            let mut out = json!({"pass": pass, "checks": items});
            if let Some(r) = cmc {
                out["cmc"] = json!({"H": r.h, "lambda_p": r.lambda_p, "lambda_c": r.lambda_c});
            }
            println!("{}", serde_json::to_string_pretty(&out).expect("plain JSON values"));
        }
        ReportFormat::Text => {
            for c in &checks {
                let status = if c.pass { "pass" } else { "FAIL" };
                match &c.note {
                    Some(note) => println!("{status} {:<16} {note}", c.name),
                    None => println!("{status} {:<16} {:.3e} (tol {:.1e})", c.name, c.residual, a.tol),
                }
            }
            if let Some(r) = cmc {
                println!("cmc H = {} lambda_p = {} lambda_c = {}", r.h, r.lambda_p, r.lambda_c);
            }
        }
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn run_export(a: ExportArgs) -> CliResult<()> {
    let net = load(&a.input)?.to_net()?;
    let summary = export_obj(&net, &a.out).map_err(|e| Failure::Runtime(format!("{}: {e}", a.out.display())))?;
    if summary.projected {
        eprintln!("warning: net has non-zero real parts; dropped them for the OBJ");
    }
    println!(
        "wrote {} vertices, {} faces to {}",
        summary.vertices,
        summary.faces,
        a.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen { kind } => gen(kind),
        Command::Christoffel(a) => run_christoffel(a),
        Command::Darboux(a) => run_darboux(a),
        Command::CmcDarboux(a) => run_cmc_darboux(a),
        Command::Bianchi(a) => run_bianchi(a),
        Command::Verify(a) => run_verify(a),
        Command::Export(a) => run_export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Checks) => ExitCode::from(1),
    }
}
