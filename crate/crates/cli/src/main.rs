use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mixfrob::algebra::frobenius_filtration_existence;
use mixfrob::exactalg::{is_unimodular_laurent, laurent_smith};
use mixfrob::filtration::NondegenerateFiltration;
use mixfrob::formal::{
    check_formal_mfs, check_formal_saito, check_localized_formal_frobenius, limit_mfs, potential_vector_field,
    verify_potential, FormalMFS,
};
use mixfrob::geom::{build_twisted_product, classical_limit_filtration};
use mixfrob::io::{self, write_laurent};
use mixfrob::mfa::{
    check_mfa, filtration_from_profile, nilpotent_filtration_direct, nilpotent_localized_metric, normalize_metric,
    residue_metric_well_defined_check, LocalizedMetric, MixedFrobeniusAlgebra, NilpotentData,
};
use mixfrob::{Error, VerificationReport, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "mixfrob", version, about = "Construct and verify mixed Frobenius algebras and structures")]
struct Cli {
    /// Truncation order T for formal structures
    #[arg(long, global = true, default_value_t = 4)]
    order: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized sweeps (lift independence)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for axiom checks (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Smith decomposition of a localized metric and its κ profile
    Snf { matrix: PathBuf },
    /// Filtration and graded metrics of a localized metric
    Filtration {
        file: PathBuf,
        /// Read an algebra file with nilpotents and compare with the direct construction
        #[arg(long)]
        nilpotent: bool,
    },
    /// The nilpotent construction g(xy, n^{-1}) on an algebra file
    Nilpotent { algebra: PathBuf },
    /// Frobenius filtration of a split algebra
    Existence { algebra: PathBuf },
    /// Check the axioms of an algebra file with a filtration
    VerifyMfa { algebra: PathBuf },
    /// Check a structure file (Saito, formal MFS or localized, by content)
    FormalCheck { structure: PathBuf },
    /// Twisted product from geometry and correlators, and its λ → 0 limit
    QuantumLimit { geometry: PathBuf, gw: PathBuf },
    /// Potential vector field of a structure file
    Potential { structure: PathBuf },
}

#[derive(Serialize)]
struct Record {
    name: String,
    certified_order: Option<usize>,
    passed: bool,
    counterexample: Option<String>,
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs_digest: String,
    status: &'static str,
    records: Vec<Record>,
    artifacts: BTreeMap<String, Value>,
}

impl RunReport {
    fn new(command: &str, inputs: &[(&Path, &str)]) -> Self {
        let mut h = Sha256::new();
        for (p, text) in inputs {
            h.update(p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default().as_bytes());
            h.update([0]);
            h.update(text.as_bytes());
            h.update([0]);
        }
        RunReport {
            command: command.into(),
            inputs_digest: hex::encode(h.finalize()),
            status: "pass",
            records: Vec::new(),
            artifacts: BTreeMap::new(),
        }
    }

    fn absorb(&mut self, prefix: &str, r: &VerificationReport) {
        for a in &r.records {
            self.records.push(Record {
                name: format!("{prefix}{}", a.name),
                certified_order: a.certified_order,
                passed: a.passed,
                counterexample: a.counterexample.clone(),
            });
        }
    }

    fn check(&mut self, name: &str, outcome: Result<(), String>) {
        self.records.push(Record { name: name.into(), certified_order: None, passed: outcome.is_ok(), counterexample: outcome.err() });
    }

    fn artifact(&mut self, key: &str, v: Value) {
        self.artifacts.insert(key.into(), v);
    }

    fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    fn render(&mut self, format: Format) -> String {
        self.status = if self.passed() { "pass" } else { "fail" };
        match format {
            Format::Structured => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Text => {
                let mut out = format!("command: {}\ninputs: {}\n", self.command, self.inputs_digest);
                for r in &self.records {
                    let order = r.certified_order.map_or_else(|| "exact".to_string(), |t| format!("order {t}"));
                    out += &format!("[{}] {} ({order})", if r.passed { "pass" } else { "FAIL" }, r.name);
                    if let Some(c) = &r.counterexample {
                        out += &format!(": {c}");
                    }
                    out.push('\n');
                }
                for (k, v) in &self.artifacts {
                    out += &format!("{k}: {}\n", serde_json::to_string(v).expect("serializable"));
                }
                out += &format!("status: {}\n", self.status);
                out
            }
        }
    }
}

enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: mixfrob::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn vec_str(v: &[Q]) -> Value {
    json!(v.iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn matrix_str(m: &mixfrob::QMatrix) -> Value {
    json!((0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn filtration_artifacts(report: &mut RunReport, f: &NondegenerateFiltration<Q>) {
    report.artifact("jumps", json!(f.jumps()));
    report.artifact("ranks", json!(f.graded_ranks().iter().map(|(k, r)| json!({"k": k, "rank": r})).collect::<Vec<_>>()));
    report.artifact(
        "cumulative_ranks",
        json!(f.jumps().iter().map(|&k| f.rank_at(k)).collect::<Vec<_>>()),
    );
    let levels: Vec<Value> = f
        .levels()
        .iter()
        .map(|l| {
            json!({
                "k": l.index,
                "reps": l.reps.iter().map(|r| vec_str(r)).collect::<Vec<_>>(),
                "gram": matrix_str(&l.gram),
            })
        })
        .collect();
    report.artifact("levels", json!(levels));
}

fn metric_artifact(g: &LocalizedMetric<Q>) -> Value {
    let m = g.matrix();
    json!((0..m.rows()).map(|i| m.row(i).iter().map(write_laurent).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn snf(path: &Path, mut report: RunReport) -> Result<RunReport, Failure> {
    let m = in_file(path, io::parse_laurent_matrix::<Q>(&read(path)?))?;
    let d = laurent_smith(&m);
    let k0 = d.shift;
    let shifted = m.shifted_poly(k0).expect("clearing shift");
    report.check("smith-certified", d.certify(&shifted));
    if !d.is_full_rank() {
        return Err(Failure::Input(format!("{}: matrix is singular (rank {})", path.display(), d.rank)));
    }
    if !is_unimodular_laurent(&m) {
        return Err(Failure::Input(format!("{}: {}", path.display(), Error::NotUnimodular(format!("det = {}", m.det())))));
    }
    report.artifact("shift", json!(k0));
    report.artifact("elementary_divisors", json!(d.diag.iter().map(ToString::to_string).collect::<Vec<_>>()));
    let kappas: Vec<i64> = d.diag.iter().map(|e| k0 - e.degree().expect("nonzero") as i64).collect();
    report.artifact("kappa", json!(kappas));
    Ok(report)
}

fn filtration(path: &Path, nilpotent: bool, seed: u64, mut report: RunReport) -> Result<RunReport, Failure> {
    let text = read(path)?;
    let (g, direct) = if nilpotent {
        let f = in_file(path, io::parse_algebra_file::<Q>(&text))?;
        let metric = f.metric.ok_or_else(|| Failure::Input(format!("{}: needs `functional` or `metric`", path.display())))?;
        let data = NilpotentData::new(f.algebra, metric, f.nilpotents)?;
        (nilpotent_localized_metric(&data)?, Some(nilpotent_filtration_direct(&data)?))
    } else {
        let m = in_file(path, io::parse_laurent_matrix::<Q>(&text))?;
        (LocalizedMetric::new(m)?, None)
    };
    let profile = normalize_metric(&g)?;
    report.check("adapted-bases", if profile.verify(&g) { Ok(()) } else { Err("g(x_i, y_j) ≠ λ^{-κ_i} δ_ij".into()) });
    let f = filtration_from_profile(&profile, &g)?;
    report.check("nondegenerate", f.validate().map_err(|e| e.to_string()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lifts = Ok(());
    for k in f.jumps() {
        if !residue_metric_well_defined_check(&g, k, 10, &mut rng)? {
            lifts = Err(format!("g_{k} depends on the choice of lifts"));
            break;
        }
    }
    report.check("lift-independence", lifts);
    if let Some(direct) = direct {
        report.check("direct-construction-agrees", direct.same_as(&f));
    }
    report.artifact("kappa", json!(profile.kappas));
    report.artifact("metric", metric_artifact(&g));
    filtration_artifacts(&mut report, &f);
    Ok(report)
}

fn nilpotent(path: &Path, mut report: RunReport) -> Result<RunReport, Failure> {
    let f = in_file(path, io::parse_algebra_file::<Q>(&read(path)?))?;
    let metric = f.metric.ok_or_else(|| Failure::Input(format!("{}: needs `functional` or `metric`", path.display())))?;
    let data = NilpotentData::new(f.algebra.clone(), metric, f.nilpotents)?;
    let g = nilpotent_localized_metric(&data)?;
    let direct = nilpotent_filtration_direct(&data)?;
    let generic = filtration_from_profile(&normalize_metric(&g)?, &g)?;
    report.check("pipeline-equivalence", direct.same_as(&generic));
    report.absorb("", &check_mfa(&MixedFrobeniusAlgebra::new(f.algebra, direct.clone())));
    report.artifact("metric", metric_artifact(&g));
    report.artifact("companion", matrix_str(data.companion()));
    filtration_artifacts(&mut report, &direct);
    Ok(report)
}

fn existence(path: &Path, mut report: RunReport) -> Result<RunReport, Failure> {
    let f = in_file(path, io::parse_algebra_file::<Q>(&read(path)?))?;
    let filt = frobenius_filtration_existence(&f.algebra)?;
    report.absorb("", &check_mfa(&MixedFrobeniusAlgebra::new(f.algebra, filt.clone())));
    filtration_artifacts(&mut report, &filt);
    Ok(report)
}

fn verify_mfa(path: &Path, mut report: RunReport) -> Result<RunReport, Failure> {
    let f = in_file(path, io::parse_algebra_file::<Q>(&read(path)?))?;
    let filt = f.filtration.ok_or_else(|| Failure::Input(format!("{}: no filtration (`jump` blocks)", path.display())))?;
    let mut m = MixedFrobeniusAlgebra::new(f.algebra, filt.clone());
    if let Some(c) = f.charges {
        m = m.with_charges(c);
    }
    report.absorb("", &check_mfa(&m));
    filtration_artifacts(&mut report, &filt);
    Ok(report)
}

fn limit_artifacts(report: &mut RunReport, m: &FormalMFS<Q>) {
    filtration_artifacts(report, &m.filtration);
    report.artifact("charges", json!(m.charges.iter().map(|(k, d)| json!({"k": k, "D": d.to_string()})).collect::<Vec<_>>()));
}

fn formal_check(path: &Path, mut report: RunReport) -> Result<RunReport, Failure> {
    let s = in_file(path, io::parse_structure::<Q>(&read(path)?))?;
    if s.metric.is_some() {
        let f = in_file(path, s.localized())?;
        let r = check_localized_formal_frobenius(&f);
        report.absorb("", &r);
        if r.passed() {
            let m = limit_mfs(&f)?;
            report.absorb("limit/", &check_formal_mfs(&m));
            limit_artifacts(&mut report, &m);
        }
    } else if let Some(filtration) = s.filtration.clone() {
        let saito = in_file(path, s.scalar_saito())?;
        let m = FormalMFS { saito, filtration, charges: s.charges.clone() };
        report.absorb("", &check_formal_mfs(&m));
    } else {
        report.absorb("", &check_formal_saito(&in_file(path, s.scalar_saito())?));
    }
    Ok(report)
}

fn quantum_limit(geometry: &Path, gw: &Path, order: usize, mut report: RunReport) -> Result<RunReport, Failure> {
    let (c, b) = in_file(geometry, io::parse_geometry::<Q>(&read(geometry)?))?;
    let data = in_file(gw, io::parse_gw_dataset::<Q>(&read(gw)?))?;
    let model = in_file(gw, build_twisted_product(&c, &b, &data, order))?;
    let r = check_localized_formal_frobenius(&model.structure);
    report.absorb("", &r);
    report.artifact("dataset_digest", json!(model.digest));
    report.artifact("xi", vec_str(&model.xi));
    report.artifact("metric", metric_artifact(&model.structure.metric));
    report.artifact("kappa", json!(normalize_metric(&model.structure.metric)?.kappas));
    if r.passed() {
        let m = limit_mfs(&model.structure)?;
        report.absorb("limit/", &check_formal_mfs(&m));
        report.check("classical-filtration-agrees", classical_limit_filtration(&c, &b)?.same_as(&m.filtration));
        limit_artifacts(&mut report, &m);
    }
    Ok(report)
}

fn potential(path: &Path, mut report: RunReport) -> Result<RunReport, Failure> {
    let s = in_file(path, io::parse_structure::<Q>(&read(path)?))?;
    let saito = in_file(path, s.scalar_saito())?;
    match potential_vector_field(&saito) {
        Err(Error::NotIntegrable(m)) => report.check("integrability", Err(m)),
        Err(e) => return Err(e.into()),
        Ok(g) => {
            report.check("integrability", Ok(()));
            let rec = mixfrob::AxiomRecord::new("potential", verify_potential(&saito, &g)).at_order(saito.order.saturating_sub(2));
            let mut vr = VerificationReport::new("potential");
            vr.push(rec);
            report.absorb("", &vr);
            report.artifact("G", json!(g.iter().map(|p| p.format(&saito.frame)).collect::<Vec<_>>()));
        }
    }
    Ok(report)
}

fn run(cli: &Cli) -> Result<RunReport, Failure> {
    let input = |p: &Path| read(p);
    match &cli.command {
        Command::Snf { matrix } => snf(matrix, RunReport::new("snf", &[(matrix, &input(matrix)?)])),
        Command::Filtration { file, nilpotent } => {
            filtration(file, *nilpotent, cli.seed, RunReport::new("filtration", &[(file, &input(file)?)]))
        }
        Command::Nilpotent { algebra } => nilpotent(algebra, RunReport::new("nilpotent", &[(algebra, &input(algebra)?)])),
        Command::Existence { algebra } => existence(algebra, RunReport::new("existence", &[(algebra, &input(algebra)?)])),
        Command::VerifyMfa { algebra } => verify_mfa(algebra, RunReport::new("verify-mfa", &[(algebra, &input(algebra)?)])),
        Command::FormalCheck { structure } => {
            formal_check(structure, RunReport::new("formal-check", &[(structure, &input(structure)?)]))
        }
        Command::QuantumLimit { geometry, gw } => {
            let inputs = [(geometry.as_path(), input(geometry)?), (gw.as_path(), input(gw)?)];
            let refs: Vec<(&Path, &str)> = inputs.iter().map(|(p, t)| (*p, t.as_str())).collect();
            quantum_limit(geometry, gw, cli.order, RunReport::new("quantum-limit", &refs))
        }
        Command::Potential { structure } => potential(structure, RunReport::new("potential", &[(structure, &input(structure)?)])),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    match run(&cli) {
        Ok(mut report) => {
            print!("{}", report.render(cli.format));
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
