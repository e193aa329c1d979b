//! `adc`: JSON in, JSON out. Exit code 0 when the computed property holds,
//! 1 when it fails, 2 on invalid input.

mod corpus;
mod report;

use adc_core::chords::{self, ChordSpectrum, MorseData};
use adc_core::floer::{self, BasedLoopTable, LoopHomologyTable};
use adc_core::graded::{ChainComplex, Coefficients, GradedGroup};
use adc_core::num::parse_rational;
use adc_core::scaling::{self, GParams, SweepParams};
use adc_core::surgery::{self, AdcCertificate, LegendrianSurgery, OrbitSpectrum};
use adc_core::weinstein::{self, HandlePresentation, ManifoldFlags};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use num_rational::BigRational;
use report::{Output, Report};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "adc", version, about = "Exact bookkeeping for Weinstein handles, Reeb chords and ADC certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Coefficients for dimension counts.
    #[arg(long, global = true, default_value = "Q")]
    coeff: Coefficients,
    /// Tolerance override for numerical checks.
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Grid nodes per axis for numerical checks.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Action bound.
    #[arg(long, global = true)]
    bound: Option<String>,
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Homology and cohomology of a handle presentation or chain complex.
    Homology { input: PathBuf },
    /// Homology of the boundary of a handle presentation.
    Boundary { input: PathBuf },
    /// Rank of the intersection form on H_n.
    RankForm { input: PathBuf },
    /// Membership in the class of closed manifolds used for the loop-space family.
    OmegaCheck { input: PathBuf },
    /// SH⁺ of a flexible domain from its cohomology.
    ShPlus {
        input: PathBuf,
        #[arg(long)]
        n: Option<i64>,
        /// Skip the check that cohomology vanishes above degree n.
        #[arg(long)]
        not_weinstein: bool,
    },
    /// Whether two flexible fillings have different SH⁺.
    Distinguish {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        n: Option<i64>,
    },
    /// Whether an index-k handle is obstructed for flexible fillings.
    CemBound {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        h1: u64,
    },
    /// Separates contact structures by loop-space homology growth.
    LoopsDistinguish { input: PathBuf },
    /// WH⁺ of a Legendrian from its cohomology, or wrapped homology from ΩM.
    WhPlus {
        input: PathBuf,
        #[arg(long)]
        n: Option<i64>,
    },
    /// Whether π_*: H_*(L) → H_*(M) must be an isomorphism.
    Nearby { input: PathBuf },
    /// |c| = D − U + ind − 1.
    ChordDegree {
        #[arg(long, allow_hyphen_values = true)]
        down: i64,
        #[arg(long, allow_hyphen_values = true)]
        up: i64,
        #[arg(long, allow_hyphen_values = true)]
        index: i64,
    },
    /// Zig-zag stabilization of a chord spectrum.
    Stabilize {
        input: PathBuf,
        /// Number of zig-zag pairs; defaults to the smallest N making every degree positive.
        #[arg(long = "big-n")]
        big_n: Option<u64>,
        /// Morse data for Q; defaults to S¹ or S¹×S^{n−3}.
        #[arg(long)]
        q: Option<PathBuf>,
        /// Size of the zig-zags; new chords have action in (ε/2, ε).
        #[arg(long)]
        epsilon: Option<String>,
        /// Number of chords carrying zig-zags; defaults to all.
        #[arg(long)]
        sites: Option<usize>,
    },
    /// Self-intersection of the stabilized Legendrian.
    SelfIndex {
        #[arg(long)]
        n: i64,
        #[arg(long = "big-n")]
        big_n: i64,
        #[arg(long)]
        q: Option<PathBuf>,
    },
    /// Cyclic words of chords below --bound.
    Words { input: PathBuf },
    /// Orbit and chord bookkeeping under surgery.
    #[command(subcommand)]
    Surgery(SurgeryCommand),
    /// Checks an ADC certificate.
    AdcCheck { input: PathBuf },
    /// Normalizes a certificate so consecutive stages differ by ε.
    NormalizeCert {
        input: PathBuf,
        #[arg(long)]
        epsilon: String,
    },
    /// Builds the scaling profile and verifies its bounds.
    ScalingVerify {
        /// Directory for g.csv and h.csv.
        #[arg(long)]
        csv_dir: Option<PathBuf>,
        /// Cap on the hump height.
        #[arg(long)]
        height: Option<f64>,
    },
    /// Worked examples and the regression corpus.
    #[command(subcommand)]
    Examples(ExamplesCommand),
}

#[derive(Subcommand)]
enum SurgeryCommand {
    /// Subcritical index-k handle: adds belt-sphere iterates.
    Subcritical {
        input: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        iterates: u32,
        #[arg(long)]
        epsilon: String,
        /// Asserts the contractibility hypotheses needed for k = 2.
        #[arg(long)]
        index_two_hypotheses: bool,
    },
    /// Flexible surgery on every stage of a certificate.
    Flexible { certificate: PathBuf, chords: PathBuf },
    /// Chords of the belt sphere after critical surgery.
    Belt { input: PathBuf },
    /// Subcritical ambient or simultaneous Legendrian surgery.
    Ambient {
        input: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        action: String,
        #[arg(long)]
        simultaneous: bool,
    },
}

#[derive(Subcommand)]
enum ExamplesCommand {
    /// The ⋁ⁱ(S²∨S³) and ⋁ⁱS² thickenings and their boundaries.
    WedgeFamily {
        #[arg(long)]
        i: usize,
    },
    /// Runs the full regression corpus.
    All,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let output = if cli.table { Output::Table } else { Output::Json };
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = writeln!(out, "{}", report.render(output)) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            match report.holds {
                Some(false) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Reads a JSON file (or stdin for `-`), checking and stripping `schema`.
fn read_value(path: &Path) -> Result<Value> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let mut value: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    strip_schema(&mut value).with_context(|| path.display().to_string())?;
    Ok(value)
}

fn strip_schema(value: &mut Value) -> Result<()> {
    if let Value::Object(map) = value {
        if let Some(v) = map.remove("schema") {
            if v != json!(1) {
                bail!("unsupported schema {v}; expected 1");
            }
        }
    }
    Ok(())
}

fn from_value<T: DeserializeOwned>(value: Value, what: &str) -> Result<T> {
    serde_json::from_value(value).map_err(|e| anyhow!("invalid {what}: {e}"))
}

fn read<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    from_value(read_value(path)?, what)
}

fn rational(s: &str, what: &str) -> Result<BigRational> {
    parse_rational(s).map_err(|e| anyhow!("{what}: {e}"))
}

fn bound(cli: &Cli) -> Result<BigRational> {
    let b = cli.bound.as_deref().ok_or_else(|| anyhow!("--bound is required"))?;
    rational(b, "--bound")
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// A graded group from a presentation, a bare group, or a `cohomology` field.
fn read_groups(path: &Path, key: &str, n_flag: Option<i64>) -> Result<(GradedGroup, i64)> {
    let mut v = read_value(path)?;
    let n_file = v.get("n").and_then(Value::as_i64);
    let groups = if v.get("handles").is_some() {
        let p: HandlePresentation = from_value(v, "handle presentation")?;
        if key == "cohomology" {
            p.cohomology()
        } else {
            p.homology()
        }
    } else if v.get("degrees").is_some() {
        from_value(v, "graded group")?
    } else if let Some(inner) = v.get_mut(key) {
        from_value(inner.take(), key)?
    } else {
        bail!("{}: expected handles, degrees or a {key} field", path.display());
    };
    let n = n_flag.or(n_file).ok_or_else(|| anyhow!("{}: n is not given; pass --n", path.display()))?;
    Ok((groups, n))
}

fn morse(path: &Option<PathBuf>, n: u32) -> Result<MorseData> {
    match path {
        Some(p) => read(p, "Morse data"),
        None => Ok(chords::choose_q(n)?),
    }
}

#[derive(Deserialize)]
struct OmegaInput {
    n: i64,
    homology: GradedGroup,
    #[serde(default)]
    flags: ManifoldFlags,
}

#[derive(Deserialize)]
struct LoopsInput {
    n: i64,
    lm: LoopHomologyTable,
    ln: LoopHomologyTable,
    hy: BTreeMap<i64, usize>,
}

#[derive(Deserialize)]
struct NearbyInput {
    hl: GradedGroup,
    hm: GradedGroup,
    #[serde(default)]
    degree_pm1: bool,
}

fn run(cli: &Cli) -> Result<Report> {
    let name = command_name(&cli.command);
    let r = Report::new(name);
    Ok(match &cli.command {
        Command::Homology { input } => {
            let v = read_value(input)?;
            let (kind, homology, cohomology) = if v.get("handles").is_some() {
                let p: HandlePresentation = from_value(v, "handle presentation")?;
                ("handle presentation", p.homology(), p.cohomology())
            } else {
                let c: ChainComplex = from_value(v, "chain complex")?;
                ("chain complex", c.homology(), c.cohomology())
            };
            let ranks: BTreeMap<i64, usize> = homology
                .support()
                .into_iter()
                .map(|k| Ok((k, homology.homology_dim(k, cli.coeff)?)))
                .collect::<Result<_>>()?;
            r.formula("rank H_k = n_k - rank d_k - rank d_{k+1}; torsion from Smith normal form; cohomology by universal coefficients")
                .input(json!({"file": input, "kind": kind, "coeff": cli.coeff.to_string()}))
                .result(json!({
                    "homology": homology,
                    "cohomology": cohomology,
                    "dimensions": ranks,
                    "euler_characteristic": homology.euler_characteristic(),
                }))
        }
        Command::Boundary { input } => {
            let p: HandlePresentation = read(input, "handle presentation")?;
            let report = weinstein::boundary_homology(&p)?;
            r.formula("long exact sequence of (W, dW) with H_k(W, dW) = H^{dim-k}(W)")
                .input(json!({"file": input}))
                .result(to_json(&report))
        }
        Command::RankForm { input } => {
            let p: HandlePresentation = read(input, "handle presentation")?;
            let rank = weinstein::intersection_form_rank(&p)?;
            r.formula("H_{n-1}(dW) has rank b_{n-1}(W) + b_n(W) - rank Q")
                .input(json!({"file": input}))
                .result(json!({"rank": rank, "b_n": p.homology().rank(p.n() as i64)}))
        }
        Command::OmegaCheck { input } => {
            let o: OmegaInput = read(input, "omega input")?;
            let v = weinstein::omega_membership(&o.homology, o.n, o.flags, cli.coeff)?;
            r.formula("closed, simply connected, stably parallelizable; chi = 2 (n even) or chi_1/2 = 1 mod 2 (n odd)")
                .input(json!({"file": input, "coeff": cli.coeff.to_string()}))
                .holds(v.member)
                .result(to_json(&v))
        }
        Command::ShPlus { input, n, not_weinstein } => {
            let (coh, n) = read_groups(input, "cohomology", *n)?;
            let p = floer::sh_plus_from_vanishing(&coh, n, !not_weinstein)?;
            let adc = floer::adc_homological_obstruction(&p)?;
            r.formula("SH+_k(W) = H^{n-k+1}(W) when SH(W) = 0")
                .input(json!({"file": input, "n": n}))
                .result(json!({"profile": p, "adc_obstruction": adc}))
        }
        Command::Distinguish { a, b, n } => {
            let (ca, na) = read_groups(a, "cohomology", *n)?;
            let (cb, nb) = read_groups(b, "cohomology", *n)?;
            if na != nb {
                bail!("the two inputs have n = {na} and n = {nb}");
            }
            let v = floer::distinguish_flexible_fillings(&ca, &cb, na)?;
            r.formula("SH+_k(W) = H^{n-k+1}(W) is an invariant of the contact boundary of a flexible filling")
                .input(json!({"a": a, "b": b, "n": na}))
                .holds(v.is_distinct())
                .result(to_json(&v))
        }
        Command::CemBound { k, h1 } => {
            let fires = floer::cem_flexible_obstruction(*k, *h1)?;
            r.formula("flexible fillings have handles of index at most dim H^1(Y; Z/2) + 1")
                .input(json!({"k": k, "h1": h1}))
                .holds(fires)
                .result(json!({"obstructed": fires, "threshold": h1 + 2}))
        }
        Command::LoopsDistinguish { input } => {
            let l: LoopsInput = read(input, "loop tables")?;
            let v = floer::boundedinfinite_distinguisher(&l.lm, &l.ln, &l.hy, l.n)?;
            r.formula("|dim H_k(LM) - dim H_k(LN)| > 2 dim H^{n-k}(Y) + 2 dim H^{n-k+1}(Y)")
                .input(json!({"file": input, "n": l.n}))
                .holds(v.verdict.is_distinct())
                .result(to_json(&v))
        }
        Command::WhPlus { input, n } => {
            let v = read_value(input)?;
            if let Some(table) = v.get("based_loops") {
                let t: BasedLoopTable = from_value(table.clone(), "based loop table")?;
                let n = n.or(v.get("n").and_then(Value::as_i64)).ok_or_else(|| anyhow!("n is not given"))?;
                let p = floer::wrapped_loop_grading(&t, n)?;
                r.formula("WH_k(T*_x M, T*_x M) = H_{k-n+2}(Omega M)")
                    .input(json!({"file": input, "n": n}))
                    .result(to_json(&p))
            } else {
                let (coh, n) = read_groups(input, "cohomology", *n)?;
                let p = floer::wh_plus_from_vanishing(&coh, n)?;
                r.formula("WH+_k(L, L; W) = H^{n-k-1}(L) when WH(L, L; W) = 0")
                    .input(json!({"file": input, "n": n}))
                    .result(to_json(&p))
            }
        }
        Command::Nearby { input } => {
            let i: NearbyInput = read(input, "nearby input")?;
            let v = floer::nearby_conclusion(&i.hl, &i.hm, i.degree_pm1)?;
            let holds = matches!(v, floer::NearbyVerdict::Isomorphism { .. });
            r.formula("a surjection between isomorphic finitely generated abelian groups is injective")
                .input(json!({"file": input, "degree_pm1": i.degree_pm1}))
                .holds(holds)
                .result(to_json(&v))
        }
        Command::ChordDegree { down, up, index } => {
            let d = chords::chord_degree(*down, *up, *index)?;
            r.formula("|c| = D - U + ind - 1")
                .input(json!({"down": down, "up": up, "index": index}))
                .result(json!({"degree": d}))
        }
        Command::Stabilize { input, big_n, q, epsilon, sites } => {
            let s: ChordSpectrum = read(input, "chord spectrum")?;
            let q = morse(q, s.n)?;
            let big_n = big_n.unwrap_or_else(|| chords::min_positive_n(&s));
            let eps = match epsilon {
                Some(e) => rational(e, "--epsilon")?,
                None => &s.bound / BigRational::from_integer(2.into()),
            };
            let out = chords::stabilize(&s, big_n, &q, &eps, *sites)?;
            let min = out.min_degree();
            r.formula("old degrees shift by 2N; each zig-zag adds chords of degree 1 + ind over the critical points of Q")
                .input(json!({"file": input, "big_n": big_n, "q": q.name, "epsilon": eps.to_string()}))
                .holds(min.map_or(true, |d| d > 0))
                .result(json!({"min_degree": min, "added": out.chords.len() - s.chords.len(), "spectrum": out}))
        }
        Command::SelfIndex { n, big_n, q } => {
            let m = morse(q, u32::try_from(*n).map_err(|_| anyhow!("n = {n} must be non-negative"))?)?;
            let i = chords::self_intersection_index(*n, *big_n, &m)?;
            r.formula("I = (-1)^{(n-1)(n-2)/2} N chi(Q)")
                .input(json!({"n": n, "big_n": big_n, "q": m.name}))
                .holds(i.is_zero())
                .result(json!({"index": i, "sign": chords::regular_homotopy_sign(*n), "euler_characteristic": m.euler_characteristic}))
        }
        Command::Words { input } => {
            let s: ChordSpectrum = read(input, "chord spectrum")?;
            let b = bound(cli)?;
            let words = surgery::enumerate_words(&s, &b)?;
            let shift = s.n as i64 - 3;
            let rows: Vec<Value> = words
                .iter()
                .map(|w| json!({"word": w.letters.join(" "), "action": w.action.to_string(), "degree": w.degree, "orbit_degree": w.degree + shift}))
                .collect();
            r.formula("one orbit per cyclic word w with action below the bound, |gamma_w| = |w| + n - 3")
                .input(json!({"file": input, "bound": b.to_string()}))
                .result(json!({"count": words.len(), "words": rows}))
        }
        Command::Surgery(sub) => run_surgery(cli, sub, r)?,
        Command::AdcCheck { input } => {
            let c: AdcCertificate = read(input, "certificate")?;
            let check = surgery::adc_check(&c);
            r.formula("contractible orbits of alpha_k below D_k have positive degree; alpha_k non-increasing, D_k increasing")
                .input(json!({"file": input}))
                .holds(check.pass)
                .result(to_json(&check))
        }
        Command::NormalizeCert { input, epsilon } => {
            let c: AdcCertificate = read(input, "certificate")?;
            let eps = rational(epsilon, "--epsilon")?;
            let out = surgery::normalize_certificate(&c, &eps)?;
            let check = surgery::adc_check(&out);
            r.formula("subsequence with D_{k+1} >= D_k / eps^2, stage k scaled by eps^{k-1}")
                .input(json!({"file": input, "epsilon": eps.to_string()}))
                .holds(check.pass)
                .result(json!({"certificate": out, "check": check}))
        }
        Command::ScalingVerify { csv_dir, height } => {
            let mut params = GParams::default();
            let mut sweep = SweepParams::default();
            if let Some(g) = cli.grid {
                params.nodes = g;
                sweep.t_nodes = g;
            }
            if let Some(h) = height {
                params.height = *h;
            }
            if let Some(t) = &cli.tol {
                sweep.ratio_tol = adc_core::num::rational_to_f64(&rational(t, "--tol")?);
            }
            let report = scaling::verify_scaling(params, sweep)?;
            if let Some(dir) = csv_dir {
                write_csvs(dir, &params, &sweep)?;
            }
            r.formula("g/(tg + 1) <= 5/4 and gamma_t <= e^{5t/4} < 4 for h_t(z) = z + t G(z)")
                .input(json!({"grid": params.nodes, "height": params.height, "t_max": sweep.t_max}))
                .holds(report.pass)
                .result(to_json(&report))
        }
        Command::Examples(ExamplesCommand::WedgeFamily { i }) => {
            let v = corpus::wedge_family(*i)?;
            r.formula("X_i = wedge of i copies of S^2 v S^3 (n even) or S^2 (n odd) thickened in R^{n+1}; M_i its boundary")
                .input(json!({"i": i}))
                .holds(v["reproduced"].as_bool().unwrap_or(false))
                .result(v)
        }
        Command::Examples(ExamplesCommand::All) => {
            let start = std::time::Instant::now();
            let results = corpus::run_all();
            eprintln!("corpus: {} cases in {:.2?}", results.len(), start.elapsed());
            let pass = results.iter().all(|c| c.pass);
            r.formula("regression corpus").holds(pass).result(to_json(&results))
        }
    })
}

fn run_surgery(cli: &Cli, sub: &SurgeryCommand, r: Report) -> Result<Report> {
    Ok(match sub {
        SurgeryCommand::Subcritical { input, k, iterates, epsilon, index_two_hypotheses } => {
            let y: OrbitSpectrum = read(input, "orbit spectrum")?;
            let eps = rational(epsilon, "--epsilon")?;
            let out = surgery::subcritical_surgery(&y, *k, *iterates, &eps, *index_two_hypotheses)?;
            let positive = out.orbits.iter().all(|o| !o.contractible || o.degree > 0);
            r.formula("belt iterates |gamma^j| = 2n - k - 4 + 2j at action eps j")
                .input(json!({"file": input, "k": k, "iterates": iterates, "epsilon": eps.to_string()}))
                .holds(positive)
                .result(to_json(&out))
        }
        SurgeryCommand::Flexible { certificate, chords } => {
            let c: AdcCertificate = read(certificate, "certificate")?;
            let mut v = read_value(chords)?;
            if let Value::Array(items) = &mut v {
                for item in items {
                    strip_schema(item)?;
                }
            }
            let spectra: Vec<ChordSpectrum> = from_value(v, "chord spectra")?;
            let (out, notes) = surgery::flexible_surgery_certificate(&c, &spectra)?;
            let check = surgery::adc_check(&out);
            r.formula("stages with D_k > k 4^k, chords stabilized to positive degree, cyclic word orbits added, stage k scaled by 4^{-k}")
                .input(json!({"certificate": certificate, "chords": chords}))
                .holds(check.pass)
                .result(json!({"certificate": out, "stages": notes, "check": check}))
        }
        SurgeryCommand::Belt { input } => {
            let s: ChordSpectrum = read(input, "chord spectrum")?;
            let b = bound(cli)?;
            let out = surgery::legendrian_surgery(&s, &LegendrianSurgery::BeltSphere { bound: b.clone() })?;
            r.formula("one belt-sphere chord c_w per word w of chords, |c_w| = |w| + n - 2")
                .input(json!({"file": input, "bound": b.to_string()}))
                .result(to_json(&out))
        }
        SurgeryCommand::Ambient { input, k, action, simultaneous } => {
            let s: ChordSpectrum = read(input, "chord spectrum")?;
            let action = rational(action, "--action")?;
            let rule = if *simultaneous {
                LegendrianSurgery::Simultaneous { k: *k, action }
            } else {
                LegendrianSurgery::Ambient { k: *k, action }
            };
            let out = surgery::legendrian_surgery(&s, &rule)?;
            r.formula("one new chord of degree n - k - 1")
                .input(json!({"file": input, "rule": rule}))
                .result(to_json(&out))
        }
    })
}

fn write_csvs(dir: &Path, params: &GParams, sweep: &SweepParams) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let g = scaling::build_g(*params)?;
    scaling::write_g_csv(&g, std::io::BufWriter::new(std::fs::File::create(dir.join("g.csv"))?))?;
    let h = scaling::ProfileH::new(&g);
    let ts = scaling::t_grid(sweep.t_max, 11)?;
    let zs: Vec<f64> = (0..301).map(|j| -sweep.z_max + 2.0 * sweep.z_max * j as f64 / 300.0).collect();
    scaling::write_h_csv(&h, &ts, &zs, std::io::BufWriter::new(std::fs::File::create(dir.join("h.csv"))?))?;
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Homology { .. } => "homology",
        Command::Boundary { .. } => "boundary",
        Command::RankForm { .. } => "rank-form",
        Command::OmegaCheck { .. } => "omega-check",
        Command::ShPlus { .. } => "sh-plus",
        Command::Distinguish { .. } => "distinguish",
        Command::CemBound { .. } => "cem-bound",
        Command::LoopsDistinguish { .. } => "loops-distinguish",
        Command::WhPlus { .. } => "wh-plus",
        Command::Nearby { .. } => "nearby",
        Command::ChordDegree { .. } => "chord-degree",
        Command::Stabilize { .. } => "stabilize",
        Command::SelfIndex { .. } => "self-index",
        Command::Words { .. } => "words",
        Command::Surgery(SurgeryCommand::Subcritical { .. }) => "surgery subcritical",
        Command::Surgery(SurgeryCommand::Flexible { .. }) => "surgery flexible",
        Command::Surgery(SurgeryCommand::Belt { .. }) => "surgery belt",
        Command::Surgery(SurgeryCommand::Ambient { .. }) => "surgery ambient",
        Command::AdcCheck { .. } => "adc-check",
        Command::NormalizeCert { .. } => "normalize-cert",
        Command::ScalingVerify { .. } => "scaling-verify",
        Command::Examples(ExamplesCommand::WedgeFamily { .. }) => "examples wedge-family",
        Command::Examples(ExamplesCommand::All) => "examples all",
    }
}
