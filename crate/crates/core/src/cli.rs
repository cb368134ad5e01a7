//! Batch front end. Every command reads flat files, writes reports into
//! `--out`, and returns exit code 0 (valid), 1 (validation failure) or 2
//! (input or usage error). Outputs are byte-identical for identical inputs,
//! seed and flags.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::carrier::{build_selection, check_lhc, CarrierError, LhcVerdict, LocalIsoconeMap, MapJson};
use crate::hermitian::IsotoneFunction;
use crate::isocone_fd::{
    diamond_algebra, empirical_order, induced_order, isocone_axiom_suite, lex_membership, random_state_pairs,
    sample_elements_with_generators, spectral_criterion, LexIsocone, LexJson,
};
use crate::lorentz::{lambda_order, LorentzPatch};
use crate::multicomponent::{enumerate_valid_tables, reference_system, validate_rules, LambdaSystem, MultiError};
use crate::order_core::{
    epsilon_cutoff, incomparability_ball, transitive_closure, validate_order, FiniteOrder, MetricPointCloud,
    OrderError, OrderJson, Scale,
};
use crate::qubit_geometry::{qubit_order_with_tol, CapRegion, SpherePoint, TIE_TOL};

/// Caps the rayon worker count.
pub const THREADS_ENV: &str = "ISOCONE_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "isocone-lab", version, about = "Build and check causal orders induced by isocones")]
pub struct RunConfig {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tie band for qubit distance comparisons.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Angular mesh in degrees for sphere scans.
    #[arg(long = "mesh-deg", global = true, default_value_t = 1.0)]
    pub mesh_deg: f64,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an order `{"size", "pairs"}` or a Λ-system `{"profile", "partition", "lambda"}`.
    ValidateOrder { input: PathBuf },
    /// Compare two Bloch vectors under the order of a cap region.
    QubitOrder {
        cap: PathBuf,
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        p: [f64; 3],
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        q: [f64; 3],
    },
    /// Sample a lexicographic isocone and compare sampled and induced orders.
    LexCheck {
        /// Lexicographic isocone JSON; the diamond example when omitted.
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 500)]
        pairs: usize,
    },
    /// Sprinkle Minkowski patches and report ε₀ and comparability.
    LambdaExperiment {
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = 1)]
        patches: usize,
        /// `lo:hi` per coordinate, comma separated; time first.
        #[arg(long = "box", allow_hyphen_values = true)]
        bounding_box: Option<String>,
        #[arg(long, default_value = "euclidean")]
        metric: String,
    },
    /// Enumerate partitions and two-level Λ tables passing every rule.
    EnumerateTables {
        #[arg(long, value_delimiter = ',', required = true)]
        profile: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
    },
    /// Finite-sample lower hemi-continuity of a local-isocone map.
    CheckLhc {
        input: PathBuf,
        /// Neighbourhood radius; the cloud mesh size when omitted.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Project a seed direction onto every cap of a local-isocone map.
    BuildSelection {
        input: PathBuf,
        #[arg(long = "seed-direction", value_parser = parse_vec3, allow_hyphen_values = true)]
        seed_direction: Option<[f64; 3]>,
    },
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected three comma-separated numbers, got {}", v.len()))
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Invalid(String),
}

type CmdResult = Result<(), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

/// Honors [`THREADS_ENV`] once per process.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // Fails only when a global pool already exists.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_threads();
    match execute(&config) {
        Ok(()) => 0,
        Err(Failure::Invalid(msg)) => {
            eprintln!("validation failed: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn execute(cfg: &RunConfig) -> CmdResult {
    if let Some(t) = cfg.tol {
        if !(t >= 0.0) {
            return Err(Failure::Input(format!("--tol must be non-negative, got {t}")));
        }
    }
    if !(cfg.mesh_deg > 0.0) {
        return Err(Failure::Input(format!("--mesh-deg must be positive, got {}", cfg.mesh_deg)));
    }
    fs::create_dir_all(&cfg.out).map_err(|e| Failure::Input(format!("{}: {e}", cfg.out.display())))?;
    match &cfg.command {
        Command::ValidateOrder { input } => cmd_validate_order(cfg, input),
        Command::QubitOrder { cap, p, q } => cmd_qubit_order(cfg, cap, p, q),
        Command::LexCheck { input, samples, pairs } => cmd_lex_check(cfg, input.as_deref(), *samples, *pairs),
        Command::LambdaExperiment {
            n,
            dim,
            lambda,
            patches,
            bounding_box,
            metric,
        } => cmd_lambda_experiment(cfg, *n, *dim, *lambda, *patches, bounding_box.as_deref(), metric),
        Command::EnumerateTables { profile, lambda } => cmd_enumerate(cfg, profile, *lambda),
        Command::CheckLhc { input, radius } => cmd_check_lhc(cfg, input, *radius),
        Command::BuildSelection { input, seed_direction } => cmd_build_selection(cfg, input, *seed_direction),
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(value: Value, path: &Path) -> Result<T, Failure> {
    serde_json::from_value(value).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(cfg: &RunConfig, name: &str, contents: &str) -> CmdResult {
    let path = cfg.out.join(name);
    fs::write(&path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(cfg: &RunConfig, name: &str, value: &T) -> CmdResult {
    let mut text = serde_json::to_string_pretty(value).map_err(input)?;
    text.push('\n');
    write_file(cfg, name, &text)
}

fn cmd_validate_order(cfg: &RunConfig, path: &Path) -> CmdResult {
    let value = read_json(path)?;
    if value.get("partition").is_some() {
        let system: LambdaSystem = parse(value, path)?;
        let report = match validate_rules(&system) {
            Ok(r) => r,
            Err(e @ (MultiError::ZeroLambdaInP { .. } | MultiError::NegativeLambda { .. })) => {
                write_json(
                    cfg,
                    "validate_report.json",
                    &json!({"seed": cfg.seed, "kind": "lambda-system", "valid": false, "error": e.to_string()}),
                )?;
                return Err(Failure::Invalid(e.to_string()));
            }
            Err(e) => return Err(input(e)),
        };
        let rules: Vec<Value> = report
            .statuses
            .iter()
            .map(|(r, w)| json!({"rule": r.to_string(), "passed": w.is_none(), "witness": w}))
            .collect();
        write_json(
            cfg,
            "validate_report.json",
            &json!({
                "seed": cfg.seed,
                "kind": "lambda-system",
                "valid": report.passed(),
                "rules": rules,
                "t2_consequence": report.t2_consequence,
                "table": system.render(),
            }),
        )?;
        print!("{}", system.render());
        println!("{report}");
        return if report.passed() {
            Ok(())
        } else {
            Err(Failure::Invalid(report.to_string()))
        };
    }
    let order: OrderJson = parse(value, path)?;
    let rel = order.relation().map_err(input)?;
    let report = validate_order(&rel);
    let cycle = match transitive_closure(&rel) {
        Err(OrderError::Cycle { path }) => Some(path),
        _ => None,
    };
    write_json(
        cfg,
        "validate_report.json",
        &json!({
            "seed": cfg.seed,
            "kind": "order",
            "valid": report.is_valid(),
            "report": report,
            "cycle": cycle,
        }),
    )?;
    println!("{report}");
    if let Some(c) = &cycle {
        println!("cycle: {c:?}");
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::Invalid(report.to_string()))
    }
}

fn cmd_qubit_order(cfg: &RunConfig, cap_path: &Path, p: &[f64; 3], q: &[f64; 3]) -> CmdResult {
    let cap: CapRegion = parse(read_json(cap_path)?, cap_path)?;
    let p = SpherePoint::from_vector(*p).map_err(input)?;
    let q = SpherePoint::from_vector(*q).map_err(input)?;
    let tol = cfg.tol.unwrap_or(TIE_TOL);
    let d = qubit_order_with_tol(&cap, &p, &q, cfg.mesh_deg, tol).map_err(input)?;
    write_json(
        cfg,
        "qubit_order.json",
        &json!({
            "seed": cfg.seed,
            "mesh_deg": cfg.mesh_deg,
            "tol": tol,
            "p": p.coords(),
            "q": q.coords(),
            "comparison": d.comparison,
            "margin_le": d.margin_le,
            "margin_ge": d.margin_ge,
            "tie": d.tie,
            "resolution": d.resolution,
        }),
    )?;
    println!("{:?}", d.comparison);
    Ok(())
}

fn cmd_lex_check(cfg: &RunConfig, path: Option<&Path>, samples: usize, pairs: usize) -> CmdResult {
    let lex = match path {
        Some(p) => {
            let json: LexJson = parse(read_json(p)?, p)?;
            LexIsocone::from_json(&json).map_err(input)?
        }
        None => diamond_algebra(),
    };
    if samples == 0 {
        return Err(Failure::Input("--samples must be at least 1".into()));
    }
    let elems = sample_elements_with_generators(&lex, samples, cfg.seed, cfg.mesh_deg);
    let mut non_members = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        if !lex_membership(a, &lex).map_err(input)?.is_member() {
            non_members.push(i);
        }
    }
    let spectral = spectral_criterion(&lex, &elems).map_err(input)?;
    let axioms = isocone_axiom_suite(&lex, &elems, &IsotoneFunction::clip_below(0.0), 200, cfg.seed).map_err(input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut agree = 0;
    let mut disagreements = Vec::new();
    for (i, (s, t)) in random_state_pairs(&lex, pairs, &mut rng).iter().enumerate() {
        let ind = induced_order(&lex, s, t, cfg.mesh_deg).map_err(input)?;
        let emp = empirical_order(&elems, s, t).map_err(input)?.comparison;
        if ind == emp {
            agree += 1;
        } else {
            disagreements.push(json!({"pair": i, "sites": [s.site, t.site], "induced": ind, "empirical": emp}));
        }
    }
    let passed = non_members.is_empty() && spectral.passed() && axioms.passed() && disagreements.is_empty();
    write_json(
        cfg,
        "lex_report.json",
        &json!({
            "seed": cfg.seed,
            "mesh_deg": cfg.mesh_deg,
            "profile": lex.profile(),
            "elements": elems.len(),
            "non_members": non_members,
            "strict_gap_violations": spectral.strict_violations.len(),
            "incomparable_witnesses": spectral.incomparable_witnesses.iter().map(|(p, w)| json!({"sites": p, "element": w})).collect::<Vec<_>>(),
            "sums_checked": axioms.sums_checked,
            "sum_failures": axioms.sum_failures.len(),
            "calculus_failures": axioms.calculus_failures.len(),
            "pairs": pairs,
            "agreement": agree,
            "disagreements": disagreements,
            "passed": passed,
        }),
    )?;
    println!("elements {}, agreement {agree}/{pairs}", elems.len());
    if passed {
        Ok(())
    } else {
        Err(Failure::Invalid("lexicographic checks failed; see lex_report.json".into()))
    }
}

fn parse_box(text: Option<&str>, dim: usize) -> Result<Vec<(f64, f64)>, Failure> {
    let Some(text) = text else {
        let mut b = vec![(0.0, 4.0)];
        b.extend(std::iter::repeat((-2.0, 2.0)).take(dim - 1));
        return Ok(b);
    };
    let b: Vec<(f64, f64)> = text
        .split(',')
        .map(|r| {
            let (lo, hi) = r
                .split_once(':')
                .ok_or_else(|| Failure::Input(format!("range {r:?} is not lo:hi")))?;
            let lo: f64 = lo.trim().parse().map_err(input)?;
            let hi: f64 = hi.trim().parse().map_err(input)?;
            if !(lo < hi) {
                return Err(Failure::Input(format!("empty range {r:?}")));
            }
            Ok((lo, hi))
        })
        .collect::<Result<_, _>>()?;
    if b.len() != dim {
        return Err(Failure::Input(format!("box has {} ranges for dimension {dim}", b.len())));
    }
    Ok(b)
}

fn cmd_lambda_experiment(
    cfg: &RunConfig,
    n: usize,
    dim: usize,
    lam: f64,
    patches: usize,
    bbox: Option<&str>,
    metric: &str,
) -> CmdResult {
    if !(lam > 0.0) {
        return Err(Failure::Input(format!("Λ must be positive, got {lam}")));
    }
    if dim < 2 {
        return Err(Failure::Input("dimension must be at least 2".into()));
    }
    if metric != "euclidean" {
        return Err(Failure::Input(format!("unsupported metric {metric:?}; only \"euclidean\"")));
    }
    if patches == 0 || n < 2 {
        return Err(Failure::Input("need at least one patch of two points".into()));
    }
    let bbox = parse_box(bbox, dim)?;
    let mut csv = String::new();
    writeln!(csv, "# seed={} n={n} dim={dim} lambda={lam} patches={patches} metric={metric}", cfg.seed).unwrap();
    writeln!(
        csv,
        "# epsilon0: min euclidean distance over strictly related pairs; comparable_fraction: strict pairs / (n(n-1)/2)"
    )
    .unwrap();
    writeln!(
        csv,
        "patch,patch_seed,n,density,lambda,epsilon0,comparable_fraction,strict_pairs,incomparable_pairs,epsilon_bound_holds"
    )
    .unwrap();
    let mut all_hold = true;
    let mut first: Option<(LorentzPatch, FiniteOrder, MetricPointCloud)> = None;
    for i in 0..patches {
        let patch_seed = cfg.seed.wrapping_add(i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(patch_seed);
        let patch = LorentzPatch::sprinkle(n, &bbox, &mut rng).map_err(input)?;
        let order = lambda_order(&patch, lam).map_err(|e| Failure::Invalid(e.to_string()))?;
        let cloud = MetricPointCloud::euclidean(patch.coordinates()).map_err(input)?;
        let eps = epsilon_cutoff(&cloud, &order).map_err(input)?;
        let holds = match eps {
            Scale::Finite(e) => e >= lam,
            Scale::Unbounded => true,
        };
        all_hold &= holds;
        let strict = order.relation().len();
        let total = n * (n - 1) / 2;
        writeln!(
            csv,
            "{i},{patch_seed},{n},{},{lam},{eps},{},{strict},{},{holds}",
            patch.density(),
            strict as f64 / total as f64,
            total - strict
        )
        .unwrap();
        if first.is_none() {
            first = Some((patch, order, cloud));
        }
    }
    write_file(cfg, "lambda_experiment.csv", &csv)?;
    let (patch, order, cloud) = first.expect("at least one patch");
    write_file(cfg, "lambda_scatter.svg", &scatter_svg(&patch, &order, cfg.seed, lam))?;
    let radii: Vec<f64> = (0..patch.len())
        .filter_map(|x| incomparability_ball(&cloud, &order, x).ok().and_then(Scale::finite))
        .collect();
    write_file(cfg, "epsilon_histogram.svg", &histogram_svg(&radii, lam, cfg.seed))?;
    print!("{}", csv.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n"));
    println!();
    if all_hold {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("epsilon0 below Λ = {lam} on some patch")))
    }
}

const SVG_SIZE: f64 = 600.0;
const SVG_MARGIN: f64 = 30.0;

fn svg_open(title: &str, seed: u64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" viewBox=\"0 0 {SVG_SIZE} {SVG_SIZE}\">\n<!-- seed={seed} -->\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<text x=\"{SVG_MARGIN}\" y=\"20\" font-family=\"monospace\" font-size=\"12\">{title}</text>\n"
    )
}

/// Time upward, first spatial coordinate across; covering pairs as edges.
fn scatter_svg(patch: &LorentzPatch, order: &FiniteOrder, seed: u64, lam: f64) -> String {
    let b = patch.bounding_box();
    let span = SVG_SIZE - 2.0 * SVG_MARGIN;
    let sx = |x: f64| SVG_MARGIN + (x - b[1].0) / (b[1].1 - b[1].0).max(f64::MIN_POSITIVE) * span;
    let sy = |t: f64| SVG_SIZE - SVG_MARGIN - (t - b[0].0) / (b[0].1 - b[0].0).max(f64::MIN_POSITIVE) * span;
    let mut s = svg_open(&format!("Λ-order, N={}, Λ={lam}: covering pairs", patch.len()), seed);
    let pts = patch.points();
    s.push_str("<g stroke=\"#8899bb\" stroke-width=\"0.4\">\n");
    for (x, y) in order.relation().covering_pairs() {
        let (a, c) = (&pts[x].coords, &pts[y].coords);
        writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>",
            sx(a[1]),
            sy(a[0]),
            sx(c[1]),
            sy(c[0])
        )
        .unwrap();
    }
    s.push_str("</g>\n<g fill=\"#223355\">\n");
    for p in pts {
        writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.5\"/>", sx(p.coords[1]), sy(p.coords[0])).unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Distances to the nearest comparable point; a red line marks Λ.
fn histogram_svg(values: &[f64], lam: f64, seed: u64) -> String {
    let mut s = svg_open(&format!("nearest comparable distance, {} points", values.len()), seed);
    if values.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let bins = 30;
    let lo = 0.0f64;
    let hi = values.iter().copied().fold(lam, f64::max) * 1.05;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let k = (((v - lo) / (hi - lo)) * bins as f64) as usize;
        counts[k.min(bins - 1)] += 1;
    }
    let top = *counts.iter().max().unwrap_or(&1) as f64;
    let span = SVG_SIZE - 2.0 * SVG_MARGIN;
    let w = span / bins as f64;
    s.push_str("<g fill=\"#557799\">\n");
    for (k, &c) in counts.iter().enumerate() {
        let h = c as f64 / top * (span - 20.0);
        writeln!(
            s,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\"/>",
            SVG_MARGIN + k as f64 * w,
            SVG_SIZE - SVG_MARGIN - h,
            w * 0.9,
            h
        )
        .unwrap();
    }
    let lx = SVG_MARGIN + (lam - lo) / (hi - lo) * span;
    writeln!(
        s,
        "</g>\n<line x1=\"{lx:.2}\" y1=\"{SVG_MARGIN}\" x2=\"{lx:.2}\" y2=\"{:.2}\" stroke=\"red\"/>",
        SVG_SIZE - SVG_MARGIN
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

fn cmd_enumerate(cfg: &RunConfig, profile: &[usize], lam: f64) -> CmdResult {
    if profile.iter().any(|&n| n == 0) {
        return Err(Failure::Input("block sizes must be positive".into()));
    }
    let tables = enumerate_valid_tables(profile, lam).map_err(input)?;
    let reference = profile == [1, 2, 3] && tables.contains(&reference_system(lam));
    let mut text = format!(
        "# seed={} profile={profile:?} lambda={lam} count={}\n",
        cfg.seed,
        tables.len()
    );
    for (i, t) in tables.iter().enumerate() {
        writeln!(text, "\n[{i}]").unwrap();
        text.push_str(&t.render());
    }
    write_file(cfg, "tables.txt", &text)?;
    write_json(
        cfg,
        "tables.json",
        &json!({"seed": cfg.seed, "profile": profile, "lambda": lam, "count": tables.len(), "tables": tables}),
    )?;
    println!("{} valid configurations", tables.len());
    if profile == [1, 2, 3] {
        println!("reference configuration present: {reference}");
    }
    Ok(())
}

fn load_map(path: &Path) -> Result<LocalIsoconeMap, Failure> {
    let json: MapJson = parse(read_json(path)?, path)?;
    LocalIsoconeMap::from_json(json).map_err(input)
}

fn cmd_check_lhc(cfg: &RunConfig, path: &Path, radius: Option<f64>) -> CmdResult {
    let map = load_map(path)?;
    let mesh = map.cloud().mesh_size();
    let radius = radius.unwrap_or(if mesh.is_finite() { mesh } else { 0.0 });
    let verdict = check_lhc(&map, radius, cfg.mesh_deg).map_err(input)?;
    let witness = match &verdict {
        LhcVerdict::Pass => Value::Null,
        LhcVerdict::Fail { x, direction, neighbor } => {
            json!({"x": x, "neighbor": neighbor, "direction": direction.coords()})
        }
    };
    write_json(
        cfg,
        "lhc_report.json",
        &json!({
            "seed": cfg.seed,
            "radius": radius,
            "direction_mesh_deg": cfg.mesh_deg,
            "passed": verdict.passed(),
            "witness": witness,
        }),
    )?;
    match verdict {
        LhcVerdict::Pass => {
            println!("pass");
            Ok(())
        }
        LhcVerdict::Fail { x, neighbor, .. } => Err(Failure::Invalid(format!("fails at point {x} (neighbour {neighbor})"))),
    }
}

fn cmd_build_selection(cfg: &RunConfig, path: &Path, seed_direction: Option<[f64; 3]>) -> CmdResult {
    let map = load_map(path)?;
    let seed = match seed_direction {
        Some(v) => SpherePoint::from_vector(v).map_err(input)?,
        None => SpherePoint::north(),
    };
    let field = match build_selection(&map, &seed, cfg.mesh_deg) {
        Ok(f) => f,
        Err(e @ CarrierError::NotLhc { .. }) => return Err(Failure::Invalid(e.to_string())),
        Err(e) => return Err(input(e)),
    };
    write_json(
        cfg,
        "selection.json",
        &json!({
            "seed": cfg.seed,
            "seed_direction": seed.coords(),
            "radius": field.radius,
            "lipschitz": field.lipschitz,
            "values": field.to_json(),
        }),
    )?;
    println!("lipschitz {}", field.lipschitz);
    Ok(())
}
