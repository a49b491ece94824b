//! Batch front end: ingest posets and bilinear-map specs as JSON, run
//! the analyses and checks, and emit deterministic reports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use incidence::algebra::IncidenceAlgebra;
use incidence::bilinear::BilinearMap;
use incidence::json::{self, DecompositionJson, MapSpecJson, PosetJson, ReportJson};
use incidence::poset::FinitePoset;
use incidence::ring::RingDescriptor;
use incidence::{gen, solver, structure};

/// Exit codes, one per failure class.
const EXIT_PARSE: u8 = 10;
const EXIT_POSET: u8 = 11;
const EXIT_IDENTITY: u8 = 12;
const EXIT_PRECONDITION: u8 = 13;
const EXIT_ROUNDTRIP: u8 = 14;

#[derive(Parser)]
#[command(
    name = "incidence",
    about = "Incidence-algebra toolkit: analyze posets, check biderivation \
             identities, extract decompositions, enumerate solution spaces, fuzz",
    long_about = "Incidence-algebra toolkit over exact rings (integer, modular:N, \
                  rational).\n\n\
                  Random generation (fuzz) samples coefficients from a bounded set: \
                  integers from -9..=9, the full residue range for modular rings, and \
                  rationals with numerator -9..=9 and denominator 1..=9.\n\n\
                  Exit codes: 0 success, 10 parse error, 11 poset axiom violation, \
                  12 identity violation, 13 precondition failure, 14 round-trip mismatch."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; text mirrors the JSON content.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a poset: components, chain regions, maximal chains,
    /// extreme elements, and the minimum chain-size precondition.
    Analyze {
        /// Poset JSON file: {"elements": [...], "covers": [["a","b"], ...]}
        poset: PathBuf,
    },
    /// Check the biderivation laws and the derived identity suites for a map.
    Check {
        poset: PathBuf,
        /// Map JSON file: an explicit {"entries": [...]} table or a
        /// constructor spec ({"inner": ...}, {"inner_per_region": ...},
        /// {"extremal": ...}, {"sum": [...]}).
        map: PathBuf,
        #[arg(long, default_value = "integer")]
        ring: String,
    },
    /// Extract the decomposition of a biderivation and verify the round trip.
    Decompose {
        poset: PathBuf,
        map: PathBuf,
        #[arg(long, default_value = "integer")]
        ring: String,
    },
    /// Enumerate a basis of all biderivations over Z/p.
    Solve {
        poset: PathBuf,
        #[arg(long)]
        prime: u64,
        /// Keep one unknown per order-compatible position instead of
        /// pruning to the allowed support shapes.
        #[arg(long)]
        no_prune: bool,
    },
    /// Generate seeded random structured biderivations and assert the
    /// extract/reconstruct round trip on each.
    Fuzz {
        poset: PathBuf,
        #[arg(long, default_value = "integer")]
        ring: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: u32,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { poset } => cmd_analyze(&poset, cli.format),
        Command::Check { poset, map, ring } => cmd_check(&poset, &map, &ring, cli.format),
        Command::Decompose { poset, map, ring } => cmd_decompose(&poset, &map, &ring, cli.format),
        Command::Solve {
            poset,
            prime,
            no_prune,
        } => cmd_solve(&poset, prime, no_prune, cli.format),
        Command::Fuzz {
            poset,
            ring,
            seed,
            trials,
        } => cmd_fuzz(&poset, &ring, seed, trials, cli.format),
    }
}

fn parse_ring(text: &str) -> Result<RingDescriptor, Failure> {
    match text {
        "integer" => Ok(RingDescriptor::Integer),
        "rational" => Ok(RingDescriptor::Rational),
        other => {
            let modulus = other
                .strip_prefix("modular:")
                .and_then(|n| n.parse::<u64>().ok())
                .ok_or_else(|| {
                    Failure::new(
                        EXIT_PARSE,
                        format!("invalid ring `{other}`; expected integer, modular:N, or rational"),
                    )
                })?;
            RingDescriptor::modular(modulus).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))
        }
    }
}

fn load_poset(path: &Path) -> Result<FinitePoset, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let json: PosetJson = serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    json::poset_from_json(&json)
        .map_err(|e| Failure::new(EXIT_POSET, format!("{}: {e}", path.display())))
}

fn load_map(path: &Path, algebra: &IncidenceAlgebra) -> Result<BilinearMap, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let spec: MapSpecJson = serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    json::map_from_spec(algebra, &spec)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn emit(format: Format, value: &impl Serialize, text: impl FnOnce() -> String) {
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(value).expect("output serializes")
            );
        }
        Format::Text => println!("{}", text()),
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "passed"
    } else {
        "failed"
    }
}

fn render_element_text(e: &json::ElementJson) -> String {
    if e.entries.is_empty() {
        return "0".to_string();
    }
    e.entries
        .iter()
        .map(|entry| format!("{}*e[{},{}]", entry.coeff, entry.at.0, entry.at.1))
        .collect::<Vec<_>>()
        .join(" + ")
}

// ---------------------------------------------------------------- analyze

#[derive(Serialize)]
struct AnalyzeOutput {
    elements: Vec<String>,
    minimal: Vec<String>,
    maximal: Vec<String>,
    components: Vec<ComponentOutput>,
    min_maximal_chain_size: usize,
    precondition_passed: bool,
}

#[derive(Serialize)]
struct ComponentOutput {
    members: Vec<String>,
    maximal_chains: Vec<Vec<String>>,
    regions: Vec<Vec<String>>,
}

fn cmd_analyze(poset_path: &Path, format: Format) -> Result<(), Failure> {
    let poset = load_poset(poset_path)?;
    let precondition = structure::check_preconditions(&poset);
    let out = AnalyzeOutput {
        elements: poset.elements().to_vec(),
        minimal: poset.names(&poset.minimal_elements()),
        maximal: poset.names(&poset.maximal_elements()),
        components: (0..poset.components().count())
            .map(|i| ComponentOutput {
                members: poset.names(poset.components().members(i)),
                maximal_chains: poset
                    .maximal_chains(i)
                    .iter()
                    .map(|chain| {
                        chain
                            .iter()
                            .map(|&x| poset.identifier(x).to_string())
                            .collect()
                    })
                    .collect(),
                regions: (0..poset.regions(i).count())
                    .map(|j| poset.names(poset.regions(i).members(j)))
                    .collect(),
            })
            .collect(),
        min_maximal_chain_size: poset.min_maximal_chain_size(),
        precondition_passed: precondition.passed(),
    };
    emit(format, &out, || {
        let mut s = String::new();
        s.push_str(&format!("elements: {}\n", out.elements.join(" ")));
        s.push_str(&format!("minimal:  {}\n", out.minimal.join(" ")));
        s.push_str(&format!("maximal:  {}\n", out.maximal.join(" ")));
        for (i, c) in out.components.iter().enumerate() {
            s.push_str(&format!("component {i}: {}\n", c.members.join(" ")));
            for (j, r) in c.regions.iter().enumerate() {
                s.push_str(&format!("  region {j}: {}\n", r.join(" ")));
            }
            for chain in &c.maximal_chains {
                s.push_str(&format!("  chain: {}\n", chain.join(" < ")));
            }
        }
        s.push_str(&format!(
            "min maximal chain size: {}\n",
            out.min_maximal_chain_size
        ));
        s.push_str(&format!(
            "precondition (every maximal chain has >= 3 elements): {}",
            verdict(out.precondition_passed)
        ));
        s
    });
    Ok(())
}

// ------------------------------------------------------------------ check

#[derive(Serialize)]
struct CheckOutput {
    passed: bool,
    suites: BTreeMap<String, ReportJson>,
}

fn cmd_check(
    poset_path: &Path,
    map_path: &Path,
    ring: &str,
    format: Format,
) -> Result<(), Failure> {
    let poset = Arc::new(load_poset(poset_path)?);
    let ring = parse_ring(ring)?;
    let algebra = IncidenceAlgebra::new(poset, ring);
    let map = load_map(map_path, &algebra)?;

    let mut suites = BTreeMap::new();
    suites.insert(
        "biderivation".to_string(),
        json::report_to_json(&algebra, &map.is_biderivation()),
    );
    suites.insert(
        "incomparable-vanishing".to_string(),
        json::report_to_json(&algebra, &map.check_incomparability()),
    );
    suites.insert(
        "support-shapes".to_string(),
        json::report_to_json(&algebra, &map.check_support_shapes()),
    );
    suites.insert(
        "partial-derivations".to_string(),
        json::report_to_json(&algebra, &map.check_partial_derivation_suite()),
    );
    suites.insert(
        "diagonal-squares".to_string(),
        json::report_to_json(&algebra, &map.check_diagonal_square_support()),
    );
    suites.insert(
        "bracket-vanishing".to_string(),
        json::report_to_json(&algebra, &map.check_bracket_vanishing()),
    );
    suites.insert(
        "change-seat".to_string(),
        json::report_to_json(&algebra, &map.check_change_seat()),
    );
    // lambda constancy only makes sense once the chain-size
    // precondition holds
    if structure::check_preconditions(algebra.poset()).passed() {
        let mut constancy = incidence::report::CheckReport::new();
        for i in 0..algebra.poset().components().count() {
            for j in 0..algebra.poset().regions(i).count() {
                constancy.merge(structure::verify_lambda_constancy(&map, i, j));
            }
        }
        suites.insert(
            "lambda-constancy".to_string(),
            json::report_to_json(&algebra, &constancy),
        );
    }

    let passed = suites.values().all(|r| r.passed);
    let out = CheckOutput { passed, suites };
    emit(format, &out, || render_check_text(&out));
    if out.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = out
            .suites
            .iter()
            .filter(|(_, r)| !r.passed)
            .map(|(name, _)| name.as_str())
            .collect();
        Err(Failure::new(
            EXIT_IDENTITY,
            format!("identity violations in: {}", failed.join(", ")),
        ))
    }
}

fn render_check_text(out: &CheckOutput) -> String {
    let mut s = String::new();
    for (name, report) in &out.suites {
        s.push_str(&format!("{name}: {}\n", verdict(report.passed)));
        for v in &report.violations {
            s.push_str(&format!("  {} at {}\n", v.identity, v.witness));
            if let (Some(e), Some(a)) = (&v.expected, &v.actual) {
                s.push_str(&format!(
                    "    expected {}\n    actual   {}\n",
                    render_element_text(e),
                    render_element_text(a)
                ));
            }
        }
    }
    s.push_str(&format!("overall: {}", verdict(out.passed)));
    s
}

// -------------------------------------------------------------- decompose

fn cmd_decompose(
    poset_path: &Path,
    map_path: &Path,
    ring: &str,
    format: Format,
) -> Result<(), Failure> {
    let poset = Arc::new(load_poset(poset_path)?);
    let ring = parse_ring(ring)?;
    let algebra = IncidenceAlgebra::new(poset, ring);
    let map = load_map(map_path, &algebra)?;

    let dec = match structure::extract_decomposition(&map) {
        Ok(dec) => dec,
        Err(e) => {
            let (code, report) = match &e {
                structure::ExtractionError::NotBiderivation { report } => {
                    (EXIT_IDENTITY, Some(report))
                }
                structure::ExtractionError::PreconditionFailed { report } => {
                    (EXIT_PRECONDITION, Some(report))
                }
                structure::ExtractionError::LambdaInconstant { report, .. } => {
                    (EXIT_IDENTITY, Some(report))
                }
                structure::ExtractionError::Structure(_) => (EXIT_PRECONDITION, None),
            };
            if let Some(report) = report {
                let rj = json::report_to_json(&algebra, report);
                emit(format, &rj, || render_report_text(&rj));
            }
            return Err(Failure::new(code, e.to_string()));
        }
    };

    let rebuilt = structure::reconstruct(&algebra, &dec)
        .map_err(|e| Failure::new(EXIT_ROUNDTRIP, e.to_string()))?;
    if rebuilt != map {
        let report = structure::verify_structure_theorem(&map);
        let rj = json::report_to_json(&algebra, &report);
        emit(format, &rj, || render_report_text(&rj));
        return Err(Failure::new(
            EXIT_ROUNDTRIP,
            "reconstruction does not reproduce the map",
        ));
    }

    let out: DecompositionJson = json::decomposition_to_json(&algebra, &dec);
    emit(format, &out, || {
        let mut s = String::new();
        for (i, comp) in out.components.iter().enumerate() {
            s.push_str(&format!("component {i}:\n"));
            for l in &comp.lambdas {
                s.push_str(&format!("  lambda[region {}] = {}\n", l.region, l.value));
            }
            s.push_str(&format!("  T = {}\n", render_element_text(&comp.t)));
        }
        s.push_str("round-trip: passed");
        s
    });
    Ok(())
}

fn render_report_text(report: &ReportJson) -> String {
    let mut s = format!("report: {}", verdict(report.passed));
    for v in &report.violations {
        s.push_str(&format!("\n  {} at {}", v.identity, v.witness));
    }
    s
}

// ------------------------------------------------------------------ solve

#[derive(Serialize)]
struct SolveOutput {
    prime: u64,
    dimension: usize,
    basis: Vec<MapSpecJson>,
}

fn cmd_solve(poset_path: &Path, prime: u64, no_prune: bool, format: Format) -> Result<(), Failure> {
    let poset = Arc::new(load_poset(poset_path)?);
    let system = solver::assemble(&poset, prime, !no_prune)
        .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
    let basis = system.solve_basis();
    let out = SolveOutput {
        prime,
        dimension: basis.len(),
        basis: basis.iter().map(json::map_to_json).collect(),
    };
    emit(format, &out, || {
        let mut s = format!("prime: {}\ndimension: {}", out.prime, out.dimension);
        for (i, spec) in out.basis.iter().enumerate() {
            s.push_str(&format!("\nbasis map {i}:"));
            if let MapSpecJson::Entries(entries) = spec {
                for e in entries {
                    s.push_str(&format!(
                        "\n  b(e[{},{}], e[{},{}]) = {}",
                        e.left.0,
                        e.left.1,
                        e.right.0,
                        e.right.1,
                        render_element_text(&e.value)
                    ));
                }
            }
        }
        s
    });
    Ok(())
}

// ------------------------------------------------------------------- fuzz

#[derive(Serialize)]
struct FuzzOutput {
    ring: String,
    seed: u64,
    trials: u32,
    passed: u32,
    failures: Vec<FuzzFailure>,
}

#[derive(Serialize)]
struct FuzzFailure {
    trial: u32,
    detail: String,
}

fn cmd_fuzz(
    poset_path: &Path,
    ring: &str,
    seed: u64,
    trials: u32,
    format: Format,
) -> Result<(), Failure> {
    let poset = Arc::new(load_poset(poset_path)?);
    let ring = parse_ring(ring)?;
    let algebra = IncidenceAlgebra::new(poset, ring.clone());

    if !structure::check_preconditions(algebra.poset()).passed() {
        return Err(Failure::new(
            EXIT_PRECONDITION,
            "poset fails the minimum chain-size precondition",
        ));
    }

    let mut failures = Vec::new();
    for trial in 0..trials {
        // one stream per trial, so results do not depend on scheduling
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
        let (map, _) = gen::random_structured_map(&algebra, &mut rng);
        let report = structure::verify_structure_theorem(&map);
        if !report.passed() {
            let detail = report
                .violations()
                .first()
                .map(|v| format!("{} at {}", v.identity, v.witness))
                .unwrap_or_else(|| "unknown".to_string());
            failures.push(FuzzFailure { trial, detail });
        }
    }

    let out = FuzzOutput {
        ring: ring.to_string(),
        seed,
        trials,
        passed: trials - failures.len() as u32,
        failures,
    };
    emit(format, &out, || {
        let mut s = format!(
            "ring: {}\nseed: {}\ntrials: {}\npassed: {}/{}",
            out.ring, out.seed, out.trials, out.passed, out.trials
        );
        for f in &out.failures {
            s.push_str(&format!("\ntrial {}: {}", f.trial, f.detail));
        }
        s
    });
    if out.failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_ROUNDTRIP,
            format!(
                "{} of {} trials failed the round trip",
                out.failures.len(),
                trials
            ),
        ))
    }
}
