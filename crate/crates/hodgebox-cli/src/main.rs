//! Command-line front end: parse a polytope spec, dispatch to the library,
//! print ASCII or canonical JSON.
//!
//! Exit codes: 0 success, 1 invalid input, 2 verification mismatch,
//! 3 internal consistency failure.

use std::io::Read as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::bigint::BigInt;
use num::rational::BigRational;

use hodgebox::boxes::box_of_fan;
use hodgebox::diamond::{assemble, n_counts, n_counts_literal};
use hodgebox::exact::{format_rational, is_prime_u32, parse_rational};
use hodgebox::fan::StackyFan;
use hodgebox::oracle::{verify, CoefficientAssignment};
use hodgebox::polytope::LatticePolytope;
use hodgebox::sample::{random_polytopes, FuzzSpec};
use hodgebox::{par, Error};

#[derive(Parser)]
#[command(
    name = "hodgebox",
    version,
    about = "Stacky-fan invariants and exact Jacobian-ring verification for Laurent polynomials with simplicial Newton polytope"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the polytope spec (JSON), or '-' for stdin
    spec: String,
    /// Output format
    #[arg(long, value_enum, default_value = "ascii")]
    format: Format,
    /// Worker threads (0 = library default); needs the `parallel` feature
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct CoeffArgs {
    /// Coefficients: `ones`, `file` (from the spec document), or `random:SEED`
    #[arg(long, default_value = "file")]
    coeffs: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check the input assumptions and report basic invariants
    Validate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Stacky fan summary: rays, cones, multiplicities, f/h-vectors
    Fan {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Box elements with degrees, minimal cones and inverses
    Box {
        #[command(flatten)]
        common: CommonArgs,
        /// Also print the literal per-cone counts (faces included)
        #[arg(long)]
        diagnostic_literal_box: bool,
    },
    /// Hodge diamonds, spectrum, Milnor number and flags
    Diamond {
        #[command(flatten)]
        common: CommonArgs,
        /// Include the literal outer-product tables in the output
        #[arg(long)]
        diagnostic_literal_box: bool,
    },
    /// The singularity spectrum alone
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the exact Jacobian-ring oracle against the combinatorics
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        coeffs: CoeffArgs,
        /// Word-size prime for a modular rank precheck (exact result stays
        /// authoritative)
        #[arg(long)]
        prime: Option<u32>,
    },
    /// Sample random polytopes and verify each one
    Fuzz {
        /// Ambient rank
        #[arg(long)]
        rank: usize,
        /// Coordinate bound for sampled vertices
        #[arg(long, default_value_t = 3)]
        bound: i64,
        /// Upper bound on the normalized volume
        #[arg(long, default_value_t = 60)]
        volume_bound: u64,
        /// Number of polytopes
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Base seed; polytope i uses seed + i
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        prime: Option<u32>,
    },
}

/// Parsed input document.
struct PolytopeSpec {
    name: String,
    polytope: LatticePolytope,
    coefficients: Option<Vec<BigRational>>,
    seed: Option<u64>,
}

fn read_spec(path: &str) -> Result<PolytopeSpec, Error> {
    let raw = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::BadInput(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::BadInput(format!("cannot read {path}: {e}")))?
    };
    let doc: serde_json::Value =
        serde_json::from_str(&raw).map_err(|e| Error::BadInput(format!("invalid JSON: {e}")))?;
    let name = doc
        .get("name")
        .and_then(|v| v.as_str())
        .unwrap_or("unnamed")
        .to_string();
    let rank = doc
        .get("rank")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::BadInput("missing integer field \"rank\"".into()))?
        as usize;
    let verts = doc
        .get("vertices")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::BadInput("missing array field \"vertices\"".into()))?;
    let mut vertices: Vec<Vec<BigInt>> = Vec::with_capacity(verts.len());
    for (i, row) in verts.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::BadInput(format!("vertex #{i} is not an array")))?;
        if row.len() != rank {
            return Err(Error::BadInput(format!(
                "vertex #{i} has {} coordinates, expected {rank}",
                row.len()
            )));
        }
        let mut v = Vec::with_capacity(rank);
        for c in row {
            let c = c
                .as_i64()
                .ok_or_else(|| Error::BadInput(format!("vertex #{i} has a non-integer entry")))?;
            v.push(BigInt::from(c));
        }
        vertices.push(v);
    }
    let polytope = LatticePolytope::validate(vertices, None)?;
    let coefficients = match doc.get("coefficients") {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::Object(map)) => {
            let mut values =
                vec![BigRational::from_integer(BigInt::from(1)); polytope.vertices().len()];
            for (key, val) in map {
                let idx: usize = key
                    .parse()
                    .map_err(|_| Error::BadInput(format!("bad coefficient index {key:?}")))?;
                if idx >= values.len() {
                    return Err(Error::BadInput(format!(
                        "coefficient index {idx} out of range"
                    )));
                }
                let s = val
                    .as_str()
                    .ok_or_else(|| Error::BadInput("coefficient values must be strings".into()))?;
                values[idx] = parse_rational(s)?;
            }
            Some(values)
        }
        Some(_) => {
            return Err(Error::BadInput(
                "\"coefficients\" must be an object mapping index to \"a/b\"".into(),
            ))
        }
    };
    let seed = doc.get("seed").and_then(|v| v.as_u64());
    Ok(PolytopeSpec {
        name,
        polytope,
        coefficients,
        seed,
    })
}

fn resolve_coefficients(
    spec: &PolytopeSpec,
    choice: &str,
) -> Result<CoefficientAssignment, Error> {
    let count = spec.polytope.vertices().len();
    match choice {
        "file" => match &spec.coefficients {
            Some(values) => CoefficientAssignment::user(values.clone()),
            None => match spec.seed {
                Some(seed) => Ok(CoefficientAssignment::seeded(count, seed)),
                None => Ok(CoefficientAssignment::all_ones(count)),
            },
        },
        "ones" => Ok(CoefficientAssignment::all_ones(count)),
        other => {
            if let Some(seed) = other.strip_prefix("random:") {
                let seed: u64 = seed
                    .parse()
                    .map_err(|_| Error::BadInput(format!("bad seed in --coeffs {other:?}")))?;
                Ok(CoefficientAssignment::seeded(count, seed))
            } else {
                Err(Error::BadInput(format!(
                    "--coeffs must be `ones`, `file` or `random:SEED`, got {other:?}"
                )))
            }
        }
    }
}

fn cmd_validate(common: &CommonArgs) -> Result<u8, Error> {
    match read_spec(&common.spec) {
        Ok(spec) => {
            let p = &spec.polytope;
            match common.format {
                Format::Ascii => println!(
                    "valid: name={}, n={}, vertices={}, facets={}, normalized volume={}",
                    spec.name,
                    p.rank(),
                    p.vertices().len(),
                    p.facets().len(),
                    p.normalized_volume()
                ),
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "valid": true,
                        "name": spec.name,
                        "rank": p.rank(),
                        "vertices": p.vertices().len(),
                        "facets": p.facets().len(),
                        "normalized_volume": p.normalized_volume().to_string(),
                    })
                ),
            }
            Ok(0)
        }
        Err(e) if e.is_validation() => {
            match common.format {
                Format::Ascii => println!("invalid: {e}"),
                Format::Json => println!(
                    "{}",
                    serde_json::json!({"valid": false, "kind": e.kind(), "error": e.to_string()})
                ),
            }
            Ok(1)
        }
        Err(e) => Err(e),
    }
}

fn cmd_fan(common: &CommonArgs) -> Result<(), Error> {
    let spec = read_spec(&common.spec)?;
    let fan = StackyFan::from_polytope(&spec.polytope);
    let (fv, hv) = fan.f_and_h_vector(fan.zero_cone())?;
    match common.format {
        Format::Ascii => {
            println!("stacky fan of {} (rank {})", spec.name, fan.rank());
            for (i, r) in fan.rays().iter().enumerate() {
                let coords: Vec<String> = r.iter().map(|c| c.to_string()).collect();
                println!("  ray {i}: ({})", coords.join(","));
            }
            let mut by_dim = vec![0usize; fan.rank() + 1];
            for c in fan.cone_ids() {
                by_dim[fan.cone_dim(c)] += 1;
            }
            println!("  cones by dimension: {by_dim:?}");
            println!("  f-vector: {fv:?}");
            println!("  h-vector: {hv:?}");
            for &m in fan.maximal_cones() {
                println!(
                    "  maximal cone {:?}: multiplicity {}",
                    fan.cone_rays(m),
                    fan.multiplicity(m)
                );
            }
        }
        Format::Json => {
            let rays: Vec<Vec<String>> = fan
                .rays()
                .iter()
                .map(|r| r.iter().map(|c| c.to_string()).collect())
                .collect();
            let maximal: Vec<serde_json::Value> = fan
                .maximal_cones()
                .iter()
                .map(|&m| {
                    serde_json::json!({
                        "rays": fan.cone_rays(m),
                        "multiplicity": fan.multiplicity(m).to_string(),
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::json!({
                    "name": spec.name,
                    "rank": fan.rank(),
                    "rays": rays,
                    "cone_count": fan.cone_count(),
                    "f_vector": fv,
                    "h_vector": hv,
                    "maximal_cones": maximal,
                })
            );
        }
    }
    Ok(())
}

fn cmd_box(common: &CommonArgs, literal: bool) -> Result<(), Error> {
    let spec = read_spec(&common.spec)?;
    let fan = StackyFan::from_polytope(&spec.polytope);
    let cache = box_of_fan(&fan)?;
    let elements: Vec<serde_json::Value> = cache
        .elements()
        .iter()
        .enumerate()
        .map(|(i, el)| {
            let inv = cache.element(cache.inverse_index(i));
            serde_json::json!({
                "point": el.point.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "sigma": fan.cone_rays(el.cone),
                "lambda": el.lambda.iter()
                    .map(|(r, l)| serde_json::json!([r, format_rational(l)]))
                    .collect::<Vec<_>>(),
                "degree": format_rational(&el.degree),
                "inverse": inv.point.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let literal_rows = if literal {
        let lit = n_counts_literal(&fan)?;
        let int = n_counts(&cache);
        let cone_rays: Vec<Vec<usize>> =
            fan.cone_ids().map(|c| fan.cone_rays(c).to_vec()).collect();
        Some(
            lit.counts
                .iter()
                .map(|((cone, deg), cnt)| {
                    serde_json::json!({
                        "cone": cone_rays[*cone],
                        "degree": format_rational(deg),
                        "literal": cnt,
                        "interior": int.counts.get(&(*cone, deg.clone())).copied().unwrap_or(0),
                    })
                })
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    match common.format {
        Format::Ascii => {
            println!("Box(Sigma) of {}: {} elements", spec.name, cache.len());
            for el in &elements {
                println!(
                    "  u={} sigma={} deg={} u^-1={}",
                    el["point"], el["sigma"], el["degree"], el["inverse"]
                );
            }
            if let Some(rows) = literal_rows {
                println!("literal per-cone counts (faces included) vs interior:");
                for r in rows {
                    println!(
                        "  cone {} deg {}: literal {} interior {}",
                        r["cone"], r["degree"], r["literal"], r["interior"]
                    );
                }
            }
        }
        Format::Json => {
            let mut out = serde_json::json!({
                "name": spec.name,
                "count": cache.len(),
                "elements": elements,
            });
            if let Some(rows) = literal_rows {
                out["literal_counts"] = serde_json::Value::Array(rows);
            }
            println!("{out}");
        }
    }
    Ok(())
}

fn cmd_diamond(common: &CommonArgs, literal: bool, spectrum_only: bool) -> Result<(), Error> {
    let spec = read_spec(&common.spec)?;
    let fan = StackyFan::from_polytope(&spec.polytope);
    let cache = box_of_fan(&fan)?;
    let set = assemble(&fan, &cache)?;
    match common.format {
        Format::Ascii => {
            if !spectrum_only {
                println!("HD_0 (weight {}):", set.hd_zero.weight);
                println!("{}", set.hd_zero.render_ascii());
                println!("HD_!=0 (weight {}):", set.hd_nonzero.weight);
                println!("{}", set.hd_nonzero.render_ascii());
            }
            println!("spectrum:");
            println!("{}", set.spectrum.render_ascii());
            if !spectrum_only {
                println!("milnor number: {}", set.milnor);
                println!("hodge-tate: {}", set.hodge_tate);
                println!("fractional spectrum: {}", set.fractional_spectrum);
                if literal {
                    for t in &set.tables {
                        println!(
                            "table cone={} alpha={} shape_weight={} h={:?} counts={:?}",
                            t.cone,
                            format_rational(&t.alpha),
                            t.shape_weight,
                            t.h_column,
                            t.count_row
                                .iter()
                                .map(|(d, c)| (format_rational(d), *c))
                                .collect::<Vec<_>>()
                        );
                    }
                }
            }
        }
        Format::Json => {
            if spectrum_only {
                println!("{}", set.spectrum.to_json());
            } else {
                let mut out = serde_json::json!({
                    "name": spec.name,
                    "hd_zero": set.hd_zero.to_json(),
                    "hd_nonzero": set.hd_nonzero.to_json(),
                    "spectrum": set.spectrum.to_json(),
                    "milnor": set.milnor.to_string(),
                    "hodge_tate": set.hodge_tate,
                    "fractional_spectrum": set.fractional_spectrum,
                });
                if literal {
                    let tables: Vec<serde_json::Value> = set
                        .tables
                        .iter()
                        .map(|t| {
                            serde_json::json!({
                                "cone": t.cone,
                                "alpha": format_rational(&t.alpha),
                                "shape_weight": t.shape_weight,
                                "h_column": t.h_column,
                                "count_row": t.count_row.iter()
                                    .map(|(d, c)| serde_json::json!([format_rational(d), c]))
                                    .collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    out["literal_tables"] = serde_json::Value::Array(tables);
                }
                println!("{out}");
            }
        }
    }
    Ok(())
}

fn cmd_verify(common: &CommonArgs, coeffs: &CoeffArgs, prime: Option<u32>) -> Result<bool, Error> {
    let spec = read_spec(&common.spec)?;
    if let Some(p) = prime {
        if !is_prime_u32(p) {
            return Err(Error::BadInput(format!("--prime {p} is not prime")));
        }
    }
    let a = resolve_coefficients(&spec, &coeffs.coeffs)?;
    let report = verify(&spec.polytope, &spec.name, &a, prime)?;
    match common.format {
        Format::Ascii => {
            println!(
                "verify {}: milnor {} (expected {})",
                report.polytope, report.milnor, report.expected_milnor
            );
            println!("  coefficients: {}", report.coefficients);
            for (beta, d) in &report.per_degree {
                println!("  deg {}: dim {}", format_rational(beta), d);
            }
            let c = &report.checks;
            let word = |ok: bool| if ok { "pass" } else { "FAIL" };
            println!("  dimensions:     {}", word(c.dimensions));
            println!("  milnor total:   {}", word(c.milnor_total));
            println!("  hard lefschetz: {}", word(c.lefschetz));
            println!("  birkhoff:       {}", word(c.birkhoff));
            println!("  spectrum match: {}", word(c.spectrum_match));
            println!("  similarity:     {}", word(c.similarity));
            if let Some((p, ok)) = c.modular_precheck {
                println!(
                    "  mod-{p} precheck: {}",
                    if ok { "agrees" } else { "DISAGREES" }
                );
            }
            for m in &report.mismatches {
                println!("  mismatch: {m}");
            }
        }
        Format::Json => println!("{}", report.to_json()),
    }
    Ok(report.pass())
}

fn cmd_fuzz(
    rank: usize,
    bound: i64,
    volume_bound: u64,
    count: usize,
    seed: u64,
    format: Format,
    prime: Option<u32>,
) -> Result<bool, Error> {
    if let Some(p) = prime {
        if !is_prime_u32(p) {
            return Err(Error::BadInput(format!("--prime {p} is not prime")));
        }
    }
    let mut results: Vec<serde_json::Value> = Vec::with_capacity(count);
    let mut failures: Vec<u64> = Vec::new();
    for i in 0..count {
        let poly_seed = seed + i as u64;
        let spec = FuzzSpec {
            rank,
            coord_bound: bound,
            volume_bound,
            count: 1,
            seed: poly_seed,
        };
        let p = random_polytopes(&spec)?.pop().expect("one polytope");
        let a = CoefficientAssignment::all_ones(p.vertices().len());
        let name = format!("fuzz-{poly_seed}");
        let report = verify(&p, &name, &a, prime)?;
        let fan = StackyFan::from_polytope(&p);
        let cache = box_of_fan(&fan)?;
        let set = assemble(&fan, &cache)?;
        let pass = report.pass()
            && set.spectrum.is_symmetric(rank)
            && set.hd_zero.is_symmetric()
            && set.hd_nonzero.is_symmetric();
        if !pass {
            failures.push(poly_seed);
        }
        match format {
            Format::Ascii => println!(
                "{name}: vertices={} milnor={} {}",
                p.vertices().len(),
                report.milnor,
                if pass { "pass" } else { "FAIL" }
            ),
            Format::Json => results.push(serde_json::json!({
                "seed": poly_seed,
                "vertices": p.vertices().len(),
                "milnor": report.milnor.to_string(),
                "pass": pass,
            })),
        }
    }
    let pass_count = count - failures.len();
    match format {
        Format::Ascii => {
            println!("fuzz summary: {pass_count}/{count} pass");
            if !failures.is_empty() {
                println!("failing seeds: {failures:?}");
            }
        }
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "rank": rank,
                "count": count,
                "pass": pass_count,
                "failing_seeds": failures,
                "runs": results,
            })
        ),
    }
    Ok(pass_count == count)
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    let ok = |r: Result<(), Error>| r.map(|()| 0u8);
    let gate = |r: Result<bool, Error>| r.map(|pass| if pass { 0u8 } else { 2 });
    match &cli.command {
        Command::Validate { common } => par::with_jobs(common.jobs, || cmd_validate(common)),
        Command::Fan { common } => par::with_jobs(common.jobs, || ok(cmd_fan(common))),
        Command::Box {
            common,
            diagnostic_literal_box,
        } => par::with_jobs(common.jobs, || ok(cmd_box(common, *diagnostic_literal_box))),
        Command::Diamond {
            common,
            diagnostic_literal_box,
        } => par::with_jobs(common.jobs, || {
            ok(cmd_diamond(common, *diagnostic_literal_box, false))
        }),
        Command::Spectrum { common } => {
            par::with_jobs(common.jobs, || ok(cmd_diamond(common, false, true)))
        }
        Command::Verify {
            common,
            coeffs,
            prime,
        } => par::with_jobs(common.jobs, || gate(cmd_verify(common, coeffs, *prime))),
        Command::Fuzz {
            rank,
            bound,
            volume_bound,
            count,
            seed,
            format,
            jobs,
            prime,
        } => par::with_jobs(*jobs, || {
            gate(cmd_fuzz(
                *rank,
                *bound,
                *volume_bound,
                *count,
                *seed,
                *format,
                *prime,
            ))
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(1)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
