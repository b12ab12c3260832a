//! Batch command-line front end. Every subcommand is deterministic; table
//! output is for reading, JSON is the machine contract. Exit codes: 0 when
//! all enabled checks pass, 1 on a check failure, 2 on usage errors.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use gammacoh::classes::{
    detection_report, e2k, h1_dim_oracle, poincare_coefficients, series_coefficient_for_weight,
    sl2z_series_discrepancy, SeriesVariant,
};
use gammacoh::cohomology::{h0, h1, pair_decomposable, spanning_rank, DecomposableClass};
use gammacoh::modular::{cusp_orbits, GroupName, GroupPresentation, GroupWord, IntMatrix2};
use gammacoh::repr::{delta_star, pr_x, Variant};
use gammacoh::Error;

#[derive(Parser)]
#[command(name = "gammacoh", version, about = "Exact H^1 of SL2(Z) and its theta subgroup with symmetric-power coefficients", max_term_width = 100)]
struct Cli {
    /// Output format: human table or machine JSON
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Presentation,
    Shapiro,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Projection {
    None,
    X,
    Diag,
}

#[derive(Subcommand)]
enum Command {
    /// Table of H^0/H^1 dimensions with series and oracle cross-checks
    Dims {
        #[arg(long)]
        group: String,
        /// Largest weight index m (module weight 2m)
        #[arg(long, default_value_t = 5)]
        weight_max: usize,
        /// Where H^1 dimensions come from (shapiro applies to theta only)
        #[arg(long, value_enum, default_value_t = Method::Presentation)]
        method: Method,
        /// Also print the modular-forms dimension oracle column
        #[arg(long)]
        oracle: bool,
    },
    /// Generator values of the Eisenstein cocycle E_2k, optionally
    /// evaluated at a matrix or word and projected
    E2k {
        #[arg(long)]
        k: usize,
        /// Matrix literal "a,b;c,d" or word over A, B such as "B^-1*A"
        #[arg(long)]
        eval: Option<String>,
        #[arg(long, value_enum, default_value_t = Projection::None)]
        project: Projection,
    },
    /// Detection report: detecting elements per class, per-cusp detections,
    /// and the spanning certificate
    Detect {
        #[arg(long)]
        group: String,
        /// Weight index m
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value_t = 8)]
        radius: u32,
    },
    /// Cusp orbits with stabilizer generators and widths
    Cusps {
        #[arg(long)]
        group: String,
    },
    /// Exact Poincare-series expansion
    Series {
        /// Odd sphere dimension n
        #[arg(long)]
        n: u64,
        /// verbatim_sl2z | corrected_sl2z | verbatim_theta
        /// (defaults to corrected_sl2z or verbatim_theta depending on n)
        #[arg(long)]
        variant: Option<String>,
        #[arg(long, default_value_t = 40)]
        terms: usize,
    },
    /// Pair every H^1 basis class against the decomposable class of gamma
    Pair {
        #[arg(long, default_value = "sl2z")]
        group: String,
        /// Weight index m
        #[arg(long)]
        weight: usize,
        /// Matrix literal "a,b;c,d"
        #[arg(long)]
        gamma: String,
    },
    /// Goldman-Millson spanning certificate
    Span {
        #[arg(long)]
        group: String,
        /// Weight index m
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value_t = 8)]
        radius: u32,
    },
}

fn max_degree_cap() -> usize {
    std::env::var("GAMMACOH_MAX_DEGREE")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(40)
}

fn check_degree(degree: usize) -> Result<(), Error> {
    let cap = max_degree_cap();
    if degree > cap {
        return Err(Error::InvalidArgument(format!(
            "module degree {degree} exceeds GAMMACOH_MAX_DEGREE = {cap}"
        )));
    }
    Ok(())
}

fn parse_group(s: &str) -> Result<GroupName, Error> {
    s.parse()
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Error> {
    match &cli.command {
        Command::Dims { group, weight_max, method, oracle } => {
            cmd_dims(cli.format, parse_group(group)?, *weight_max, *method, *oracle)
        }
        Command::E2k { k, eval, project } => cmd_e2k(cli.format, *k, eval.as_deref(), *project),
        Command::Detect { group, weight, radius } => {
            cmd_detect(cli.format, parse_group(group)?, *weight, *radius)
        }
        Command::Cusps { group } => cmd_cusps(cli.format, parse_group(group)?),
        Command::Series { n, variant, terms } => {
            cmd_series(cli.format, *n, variant.as_deref(), *terms)
        }
        Command::Pair { group, weight, gamma } => {
            cmd_pair(cli.format, parse_group(group)?, *weight, gamma)
        }
        Command::Span { group, weight, radius } => {
            cmd_span(cli.format, parse_group(group)?, *weight, *radius)
        }
    }
}

fn cmd_dims(
    format: Format,
    group: GroupName,
    weight_max: usize,
    method: Method,
    oracle: bool,
) -> Result<i32, Error> {
    check_degree(2 * weight_max)?;
    let use_presentation = matches!(method, Method::Presentation | Method::Both);
    let use_shapiro = matches!(method, Method::Shapiro | Method::Both);
    if use_shapiro && group != GroupName::Theta {
        return Err(Error::InvalidArgument(
            "--method shapiro/both applies to --group theta only".into(),
        ));
    }

    let mut rows = Vec::new();
    let mut all_agree = true;
    for m in 0..=weight_max {
        let degree = 2 * m;
        let h0_dim = h0(group, degree, Variant::Dual).len();
        let pres_dim = use_presentation.then(|| h1(group, degree, Variant::Dual).dim());
        let shapiro_dim = if use_shapiro {
            Some(gammacoh::shapiro_h1(degree, Variant::Dual)?)
        } else {
            None
        };
        let series = series_coefficient_for_weight(group, m);
        let oracle_dim = (oracle && m >= 1).then(|| h1_dim_oracle(m, group));

        let mut dims: Vec<usize> = Vec::new();
        dims.extend(pres_dim);
        dims.extend(shapiro_dim);
        let h1_dim = dims[0];
        let mut agree = dims.iter().all(|&d| d == h1_dim) && series == h1_dim as i64;
        if let Some(o) = oracle_dim {
            agree = agree && o as usize == h1_dim;
        }
        all_agree &= agree;
        rows.push(json!({
            "m": m,
            "weight": degree,
            "h0": h0_dim,
            "h1": pres_dim,
            "h1_shapiro": shapiro_dim,
            "series_coefficient": series,
            "oracle_dim": oracle_dim,
            "agree": agree,
        }));
    }

    match format {
        Format::Json => {
            let out = json!({
                "group": group.to_string(),
                "weight_max": weight_max,
                "method": format!("{method:?}").to_lowercase(),
                "rows": rows,
                "all_agree": all_agree,
            });
            println!("{}", serde_json::to_string(&out).unwrap());
        }
        Format::Table => {
            println!("group: {group}  method: {method:?}");
            println!(
                "{:<4} {:<4} {:<6} {:<10} {:<8} {:<8} {:<6}",
                "m", "h0", "h1", "shapiro", "series", "oracle", "agree"
            );
            for row in &rows {
                let opt = |key: &str| {
                    row.get(key)
                        .and_then(|v| v.as_u64())
                        .map_or("-".to_string(), |v| v.to_string())
                };
                println!(
                    "{:<4} {:<4} {:<6} {:<10} {:<8} {:<8} {:<6}",
                    row["m"].to_string(),
                    row["h0"].to_string(),
                    opt("h1"),
                    opt("h1_shapiro"),
                    row["series_coefficient"].to_string(),
                    opt("oracle_dim"),
                    if row["agree"].as_bool().unwrap() { "yes" } else { "NO" },
                );
            }
            println!("all checks agree: {}", if all_agree { "yes" } else { "NO" });
        }
    }
    Ok(if all_agree { 0 } else { 1 })
}

fn cmd_e2k(format: Format, k: usize, eval: Option<&str>, project: Projection) -> Result<i32, Error> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    check_degree(2 * k)?;
    let class = e2k(k);

    let mut eval_json = serde_json::Value::Null;
    let mut eval_lines = Vec::new();
    if let Some(spec) = eval {
        let (matrix, word) = parse_matrix_or_word(spec)?;
        let value = class.underlying.derivation_value(&matrix)?;
        let (proj_name, value_str, nonzero) = match project {
            Projection::None => ("none", value.to_string(), !value.is_zero()),
            Projection::X => {
                let p = pr_x(&value);
                ("x", p.to_string(), !p.is_zero())
            }
            Projection::Diag => {
                let p = delta_star(&value);
                ("diag", p.to_string(), !p.is_zero())
            }
        };
        eval_json = json!({
            "element": matrix.to_string(),
            "word": word.map(|w| w.to_string()),
            "projection": proj_name,
            "value": value_str,
            "nonzero": nonzero,
        });
        eval_lines.push(format!("value at {matrix}: {value}"));
        if project != Projection::None {
            eval_lines.push(format!(
                "projection ({proj_name}): {value_str}  nonzero: {nonzero}"
            ));
        } else {
            eval_lines.push(format!("nonzero: {nonzero}"));
        }
    }

    match format {
        Format::Json => {
            let out = json!({
                "k": k,
                "weight": 2 * k,
                "values": class.underlying.to_json(),
                "eval": eval_json,
            });
            println!("{}", serde_json::to_string(&out).unwrap());
        }
        Format::Table => {
            println!("E_{} (weight {})", 2 * k, 2 * k);
            println!("E(A) = {}", class.underlying.value_of("A")?);
            println!("E(B) = {}", class.underlying.value_of("B")?);
            for line in eval_lines {
                println!("{line}");
            }
        }
    }
    Ok(0)
}

/// Accepts either a matrix literal or a word over the SL2(Z) generators.
fn parse_matrix_or_word(spec: &str) -> Result<(IntMatrix2, Option<GroupWord>), Error> {
    match IntMatrix2::parse(spec) {
        Ok(m) => Ok((m, None)),
        Err(matrix_err) => match GroupWord::parse(spec) {
            Ok(w) => {
                let m = GroupPresentation::sl2z().evaluate_word(&w)?;
                Ok((m, Some(w)))
            }
            Err(_) => Err(matrix_err),
        },
    }
}

fn cmd_detect(format: Format, group: GroupName, weight: usize, radius: u32) -> Result<i32, Error> {
    if weight < 1 {
        return Err(Error::InvalidArgument("weight index must be >= 1".into()));
    }
    check_degree(2 * weight)?;
    let report = detection_report(group, weight, radius);
    match format {
        Format::Json => println!("{}", serde_json::to_string(&report).unwrap()),
        Format::Table => {
            println!(
                "group: {}  weight index: {}  dim H1: {}  series: {}  oracle: {}  agreement: {}",
                report.group,
                report.weight,
                report.dim_h1,
                report.series_coefficient,
                report.oracle_dim,
                report.agreement
            );
            for d in &report.detections {
                println!(
                    "class {} detected by {} with value {}",
                    d.class_index, d.detecting_gamma, d.value
                );
            }
            for c in &report.cusp_detections {
                println!(
                    "cusp {} (generator {}) detects class {} with value {}",
                    c.cusp, c.generator, c.class_index, c.value
                );
            }
            println!(
                "spanning rank {}/{} at radius {}; detecting set: {}",
                report.spanning.rank,
                report.spanning.dim,
                report.spanning.radius,
                report.spanning.detecting_set.join("  ")
            );
            println!("complete: {}", report.complete);
        }
    }
    Ok(if report.complete { 0 } else { 1 })
}

fn cmd_cusps(format: Format, group: GroupName) -> Result<i32, Error> {
    let pres = GroupPresentation::for_group(group);
    let cusps = cusp_orbits(&pres);
    match format {
        Format::Json => {
            let out = json!({
                "group": group.to_string(),
                "cusps": cusps.iter().map(|c| json!({
                    "representative": c.label(),
                    "stabilizer_generator": c.stabilizer_generator.to_string(),
                    "width": c.width,
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string(&out).unwrap());
        }
        Format::Table => {
            println!("group: {group}");
            println!("{:<8} {:<12} {:<6}", "cusp", "generator", "width");
            for c in &cusps {
                println!(
                    "{:<8} {:<12} {:<6}",
                    c.label(),
                    c.stabilizer_generator.to_string(),
                    c.width
                );
            }
        }
    }
    Ok(0)
}

fn cmd_series(format: Format, n: u64, variant: Option<&str>, terms: usize) -> Result<i32, Error> {
    let variant: SeriesVariant = match variant {
        Some(s) => s.parse()?,
        None => {
            if matches!(n, 1 | 3 | 7) {
                SeriesVariant::CorrectedSl2z
            } else {
                SeriesVariant::VerbatimTheta
            }
        }
    };
    let series = poincare_coefficients(n, variant, terms)?;

    // for the SL2(Z) variants the discrepancy table against the computed
    // cohomology is always reported
    let discrepancy = if variant != SeriesVariant::VerbatimTheta {
        let ell = (n + 1) as usize;
        let max_m = ((terms.saturating_sub(1)) / (2 * ell)).min(6).min(max_degree_cap() / 2);
        (max_m >= 1).then(|| sl2z_series_discrepancy(max_m))
    } else {
        None
    };

    match format {
        Format::Json => {
            let out = json!({
                "n": n,
                "ell": series.ell,
                "variant": variant.to_string(),
                "terms": terms,
                "coefficients": series.coefficients,
                "discrepancy": discrepancy,
            });
            println!("{}", serde_json::to_string(&out).unwrap());
        }
        Format::Table => {
            println!(
                "Poincare series, n = {n} (l = {}), variant {variant}, up to degree {terms}",
                series.ell
            );
            println!("{:<8} {:<6}", "degree", "count");
            for (d, c) in &series.coefficients {
                println!("{d:<8} {c:<6}");
            }
            if let Some(rep) = &discrepancy {
                println!();
                println!("series vs computed H^1 (n = 1 degree slots):");
                println!(
                    "{:<4} {:<8} {:<6} {:<10} {:<10}",
                    "m", "degree", "h1", "verbatim", "corrected"
                );
                for row in &rep.rows {
                    println!(
                        "{:<4} {:<8} {:<6} {:<10} {:<10}",
                        row.weight_index,
                        row.degree,
                        row.dim_h1,
                        format!(
                            "{}{}",
                            row.verbatim_coefficient,
                            if row.verbatim_agrees { "" } else { " (!)" }
                        ),
                        format!(
                            "{}{}",
                            row.corrected_coefficient,
                            if row.corrected_agrees { "" } else { " (!)" }
                        ),
                    );
                }
                println!(
                    "verbatim consistent: {}; corrected consistent: {}",
                    rep.verbatim_consistent, rep.corrected_consistent
                );
            }
        }
    }
    Ok(0)
}

fn cmd_pair(format: Format, group: GroupName, weight: usize, gamma: &str) -> Result<i32, Error> {
    if weight < 1 {
        return Err(Error::InvalidArgument("weight index must be >= 1".into()));
    }
    check_degree(2 * weight)?;
    let gamma = IntMatrix2::parse(gamma)?;
    let pres = GroupPresentation::for_group(group);
    if !pres.contains(&gamma) {
        return Err(Error::NotInGroup(group.to_string()));
    }
    let space = h1(group, 2 * weight, Variant::Dual);
    let dec = DecomposableClass::new(gamma.clone(), weight);
    let values: Vec<String> = space
        .basis
        .iter()
        .map(|c| pair_decomposable(c, &dec).map(|r| r.to_string()))
        .collect::<Result<_, _>>()?;
    match format {
        Format::Json => {
            let out = json!({
                "group": group.to_string(),
                "weight": weight,
                "gamma": gamma.to_string(),
                "s_gamma_power": dec.value.to_string(),
                "pairings": values,
            });
            println!("{}", serde_json::to_string(&out).unwrap());
        }
        Format::Table => {
            println!("group: {group}  weight index: {weight}  gamma: {gamma}");
            println!("s_gamma^m = {}", dec.value);
            for (i, v) in values.iter().enumerate() {
                println!("class {i}: {v}");
            }
        }
    }
    Ok(0)
}

fn cmd_span(format: Format, group: GroupName, weight: usize, radius: u32) -> Result<i32, Error> {
    if weight < 1 {
        return Err(Error::InvalidArgument("weight index must be >= 1".into()));
    }
    check_degree(2 * weight)?;
    let cert = spanning_rank(group, weight, radius);
    match format {
        Format::Json => {
            let out = json!({
                "group": group.to_string(),
                "weight": weight,
                "radius": cert.radius,
                "rank": cert.rank,
                "dim": cert.dim_h1,
                "detecting_set": cert.detecting_set.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string(&out).unwrap());
        }
        Format::Table => {
            println!(
                "group: {group}  weight index: {weight}  rank {}/{} at radius {}",
                cert.rank, cert.dim_h1, cert.radius
            );
            for g in &cert.detecting_set {
                println!("detecting element: {g}");
            }
        }
    }
    Ok(if cert.is_full() { 0 } else { 1 })
}
