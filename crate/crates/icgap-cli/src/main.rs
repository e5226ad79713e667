//! Command-line front end: reads channel specs, runs the library
//! computations, and writes CSV/JSON artifacts suitable for plotting.
//!
//! Exit codes: 0 on success, 1 on unusable input (bad flags, unreadable or
//! malformed channel specs), 2 when a requested check ran but did not hold
//! (failed gap certificate, reciprocity mismatch, infeasible rate split,
//! failed verification trials).

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use icgap::bounds::{outer_bound, outer_region, RateBoundSet};
use icgap::channel::{channel_from_json, ChannelConfig};
use icgap::fixtures;
use icgap::geometry::{gap_certificate_slack, hull_union, RatePair, RateRegion2D};
use icgap::matrix::ToleranceProfile;
use icgap::ratesplit::solve_subrates;
use icgap::schemes::{
    mutual_infos, region_ge, region_r2, region_ra, region_ra_star, simple_split, split_for,
    SchemeChoice,
};
use icgap::verify::{certify_theorems, sum_rate_comparison, SisoParams};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "icgap",
    version,
    about = "Rate bounds, achievable regions, and gap certificates for the 2-user Gaussian MIMO interference channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the seven outer bounds and write bounds.json.
    Bounds {
        /// Channel spec: a JSON file path, inline JSON, or a built-in name
        /// (example1, example2).
        #[arg(long, default_value = "example2")]
        input: String,
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
    },
    /// Write the vertex lists of the outer, nine-constraint, achievable,
    /// and both gap-shifted regions.
    Regions {
        #[arg(long, default_value = "example2")]
        input: String,
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
        /// csv writes one file per region; json writes regions.json.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Certify both constant-gap offsets against the outer bound; exit 2 if
    /// either certificate fails. Writes gap_check.json.
    GapCheck {
        #[arg(long, default_value = "example2")]
        input: String,
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
    },
    /// Pick a coding scheme and sub-rate split for a target rate pair;
    /// exit 2 if the target is not achievable. Writes rate_split.json.
    RateSplit {
        #[arg(long, default_value = "example2")]
        input: String,
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
        /// Target "R1,R2" in bits. Default: the achievable-region vertex
        /// with the largest sum rate.
        #[arg(long)]
        target: Option<String>,
    },
    /// Compare the outer bounds of the channel and its reciprocal; exit 2
    /// if the pairing is off by more than 1e-6 bits. Writes reciprocity.json.
    Reciprocity {
        #[arg(long, default_value = "example2")]
        input: String,
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
    },
    /// Re-check the headline claims on random channels; exit 2 on any
    /// failure. Writes verify.json.
    Verify {
        /// Antenna counts "M1,N1,M2,N2".
        #[arg(long, default_value = "2,2,2,2")]
        dims: String,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Power range "LO,HI" in dB for the random channels.
        #[arg(long, default_value = "0,40")]
        rho_db: String,
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
    },
    /// Write the plotting bundle for the built-in channels: the
    /// counterexample to the withdrawn weighted-sum cap, the regions of the
    /// bundled (2,3,2,2) channel, and the time-sharing comparison.
    Figures {
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}

fn run(command: Command) -> Result<i32, String> {
    match command {
        Command::Bounds { input, output_dir } => cmd_bounds(&input, &output_dir),
        Command::Regions {
            input,
            output_dir,
            format,
        } => cmd_regions(&input, &output_dir, format),
        Command::GapCheck { input, output_dir } => cmd_gap_check(&input, &output_dir),
        Command::RateSplit {
            input,
            output_dir,
            target,
        } => cmd_rate_split(&input, &output_dir, target.as_deref()),
        Command::Reciprocity { input, output_dir } => cmd_reciprocity(&input, &output_dir),
        Command::Verify {
            dims,
            trials,
            seed,
            rho_db,
            output_dir,
        } => cmd_verify(&dims, trials, seed, &rho_db, &output_dir),
        Command::Figures { output_dir } => cmd_figures(&output_dir),
    }
}

fn load_channel(input: &str) -> Result<ChannelConfig, String> {
    match input {
        "example1" => Ok(fixtures::example1()),
        "example2" => Ok(fixtures::example2()),
        _ => {
            let text = if input.trim_start().starts_with('{') {
                input.to_string()
            } else {
                fs::read_to_string(input).map_err(|e| format!("cannot read {input}: {e}"))?
            };
            channel_from_json(&text).map_err(|e| format!("bad channel spec: {e}"))
        }
    }
}

fn prepare_dir(dir: &Path) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| format!("cannot serialize: {e}"))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_points_csv(path: &Path, points: &[RatePair]) -> Result<(), String> {
    // Round down at the sixth decimal: nearest-rounding can push a vertex on
    // a weighted constraint (2R1 + R2 and the like) past the containment
    // tolerance, while shrinking coordinates keeps every re-read vertex
    // inside its region.
    let floor6 = |x: f64| (x * 1e6).floor() / 1e6;
    let mut text = String::from("R1,R2\n");
    for p in points {
        text.push_str(&format!("{:.6},{:.6}\n", floor6(p.r1), floor6(p.r2)));
    }
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn parse_numbers<const N: usize>(text: &str, what: &str) -> Result<[f64; N], String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("bad {what} {text:?}: {e}"))?;
    parts.try_into().map_err(|v: Vec<f64>| {
        format!("bad {what} {text:?}: expected {N} numbers, got {}", v.len())
    })
}

fn cmd_bounds(input: &str, output_dir: &Path) -> Result<i32, String> {
    let ch = load_channel(input)?;
    prepare_dir(output_dir)?;
    write_json(&output_dir.join("bounds.json"), &outer_bound(&ch))?;
    Ok(0)
}

fn region_files(ch: &ChannelConfig) -> [(&'static str, RateRegion2D); 5] {
    [
        ("outer", outer_region(ch)),
        ("ge", region_ge(ch, &simple_split(ch))),
        ("r2", region_r2(ch)),
        ("ra", region_ra(ch)),
        ("ra_star", region_ra_star(ch)),
    ]
}

fn cmd_regions(input: &str, output_dir: &Path, format: Format) -> Result<i32, String> {
    let ch = load_channel(input)?;
    prepare_dir(output_dir)?;
    let named = region_files(&ch);
    match format {
        Format::Csv => {
            for (name, region) in &named {
                write_points_csv(&output_dir.join(format!("{name}.csv")), &region.vertices())?;
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct RegionsReport {
                outer: Vec<[f64; 2]>,
                ge: Vec<[f64; 2]>,
                r2: Vec<[f64; 2]>,
                ra: Vec<[f64; 2]>,
                ra_star: Vec<[f64; 2]>,
            }
            let as_rows = |region: &RateRegion2D| -> Vec<[f64; 2]> {
                region.vertices().iter().map(|p| [p.r1, p.r2]).collect()
            };
            let report = RegionsReport {
                outer: as_rows(&named[0].1),
                ge: as_rows(&named[1].1),
                r2: as_rows(&named[2].1),
                ra: as_rows(&named[3].1),
                ra_star: as_rows(&named[4].1),
            };
            write_json(&output_dir.join("regions.json"), &report)?;
        }
    }
    Ok(0)
}

fn cmd_gap_check(input: &str, output_dir: &Path) -> Result<i32, String> {
    let ch = load_channel(input)?;
    prepare_dir(output_dir)?;
    let gaps = ch.gap_constants();
    let outer = outer_region(&ch);
    let inner = region_r2(&ch);
    let tol = ToleranceProfile::DEFAULT.tol_geom;

    #[derive(Serialize)]
    struct GapSide {
        gap1: f64,
        gap2: f64,
        slack: f64,
        certified: bool,
    }
    let side = |g1: f64, g2: f64| {
        let slack = gap_certificate_slack(&outer, &inner, g1, g2);
        GapSide {
            gap1: g1,
            gap2: g2,
            slack,
            certified: slack >= -tol,
        }
    };
    #[derive(Serialize)]
    struct GapCheckReport {
        coarse: GapSide,
        refined: GapSide,
    }
    let report = GapCheckReport {
        coarse: side(gaps.n1, gaps.n2),
        refined: side(gaps.n1_star, gaps.n2_star),
    };
    let ok = report.coarse.certified && report.refined.certified;
    write_json(&output_dir.join("gap_check.json"), &report)?;
    if ok {
        Ok(0)
    } else {
        eprintln!("gap certificate failed; see gap_check.json for slacks");
        Ok(2)
    }
}

fn cmd_rate_split(input: &str, output_dir: &Path, target: Option<&str>) -> Result<i32, String> {
    let ch = load_channel(input)?;
    prepare_dir(output_dir)?;
    let target = match target {
        Some(text) => {
            let [r1, r2] = parse_numbers::<2>(text, "target")?;
            RatePair::new(r1, r2)
        }
        None => region_r2(&ch)
            .vertices()
            .into_iter()
            .max_by(|a, b| {
                (a.r1 + a.r2, a.r1)
                    .partial_cmp(&(b.r1 + b.r2, b.r1))
                    .expect("finite rates")
            })
            .expect("region has vertices"),
    };

    match solve_subrates(&ch, target) {
        Ok((scheme, t)) => {
            #[derive(Serialize)]
            struct RateSplitReport {
                scheme: SchemeChoice,
                r1u: f64,
                r1w: f64,
                r2u: f64,
                r2w: f64,
            }
            let report = RateSplitReport {
                scheme,
                r1u: t.r1u,
                r1w: t.r1w,
                r2u: t.r2u,
                r2w: t.r2w,
            };
            write_json(&output_dir.join("rate_split.json"), &report)?;
            Ok(0)
        }
        Err(e) => {
            eprintln!("no split for ({}, {}): {e}", target.r1, target.r2);
            Ok(2)
        }
    }
}

fn cmd_reciprocity(input: &str, output_dir: &Path) -> Result<i32, String> {
    let ch = load_channel(input)?;
    prepare_dir(output_dir)?;
    let forward = outer_bound(&ch);
    let reverse = outer_bound(&ch.reciprocal());
    // Pairing: individual caps and weighted caps map to themselves, the two
    // mixed-decoding sum caps swap.
    let pairing_deltas = [
        (reverse.b1 - forward.b1).abs(),
        (reverse.b2 - forward.b2).abs(),
        (reverse.b3 - forward.b4).abs(),
        (reverse.b4 - forward.b3).abs(),
        (reverse.b5 - forward.b5).abs(),
        (reverse.b6 - forward.b6).abs(),
        (reverse.b7 - forward.b7).abs(),
    ];
    let max_delta = pairing_deltas.iter().copied().fold(0.0, f64::max);

    #[derive(Serialize)]
    struct ReciprocityReport {
        forward: RateBoundSet,
        reverse: RateBoundSet,
        pairing_deltas: [f64; 7],
        max_delta: f64,
        matched: bool,
    }
    let report = ReciprocityReport {
        forward,
        reverse,
        pairing_deltas,
        max_delta,
        matched: max_delta <= 1e-6,
    };
    let ok = report.matched;
    write_json(&output_dir.join("reciprocity.json"), &report)?;
    if ok {
        Ok(0)
    } else {
        eprintln!("reciprocity pairing off by {max_delta:.3e} bits");
        Ok(2)
    }
}

fn cmd_verify(
    dims: &str,
    trials: u32,
    seed: u64,
    rho_db: &str,
    output_dir: &Path,
) -> Result<i32, String> {
    let dims_f = parse_numbers::<4>(dims, "dims")?;
    let dims: [usize; 4] = dims_f.map(|x| x as usize);
    if dims_f.iter().zip(dims).any(|(&f, u)| f != u as f64) || dims.contains(&0) {
        return Err(format!("bad dims {dims_f:?}: need positive integers"));
    }
    let [lo, hi] = parse_numbers::<2>(rho_db, "rho-db")?;
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(format!("bad rho-db range: {lo}..{hi}"));
    }
    prepare_dir(output_dir)?;

    let report = certify_theorems(dims, trials, seed, (lo, hi));
    let passed = report.passed();
    write_json(&output_dir.join("verify.json"), &report)?;
    if passed {
        println!(
            "verified {} trials, worst margin {:.3e} bits",
            report.trials, report.worst_margin
        );
        Ok(0)
    } else {
        eprintln!(
            "{} of {} trials failed; see verify.json",
            report.failures.len(),
            report.trials
        );
        Ok(2)
    }
}

fn cmd_figures(output_dir: &Path) -> Result<i32, String> {
    prepare_dir(output_dir)?;

    // Counterexample to the withdrawn cap on 2*R1 + R2: the claimed cap line
    // sits strictly below the achievable-sum line, so any point between them
    // witnesses the contradiction.
    let params = SisoParams::from_channel(&fixtures::example1())
        .map_err(|e| format!("built-in channel rejected: {e}"))?;
    let cmp =
        sum_rate_comparison(&params).map_err(|e| format!("built-in channel rejected: {e}"))?;
    let line = |cap: f64| vec![RatePair::new(0.0, cap), RatePair::new(cap / 2.0, 0.0)];
    write_points_csv(
        &output_dir.join("counterexample_prior_sum_bound.csv"),
        &line(cmp.claimed_cap),
    )?;
    write_points_csv(
        &output_dir.join("counterexample_achievable_sum_bound.csv"),
        &line(cmp.achievable),
    )?;
    let t = (cmp.claimed_cap + cmp.achievable) / 6.0;
    write_points_csv(
        &output_dir.join("counterexample_witness_point.csv"),
        &[RatePair::new(t, t)],
    )?;

    // Region comparison on the bundled (2,3,2,2) channel: the outer bound,
    // the three component schemes, the seven-constraint achievable region,
    // and the hull of time sharing among the components.
    let ch = fixtures::example2();
    let outer = outer_region(&ch);
    let r2 = region_r2(&ch);
    let components = [
        ("example2_ge_simple.csv", SchemeChoice::Simple),
        ("example2_ge_nocommon1.csv", SchemeChoice::NoCommon1),
        ("example2_ge_nocommon2.csv", SchemeChoice::NoCommon2),
    ];
    write_points_csv(&output_dir.join("example2_outer.csv"), &outer.vertices())?;
    let mut component_regions = Vec::new();
    for (name, choice) in components {
        let region = region_ge(&ch, &split_for(&ch, choice));
        write_points_csv(&output_dir.join(name), &region.vertices())?;
        component_regions.push(region);
    }
    write_points_csv(&output_dir.join("example2_r2.csv"), &r2.vertices())?;
    let hull = hull_union(&component_regions);
    write_points_csv(&output_dir.join("example2_timeshare_hull.csv"), &hull)?;

    // Witness points: one target past user 1's partner-decoding cap (forces
    // the no-common-message scheme) and one hull vertex outside the
    // seven-constraint region (time sharing strictly helps).
    let mi = mutual_infos(&ch, &simple_split(&ch));
    let cap1 = mi.i_priv[0] + mi.i_crosspub[1];
    let selection_witness = RatePair::new((cap1 + mi.i_full[0]) / 2.0, 0.0);
    write_points_csv(
        &output_dir.join("example2_selection_witness.csv"),
        &[selection_witness],
    )?;
    let timeshare_witness = hull
        .iter()
        .find(|p| !r2.contains(**p))
        .ok_or("expected a hull vertex outside the seven-constraint region")?;
    write_points_csv(
        &output_dir.join("example2_timeshare_witness.csv"),
        std::slice::from_ref(timeshare_witness),
    )?;
    Ok(0)
}
