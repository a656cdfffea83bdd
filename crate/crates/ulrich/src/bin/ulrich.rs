//! Batch command-line front end for the engine.
//!
//! Exit codes: `0` for decided runs, `2` when any verdict stayed undecided,
//! `1` for input or usage errors. Identical invocations produce byte-identical
//! output; the randomized oracle therefore requires an explicit `--seed`.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ulrich::classify::{classify, SearchCaps};
use ulrich::cohomology;
use ulrich::families::{boundary_candidates, family_count, theorem_family, FamilyRecord};
use ulrich::higher_rank::wildness_table;
use ulrich::interpolation::{h0_interpolation, OracleParams};
use ulrich::lattice::{parse_class, polarization, Polarization};
use ulrich::verify::{verify, Overall, UlrichVerdict};

#[derive(Parser)]
#[command(
    name = "ulrich",
    about = "Ulrich line bundles on the plane blown up at n very general points",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Surface {
    /// Number of blown-up points.
    #[arg(long)]
    n: usize,
    /// Degree of the polarization xi = (m; 1^n).
    #[arg(long)]
    m: i64,
    /// Also accept the conjectural very-ampleness criterion m(m+3)/2 - n >= 5.
    #[arg(long = "allow-conjectural-very-ample")]
    allow_conjectural: bool,
}

impl Surface {
    fn polarization(&self) -> ulrich::Result<Polarization> {
        let pol = polarization(self.n, self.m, self.allow_conjectural)?;
        if !pol.very_ample {
            return Err(ulrich::Error::InvalidInput(format!(
                "xi(n={}, m={}) is not certified very ample{}",
                self.n,
                self.m,
                if self.allow_conjectural { "" } else { " (try --allow-conjectural-very-ample)" }
            )));
        }
        Ok(pol)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the four Ulrich conditions for one class.
    Verify {
        #[command(flatten)]
        surface: Surface,
        /// Class in exponential notation, e.g. "(6;2^6,1)".
        #[arg(long)]
        class: String,
        #[arg(long)]
        json: bool,
    },
    /// Emit the parametric family records for (n, m).
    Families {
        #[command(flatten)]
        surface: Surface,
        /// Restrict to one degree.
        #[arg(long)]
        d: Option<i64>,
        /// Include the k = 0 boundary records.
        #[arg(long)]
        boundary: bool,
        /// Print only (m, count) for the minimal very-ample m.
        #[arg(long)]
        count: bool,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustively classify Ulrich line bundles for (n, m).
    Classify {
        #[command(flatten)]
        surface: Surface,
        /// Override the per-degree multiplicity ceiling (default max(2, d)).
        #[arg(long = "caps-mult-max")]
        caps_mult_max: Option<i64>,
        /// Override the magnitude of the negative-multiplicity floor
        /// (default d, i.e. entries >= -d).
        #[arg(long = "caps-mult-min")]
        caps_mult_min: Option<i64>,
        /// Override the degree ceiling.
        #[arg(long = "caps-d-max")]
        caps_d_max: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Euler characteristics, moduli dimensions and extension bounds for
    /// ranks 1..=rmax.
    #[command(name = "higher-rank")]
    HigherRank {
        #[command(flatten)]
        surface: Surface,
        #[arg(long)]
        rmax: u64,
        /// Emit CSV instead of the aligned table.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo interpolation estimate of h^0 over a prime field.
    Oracle {
        /// Class in exponential notation.
        #[arg(long)]
        class: String,
        /// Prime modulus, at least 2^20.
        #[arg(long, default_value_t = 2_147_483_647)]
        prime: u64,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        /// RNG seed (required: runs must be reproducible).
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> ulrich::Result<ExitCode> {
    match command {
        Command::Verify { surface, class, json } => {
            let pol = surface.polarization()?;
            let c = parse_class(&class)?;
            let verdict = verify(&c, &pol)?;
            if json {
                print_json(&verdict);
            } else {
                print_verdict(&verdict, &pol);
            }
            Ok(match verdict.overall {
                Overall::Undecided(_) => ExitCode::from(2),
                _ => ExitCode::SUCCESS,
            })
        }
        Command::Families { surface, d, boundary, count, json } => {
            if count {
                let (m, k) = family_count(surface.n)?;
                if json {
                    print_json(&json!({ "n": surface.n, "m": m, "count": k }));
                } else {
                    println!("n = {}: minimal very-ample m = {m}, {k} family shapes", surface.n);
                }
                return Ok(ExitCode::SUCCESS);
            }
            let mut records = theorem_family(surface.n, surface.m, surface.allow_conjectural)?;
            if boundary {
                for rec in boundary_candidates(surface.n, surface.m, surface.allow_conjectural)? {
                    if !records.iter().any(|r| r.class == rec.class) {
                        records.push(rec);
                    }
                }
            }
            if let Some(d) = d {
                records.retain(|r| r.d == d);
            }
            if json {
                // JSON lines: one record per line.
                for rec in &records {
                    println!("{}", serde_json::to_string(rec).expect("records serialize"));
                }
            } else {
                print_family_table(&records);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { surface, caps_mult_max, caps_mult_min, caps_d_max, json } => {
            let pol = surface.polarization()?;
            let caps = SearchCaps {
                mult_max: caps_mult_max,
                mult_min: caps_mult_min,
                d_max: caps_d_max,
            };
            let report = classify(&pol, &caps)?;
            if json {
                print_json(&report);
            } else {
                print_classification(&report);
            }
            Ok(if report.undecided.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::HigherRank { surface, rmax, csv, json } => {
            let table = wildness_table(surface.n, surface.m, rmax, surface.allow_conjectural)?;
            if json {
                print_json(&table);
            } else if csv {
                println!("r,epsilon,slope,chi_e_l,chi_l_e,chi_end,h1_e_l,moduli_dim,ext_bound");
                for p in &table {
                    println!(
                        "{},{},{},{},{},{},{},{},{}",
                        p.r,
                        p.epsilon,
                        p.slope,
                        p.chi_e_l,
                        p.chi_l_e,
                        p.chi_end,
                        p.h1_e_l,
                        p.moduli_dim,
                        p.ext_bound.map_or(String::new(), |v| v.to_string())
                    );
                }
            } else {
                print_rank_table(&table);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { class, prime, trials, seed, json } => {
            let c = parse_class(&class)?;
            let params = OracleParams { prime, trials, seed };
            let estimate = h0_interpolation(&c, &params)?;
            let ladder = cohomology::h0(&c).map(|v| v.to_string());
            if json {
                print_json(&json!({
                    "class": c.to_string(),
                    "prime": prime,
                    "trials": trials,
                    "seed": seed,
                    "h0_interpolation": estimate,
                    "h0_ladder": ladder,
                }));
            } else {
                match &ladder {
                    Some(v) => println!(
                        "h0({c}) = {estimate} by interpolation (ladder: {v})"
                    ),
                    None => println!(
                        "h0({c}) = {estimate} by interpolation (ladder: undecided)"
                    ),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

fn tri(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "undecided",
    }
}

fn print_verdict(v: &UlrichVerdict, pol: &Polarization) {
    println!("class       {}", v.class);
    if v.canonical != v.class {
        println!("canonical   {}", v.canonical);
    }
    println!(
        "xi          {}  (very ample: {})",
        pol.class(),
        pol.criterion_used
            .map(|c| serde_json::to_value(c).unwrap().as_str().unwrap().to_owned())
            .unwrap_or_else(|| "no".into())
    );
    println!("(i)   degree       {}", if v.cond_i { "pass" } else { "FAIL" });
    println!("(ii)  euler char   {}", if v.cond_ii { "pass" } else { "FAIL" });
    let rule = |r: &Option<String>| r.as_deref().map(|r| format!("  [{r}]")).unwrap_or_default();
    println!("(iii) speciality   {}{}", tri(v.cond_iii), rule(&v.cond_iii_rule));
    println!("(iv)  restriction  {}{}", tri(v.cond_iv), rule(&v.cond_iv_rule));
    println!(
        "smoothness  {} ({})",
        serde_json::to_value(v.smoothness.status)
            .unwrap()
            .as_str()
            .unwrap(),
        v.smoothness.rule
    );
    let overall = match &v.overall {
        Overall::Ulrich => "ULRICH".to_string(),
        Overall::NotUlrich(c) => format!("NOT ULRICH (condition ({c}) fails)"),
        Overall::Undecided(r) => format!(
            "UNDECIDED ({})",
            match r {
                ulrich::verify::UndecidedReason::Smoothness => "smoothness uncertified".into(),
                ulrich::verify::UndecidedReason::OracleGap(c) =>
                    format!("condition ({c}) outside the decision ladder"),
            }
        ),
    };
    println!("overall     {overall}");
    if v.whitelist_eligible {
        println!("note        class is on the classical smoothness whitelist");
    }
}

fn print_family_table(records: &[FamilyRecord]) {
    if records.is_empty() {
        println!("no records");
        return;
    }
    println!(
        "{:>4} {:>4} {:>4} {:>6} {:>4}  {:<24} boundary",
        "n", "m", "d", "delta", "k", "class"
    );
    for r in records {
        println!(
            "{:>4} {:>4} {:>4} {:>6} {:>4}  {:<24} {}",
            r.n,
            r.m,
            r.d,
            r.delta,
            r.k,
            r.class,
            if r.boundary { "yes" } else { "" }
        );
    }
}

fn print_classification(report: &ulrich::classify::ClassificationReport) {
    println!(
        "classification for n = {}, m = {} (degree box d <= {}{})",
        report.n,
        report.m,
        report.caps.d_max,
        if report.complete { ", classically complete" } else { ", heuristic box" }
    );
    println!("ulrich classes ({}):", report.ulrich.len());
    for c in &report.ulrich {
        let tag = if report.whitelisted.contains(c) { "  [whitelisted smoothness]" } else { "" };
        println!("  {c}{tag}");
    }
    println!("near misses ({}):", report.near_misses.len());
    for nm in &report.near_misses {
        println!("  {}  fails ({})", nm.class, nm.failing);
    }
    println!("undecided ({}):", report.undecided.len());
    for u in &report.undecided {
        println!("  {}  {}", u.class, u.reason);
    }
    if !report.caps.saturated.is_empty() {
        println!("classes touching the search caps (possible truncation):");
        for c in &report.caps.saturated {
            println!("  {c}");
        }
    }
}

fn print_rank_table(table: &[ulrich::higher_rank::RankProfile]) {
    println!(
        "{:>4} {:>3} {:>6} {:>9} {:>9} {:>10} {:>7} {:>11} {:>9}",
        "r", "eps", "slope", "chi(E,L*)", "chi(L,E*)", "chi(E,E*)", "h1(E,L*)", "moduli dim", "ext bound"
    );
    for p in table {
        println!(
            "{:>4} {:>3} {:>6} {:>9} {:>9} {:>10} {:>7} {:>11} {:>9}",
            p.r,
            p.epsilon,
            p.slope,
            p.chi_e_l,
            p.chi_l_e,
            p.chi_end,
            p.h1_e_l,
            p.moduli_dim,
            p.ext_bound.map_or("-".to_string(), |v| v.to_string())
        );
    }
}
