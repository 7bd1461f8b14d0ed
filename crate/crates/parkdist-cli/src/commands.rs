//! Implementations of the CLI subcommands. Each returns either a table or
//! an experiment report plus an overall pass verdict; errors map to usage
//! failures at the top level.

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

use parkdist::asymptotic::{
    borel_experiment, first_car_experiment, increasing_order_experiment, last_j_limit_experiment,
    lrmax_expect_float, lrmax_order_experiment, wlln_experiment, ExperimentReport,
};
use parkdist::exact::{
    borel_pmf, factorial, induced_distribution_oracle, lrmax_expect_closed, lrmax_expect_double,
    lrmax_joint, oracle_first_car_distribution, oracle_last_j_distribution,
    oracle_lrmax_expectation, pmf_first_car_space_last, pmf_first_car_space_one, pmf_last_car,
    pmf_last_j, pmf_last_two, pmf_permutation, trailer_count,
};
use parkdist::park::{
    enumerate_preferences, is_parking_function, simulate_parking, Simulator, UniformSampler,
};
use parkdist::stats;
use parkdist::{stream_rng, Caps, Permutation, Preferences, Rational};

use num_bigint::BigUint;

use crate::output::{rational_cells, Cell, Table};
use crate::{ExperimentName, Mode, PmfKind, Stat};

/// Full permutation tables grow as n!, so listing all of them is refused
/// beyond this size (8! = 40320 rows).
const FULL_TABLE_LIMIT: usize = 8;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(parkdist::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<parkdist::Error> for CliError {
    fn from(e: parkdist::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// What a subcommand produced: a table (with its own verdict, true unless
/// the command checks something) or an experiment report.
pub enum Outcome {
    Table { table: Table, pass: bool },
    Report(ExperimentReport),
}

fn require_n(n: Option<usize>) -> Result<usize, CliError> {
    match n {
        Some(v) if v >= 1 => Ok(v),
        Some(_) => Err(usage("--n must be at least 1")),
        None => Err(usage("missing required option --n")),
    }
}

/// `verify`: cross-checks every exact formula against brute-force
/// enumeration for all sizes up to `max_n`, one row per check.
pub fn verify(max_n: Option<usize>, seed: u64, caps: &Caps) -> Result<Outcome, CliError> {
    let max_n = match max_n {
        Some(v) if v >= 1 => v,
        Some(_) => return Err(usage("--n must be at least 1")),
        None => caps.oracle_n.min(6),
    };
    let mut rows: Vec<(&'static str, usize, bool)> = Vec::new();

    for n in 1..=max_n {
        let oracle = induced_distribution_oracle(n, caps)?;
        let mut ok = oracle.len() == factorial(n).to_usize().unwrap();
        for perm in Permutation::all(n) {
            ok &= pmf_permutation(&perm) == oracle.prob_of(&perm);
        }
        rows.push(("pmf-vs-enumeration", n, ok));

        let mut ok = true;
        for j in 1..=3.min(n) {
            let law = oracle_last_j_distribution(n, j, caps)?;
            let mut total = Rational::zero();
            for (positions, truth) in &law {
                ok &= &pmf_last_j(n, positions)? == truth;
                total += truth.clone();
            }
            ok &= total.is_one();
        }
        rows.push(("last-j-vs-enumeration", n, ok));

        let truth = oracle_lrmax_expectation(n, caps)?;
        let ok = truth == lrmax_expect_closed(n, caps)? && truth == lrmax_expect_double(n, caps)?;
        rows.push(("lrmax-routes-vs-enumeration", n, ok));

        if n >= 2 {
            let mut trailing = vec![0u64; n];
            for prefs in enumerate_preferences(n, caps)? {
                if !is_parking_function(&prefs) {
                    continue;
                }
                let v = prefs.as_slice();
                let mut run = 0usize;
                while run < n && v[n - 1 - run] == 1 {
                    run += 1;
                }
                for m in 1..=run.min(n - 1) {
                    trailing[m] += 1;
                }
            }
            let mut ok = true;
            for m in 1..n {
                ok &= BigUint::from(trailing[m]) == trailer_count(n, m)?;
            }
            rows.push(("trailer-counts-vs-enumeration", n, ok));
        }

        let first = oracle_first_car_distribution(n, caps)?;
        let total: Rational = first.iter().cloned().sum();
        let ok = total.is_one()
            && first[0] == pmf_first_car_space_one(n)?
            && first[n - 1] == pmf_first_car_space_last(n)?;
        rows.push(("first-car-marginals-vs-enumeration", n, ok));

        let mut sampler = UniformSampler::new(n);
        let mut sim = Simulator::new(n);
        let mut ok = true;
        for idx in 0..2000u64 {
            let mut rng = stream_rng(seed, idx);
            let prefs = sampler.sample_into(&mut rng).to_vec();
            ok &= is_parking_function(&Preferences::new(prefs.clone())?);
            ok &= sim.run(&prefs);
        }
        rows.push(("sampler-only-parking-functions", n, ok));
    }

    let pass = rows.iter().all(|&(_, _, ok)| ok);
    let mut table = Table::new("verify", vec!["check", "n", "pass"]);
    table.param("max_n", max_n as u64);
    table.param("seed", seed);
    table.param("pass", pass);
    for (check, n, ok) in rows {
        table.push(vec![Cell::Text(check.into()), Cell::Int(n as u64), Cell::Flag(ok)]);
    }
    Ok(Outcome::Table { table, pass })
}

/// `pmf`: evaluates one of the exact laws (or the float-only Borel law)
/// and emits value rows.
#[allow(clippy::too_many_arguments)]
pub fn pmf(
    kind: PmfKind,
    n: Option<usize>,
    j: Option<usize>,
    positions: Option<Vec<usize>>,
    permutation: Option<String>,
    mode: Mode,
    caps: &Caps,
) -> Result<Outcome, CliError> {
    let exact = mode == Mode::Exact;
    let table = match kind {
        PmfKind::Perm => {
            let mut table = Table::new(
                "pmf-perm",
                if exact {
                    vec!["permutation", "probability", "decimal"]
                } else {
                    vec!["permutation", "decimal"]
                },
            );
            let perms: Vec<Permutation> = if let Some(text) = &permutation {
                let perm = Permutation::parse_one_line(text)?;
                if let Some(n) = n {
                    if n != perm.len() {
                        return Err(usage(format!(
                            "--n {n} does not match the {}-element permutation",
                            perm.len()
                        )));
                    }
                }
                vec![perm]
            } else {
                let n = require_n(n)?;
                if n > FULL_TABLE_LIMIT {
                    return Err(usage(format!(
                        "listing all n! permutations is limited to n <= {FULL_TABLE_LIMIT}; \
                         pass --permutation for a single value"
                    )));
                }
                Permutation::all(n).collect()
            };
            table.param("n", perms[0].len() as u64);
            for perm in perms {
                let p = pmf_permutation(&perm);
                let (num_den, decimal) = rational_cells(&p);
                let mut row = vec![Cell::Text(perm.one_line_key())];
                if exact {
                    row.push(num_den);
                }
                row.push(decimal);
                table.push(row);
            }
            table
        }
        PmfKind::LastCar => {
            let n = require_n(n)?;
            let mut table = Table::new(
                "pmf-last-car",
                if exact { vec!["k", "probability", "decimal"] } else { vec!["k", "decimal"] },
            );
            table.param("n", n as u64);
            for k in 1..=n {
                let p = pmf_last_car(n, k)?;
                let (num_den, decimal) = rational_cells(&p);
                let mut row = vec![Cell::Int(k as u64)];
                if exact {
                    row.push(num_den);
                }
                row.push(decimal);
                table.push(row);
            }
            table
        }
        PmfKind::LastJ => {
            let n = require_n(n)?;
            let positions = positions
                .ok_or_else(|| usage("pmf last-j requires --positions, e.g. --positions 2,5"))?;
            let p = pmf_last_j(n, &positions)?;
            let mut table = Table::new(
                "pmf-last-j",
                if exact {
                    vec!["positions", "probability", "decimal"]
                } else {
                    vec!["positions", "decimal"]
                },
            );
            table.param("n", n as u64);
            table.param("j", positions.len() as u64);
            let joined: Vec<String> = positions.iter().map(|v| v.to_string()).collect();
            let (num_den, decimal) = rational_cells(&p);
            let mut row = vec![Cell::Text(joined.join(" "))];
            if exact {
                row.push(num_den);
            }
            row.push(decimal);
            table.push(row);
            table
        }
        PmfKind::LastTwo => {
            let n = require_n(n)?;
            let mut table = Table::new(
                "pmf-last-two",
                if exact {
                    vec!["l", "m", "probability", "decimal"]
                } else {
                    vec!["l", "m", "decimal"]
                },
            );
            table.param("n", n as u64);
            let pairs: Vec<(usize, usize)> = if let Some(pos) = positions {
                if pos.len() != 2 {
                    return Err(usage("pmf last-two takes exactly two positions"));
                }
                vec![(pos[0], pos[1])]
            } else {
                let mut all = Vec::new();
                for l in 1..=n {
                    for m in 1..=n {
                        if l != m {
                            all.push((l, m));
                        }
                    }
                }
                all
            };
            for (l, m) in pairs {
                let p = pmf_last_two(n, l, m)?;
                let (num_den, decimal) = rational_cells(&p);
                let mut row = vec![Cell::Int(l as u64), Cell::Int(m as u64)];
                if exact {
                    row.push(num_den);
                }
                row.push(decimal);
                table.push(row);
            }
            table
        }
        PmfKind::LrmaxJoint => {
            let n = require_n(n)?;
            let positions = positions.ok_or_else(|| {
                usage("pmf lrmax-joint requires --positions i,j (count i at step j)")
            })?;
            if positions.len() != 2 {
                return Err(usage("pmf lrmax-joint takes exactly two positions: i,j"));
            }
            let (i, jj) = (positions[0], positions[1]);
            let p = lrmax_joint(n, i, jj)?;
            let mut table = Table::new(
                "pmf-lrmax-joint",
                if exact {
                    vec!["i", "j", "probability", "decimal"]
                } else {
                    vec!["i", "j", "decimal"]
                },
            );
            table.param("n", n as u64);
            let (num_den, decimal) = rational_cells(&p);
            let mut row = vec![Cell::Int(i as u64), Cell::Int(jj as u64)];
            if exact {
                row.push(num_den);
            }
            row.push(decimal);
            table.push(row);
            table
        }
        PmfKind::LrmaxExpect => {
            let n = require_n(n)?;
            let mut table = Table::new(
                "pmf-lrmax-expect",
                if exact {
                    vec!["n", "expectation", "decimal"]
                } else {
                    vec!["n", "decimal"]
                },
            );
            table.param("n", n as u64);
            if exact {
                let e = lrmax_expect_closed(n, caps)?;
                let (num_den, decimal) = rational_cells(&e);
                table.push(vec![Cell::Int(n as u64), num_den, decimal]);
            } else {
                table.push(vec![Cell::Int(n as u64), Cell::Float(lrmax_expect_float(n))]);
            }
            table
        }
        PmfKind::Borel => {
            if exact {
                return Err(usage(
                    "the Borel law has irrational cell values; use --mode float",
                ));
            }
            let cells = j.unwrap_or(20);
            if cells < 1 {
                return Err(usage("--j must be at least 1"));
            }
            let mut table = Table::new("pmf-borel", vec!["j", "decimal"]);
            table.param("cells", cells as u64);
            for m in 1..=cells {
                table.push(vec![Cell::Int(m as u64), Cell::Float(borel_pmf(m))]);
            }
            table
        }
    };
    Ok(Outcome::Table { table, pass: true })
}

/// `sample`: seeded draws from the uniform parking-function law with one
/// row of statistics per draw. Draw `idx` uses its own RNG stream, so any
/// prefix of the table is reproducible independently of `--samples`.
pub fn sample(n: usize, samples: u64, seed: u64, stat: Stat) -> Result<Outcome, CliError> {
    if n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    let mut columns: Vec<&'static str> = vec!["sample"];
    let (want_l, want_log, want_lrmax, want_last) = match stat {
        Stat::L => (true, false, false, false),
        Stat::LogL => (false, true, false, false),
        Stat::Lrmax => (false, false, true, false),
        Stat::LastSpace => (false, false, false, true),
        Stat::All => (true, true, true, true),
    };
    if want_l {
        columns.push("l");
    }
    if want_log {
        columns.push("log_l");
    }
    if want_lrmax {
        columns.push("lrmax");
    }
    if want_last {
        columns.push("last_space");
    }
    let mut table = Table::new("sample", columns);
    table.param("n", n as u64);
    table.param("samples", samples);
    table.param("seed", seed);

    let mut sampler = UniformSampler::new(n);
    let mut sim = Simulator::new(n);
    for idx in 0..samples {
        let mut rng = stream_rng(seed, idx);
        let prefs = sampler.sample_into(&mut rng).to_vec();
        let parked = sim.run(&prefs);
        debug_assert!(parked);
        let perm = Permutation::from_forward(sim.forward().to_vec())?;
        let mut row = vec![Cell::Int(idx)];
        if want_l {
            row.push(Cell::Text(stats::big_l(&perm).to_string()));
        }
        if want_log {
            row.push(Cell::Float(stats::log_big_l(&perm)));
        }
        if want_lrmax {
            row.push(Cell::Int(stats::lr_max_count(&perm) as u64));
        }
        if want_last {
            row.push(Cell::Int(perm.space_of_car(n) as u64));
        }
        table.push(row);
    }
    Ok(Outcome::Table { table, pass: true })
}

/// `experiment`: runs one named experiment with its documented defaults
/// and returns the machine-readable report; the process exit code carries
/// the verdict.
pub fn experiment(
    name: ExperimentName,
    n: Option<usize>,
    j: Option<usize>,
    samples: Option<u64>,
    seed: u64,
    caps: &Caps,
) -> Result<Outcome, CliError> {
    let report = match name {
        ExperimentName::Wlln => {
            wlln_experiment(n.unwrap_or(2000), samples.unwrap_or(10_000), seed)
        }
        ExperimentName::Borel => {
            borel_experiment(n.unwrap_or(2000), samples.unwrap_or(100_000), seed)
        }
        ExperimentName::IncreasingOrder => {
            let top = n.unwrap_or(100_000);
            if top < 100 {
                return Err(usage("increasing-order sweeps n/100, n/10, n; --n must be >= 100"));
            }
            let sweep = [top / 100, top / 10, top];
            let j = j.unwrap_or(3);
            if j < 1 || j > sweep[0] {
                return Err(usage(format!("--j must be in 1..={} for this sweep", sweep[0])));
            }
            increasing_order_experiment(&sweep, j, samples.unwrap_or(10_000), seed)
        }
        ExperimentName::LastJLimit => {
            let j = j.unwrap_or(2);
            if !(1..=6).contains(&j) {
                return Err(usage("--j must be in 1..=6 for last-j-limit"));
            }
            let n = n.unwrap_or(2000);
            if n < 4 * j {
                return Err(usage("--n is too small for the requested --j"));
            }
            last_j_limit_experiment(n, j, samples.unwrap_or(200_000), seed)
        }
        ExperimentName::FirstCar => {
            first_car_experiment(n.unwrap_or(500), samples.unwrap_or(1_000_000), seed)
        }
        ExperimentName::LrmaxOrder => lrmax_order_experiment(n.unwrap_or(1_000_000), caps),
    };
    Ok(Outcome::Report(report))
}

/// `enumerate`: all preference vectors of size n with their parking
/// outcome and induced permutation, optionally filtered to parking
/// functions. Refused above the enumeration cap.
pub fn enumerate(n: usize, parking_only: bool, caps: &Caps) -> Result<Outcome, CliError> {
    if n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    let mut table = Table::new("enumerate", vec!["prefs", "parks", "permutation"]);
    table.param("n", n as u64);
    table.param("parking_only", parking_only);
    let mut parking = 0u64;
    for prefs in enumerate_preferences(n, caps)? {
        let outcome = simulate_parking(&prefs);
        if parking_only && !outcome.parked() {
            continue;
        }
        if outcome.parked() {
            parking += 1;
        }
        let joined: Vec<String> = prefs.as_slice().iter().map(|v| v.to_string()).collect();
        table.push(vec![
            Cell::Text(joined.join(" ")),
            Cell::Flag(outcome.parked()),
            Cell::Text(
                outcome.permutation().map(|p| p.one_line_key()).unwrap_or_default(),
            ),
        ]);
    }
    table.param("parking_count", parking);
    Ok(Outcome::Table { table, pass: true })
}
